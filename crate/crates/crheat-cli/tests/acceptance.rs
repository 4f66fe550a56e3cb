//! Acceptance suite: one PASS/FAIL line per criterion, followed by the
//! numbers behind it.
//!
//! Some criteria compare against displayed formulas that disagree with what
//! the derivation gives. Those are evaluated as stated and reported as
//! `FAIL (expected)`; only unexpected failures make the target fail.
//!
//! `CRHEAT_EXTENDED=1` runs the long version: 10⁷ paths for the c₁
//! cross-estimate and 10⁶ sphere paths for the fit it is compared with.

use crheat::fsnormal::{f_recursion, frame_expansion, g_closed_form, g_from_f, xi_grades, JetMatrix};
use crheat::heat::c1::{c1_conditional, C1Config, Functional, PhiRule};
use crheat::heat::experiment::{heat_kernel_run, EstimateSet, HeatResult, HeatRun};
use crheat::heat::fit::{fit_expansion, ExpansionReport};
use crheat::heat::gaveau::gaveau_c0;
use crheat::heat::hormander::{default_eps_grid, hormander_inf};
use crheat::heat::kde::{Bandwidth, Richardson};
use crheat::heat::remainder::remainder_scaling;
use crheat::heat::system::{DEFAULT_GUARD, SIMULATION_ORDER};
use crheat::heat::taylor::{taylor_coefficients, TaylorCoefficients, TaylorTerm};
use crheat::models::{StructureJet, ModelSpec};
use crheat::poly::{Mono, Poly};
use crheat::scalar::{int, rat, rat_to_f64, Rational};
use crheat::vfield::VectorField;
use crheat::wiener::{path_rng, Kappa4Form};
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Default)]
struct Suite {
    unexpected: Vec<&'static str>,
}

impl Suite {
    /// Print the verdict for one criterion. `expected_red` marks criteria
    /// whose stated form is known not to hold.
    fn report(&mut self, name: &'static str, pass: bool, expected_red: bool, started: Instant, details: &str) {
        let verdict = match (pass, expected_red) {
            (true, false) => "PASS",
            (true, true) => "PASS (was expected to fail)",
            (false, true) => "FAIL (expected)",
            (false, false) => "FAIL",
        };
        println!("{verdict:<28} {name}  [{:.1} s]", started.elapsed().as_secs_f64());
        for line in details.lines() {
            println!("    {line}");
        }
        if !pass && !expected_red {
            self.unexpected.push(name);
        }
    }
}

fn extended() -> bool {
    std::env::var("CRHEAT_EXTENDED").is_ok_and(|v| v == "1")
}

// ---------------------------------------------------------------- exact part

fn random_jet(seed: u64) -> StructureJet {
    let (n, d) = (1, 3);
    let mut rng = path_rng(seed, 0);
    let mut c = StructureJet::zero(n, 2);
    for i in 0..d {
        for j in 0..d {
            for k in j + 1..d {
                let mut p = Poly::constant(d, rat(rng.random_range(-4..=4), rng.random_range(1..=3)));
                for l in 0..d {
                    p = p.add(&Poly::var(d, l).scale(&rat(rng.random_range(-4..=4), rng.random_range(1..=3))));
                    for m in l..d {
                        let q = Poly::var(d, l).mul(&Poly::var(d, m));
                        p = p.add(&q.scale(&rat(rng.random_range(-2..=2), rng.random_range(1..=3))));
                    }
                }
                c.set_antisym(i, j, k, p);
            }
        }
    }
    c
}

fn same(a: &JetMatrix, b: &JetMatrix) -> bool {
    (0..a.dim()).all(|j| (0..a.dim()).all(|k| a.get(j, k) == b.get(j, k)))
}

fn jet_grades(s: &mut Suite) {
    let t0 = Instant::now();
    let mut ok = [0usize; 3];
    let trials = 8;
    let mut commutator_gap = true;
    for seed in 0..trials {
        let c = random_jet(seed);
        let xi = xi_grades(&c, 3);
        let big = 64;
        let gs = g_from_f(&f_recursion(&xi, 3, big), big);
        for (g, hit) in ok.iter_mut().enumerate() {
            if same(&gs[g + 1], &g_closed_form(&c, g + 1).unwrap()) {
                *hit += 1;
            }
        }
        // the recursion differs from the displayed third grade by exactly [Ξ₀, Ξ₁]/24
        let comm = xi[0].mul_trunc(&xi[1], big).add(&xi[1].mul_trunc(&xi[0], big).scale(&int(-1))).scale(&rat(1, 24));
        let gap = g_closed_form(&c, 3).unwrap().add(&gs[3].scale(&int(-1)));
        commutator_gap &= same(&gap, &comm);
    }
    let pass = ok.iter().all(|&k| k == trials as usize);
    let mut d = String::new();
    for (g, k) in ok.iter().enumerate() {
        let _ = writeln!(d, "G^({}) closed form = recursion on {k}/{trials} random jets", g + 1);
    }
    let _ = writeln!(d, "recursion: G^(3) = Ξ₂/4 + Ξ₀Ξ₁/12 + Ξ₁Ξ₀/24; displayed: Ξ₂/4 + Ξ₀Ξ₁/8");
    let _ = writeln!(d, "displayed − recursion = [Ξ₀, Ξ₁]/24 on every jet: {commutator_gap}");
    s.report("exact jet grades G^(1), G^(2), G^(3)", pass, true, t0, &d);
}

fn heisenberg_flat(s: &mut Suite) {
    let t0 = Instant::now();
    let mut pass = true;
    let mut d = String::new();
    for n in [1, 2] {
        let m = ModelSpec::heisenberg(n);
        let f = frame_expansion(&m, 5).unwrap();
        let dim = m.dim();
        for a in 0..n {
            let mut xa = VectorField::coordinate(dim, a);
            xa = xa.add(&VectorField::coordinate(dim, dim - 1).mul_poly(&Poly::var(dim, n + a).scale(&int(-1))));
            let mut xna = VectorField::coordinate(dim, n + a);
            xna = xna.add(&VectorField::coordinate(dim, dim - 1).mul_poly(&Poly::var(dim, a)));
            pass &= f.fields[a] == xa && f.fields[n + a] == xna;
        }
        let c = taylor_coefficients(&m, 5).unwrap();
        let nonzero: Vec<usize> = (2..=5).filter(|&a| c.phi_terms(a).next().is_some()).collect();
        pass &= nonzero.is_empty();
        let _ = writeln!(d, "n={n}: order-5 frame is ∂_α − u^(n+α)∂_T, ∂_(n+α) + u^α∂_T; φ^a nonzero for a in {nonzero:?}");
    }
    s.report("Heisenberg flat frame, φ^a = 0 for a = 2..5", pass, false, t0, &d);
}

/// The displayed third-order terms, collected by word, keyed by zero-based
/// component. `corrected` swaps α for n+α where the display of `φ^{3,n+α}`
/// repeats the `φ^{3,α}` indices.
fn displayed_phi3(n: usize, corrected: bool) -> BTreeMap<(usize, Vec<usize>), Rational> {
    let mut m: BTreeMap<(usize, Vec<usize>), Rational> = BTreeMap::new();
    let mut put = |i: usize, w: Vec<usize>, c: Rational| {
        let e = m.entry((i - 1, w)).or_insert_with(|| int(0));
        *e += c;
    };
    for a in 1..=n {
        for (comp, own, sgn) in [(a, a, 1), (n + a, if corrected { n + a } else { a }, -1)] {
            for j in 1..=2 * n {
                put(comp, vec![j, j, own], rat(1, 6));
                put(comp, vec![j, own, j], rat(-1, 12));
                put(comp, vec![own, j, j], rat(-1, 12));
            }
            let target = if comp == a { n + a } else { a };
            for b in 1..=n {
                put(comp, vec![n + b, b, target], rat(sgn, 4));
                put(comp, vec![b, n + b, target], rat(-sgn, 4));
            }
            put(comp, vec![own, 0], rat(-(n as i64), 2));
        }
        let top = 2 * n + 1;
        for j in 1..=2 * n {
            let na = n + a;
            for (w, c) in [
                (vec![j, j, a, na], rat(5, 12)),
                (vec![j, j, na, a], rat(-5, 12)),
                (vec![j, a, j, na], rat(1, 6)),
                (vec![j, na, j, a], rat(-1, 6)),
                (vec![na, j, a, j], rat(-1, 12)),
                (vec![a, j, na, j], rat(1, 12)),
                (vec![j, na, a, j], rat(-1, 12)),
                (vec![j, a, na, j], rat(1, 12)),
            ] {
                put(top, w, c);
            }
        }
        put(top, vec![a, 0, n + a], rat(-(n as i64), 2));
        put(top, vec![n + a, 0, a], rat(n as i64, 2));
    }
    m.retain(|_, c| *c != int(0));
    m
}

fn derived_phi3(c: &TaylorCoefficients) -> BTreeMap<(usize, Vec<usize>), Rational> {
    c.phi_terms(3).map(|t| ((t.component, t.word.clone()), t.exact.clone())).collect()
}

fn restrict(m: &BTreeMap<(usize, Vec<usize>), Rational>, keep: impl Fn(usize) -> bool) -> BTreeMap<(usize, Vec<usize>), Rational> {
    m.iter().filter(|((i, _), _)| keep(*i)).map(|(k, v)| (k.clone(), v.clone())).collect()
}

fn sphere_coefficients(s: &mut Suite) {
    let t0 = Instant::now();
    let mut d = String::new();
    let mut matched = true;
    let mut cubic_matches = true;
    for n in [1, 2] {
        let dim = 2 * n + 1;
        let top = dim - 1;
        let f = frame_expansion(&ModelSpec::sphere(n), 3).unwrap();
        let mono = |pairs: &[(usize, u8)]| {
            let mut e = vec![0u8; dim];
            pairs.iter().for_each(|&(i, k)| e[i] += k);
            Mono::from_exps(&e)
        };
        let coeff = |field: &VectorField<Rational>, comp: usize, m: Mono| field.coeff(comp).coeff(&m);
        for a in 0..n {
            let (xa, xna) = (&f.fields[a], &f.fields[n + a]);
            let na = n + a;
            // a horizontal index other than the field's own
            let (jx, jy) = (na, a);
            let checks: [(&str, Rational, Rational); 8] = [
                ("X̂_α: (1/12)(u^j)²∂_α", coeff(xa, a, mono(&[(jx, 2)])), rat(1, 12)),
                ("X̂_α: (1/4)u^T ∂_(n+α)", coeff(xa, na, mono(&[(top, 1)])), rat(1, 4)),
                ("X̂_α: −(1/12)u^α u^j ∂_j", coeff(xa, jx, mono(&[(a, 1), (jx, 1)])), rat(-1, 12)),
                ("X̂_α: (1/12)u^α u^T ∂_T", coeff(xa, top, mono(&[(a, 1), (top, 1)])), rat(1, 12)),
                ("X̂_(n+α): −(1/4)u^T ∂_α", coeff(xna, a, mono(&[(top, 1)])), rat(-1, 4)),
                ("X̂_(n+α): (1/12)(u^j)²∂_(n+α)", coeff(xna, na, mono(&[(jy, 2)])), rat(1, 12)),
                ("X̂_(n+α): −(1/12)u^(n+α)u^j ∂_j", coeff(xna, jy, mono(&[(na, 1), (jy, 1)])), rat(-1, 12)),
                ("X̂_(n+α): (1/12)u^(n+α)u^T ∂_T", coeff(xna, top, mono(&[(na, 1), (top, 1)])), rat(1, 12)),
            ];
            for (what, got, want) in checks {
                if got != want {
                    matched = false;
                    let _ = writeln!(d, "n={n} α={}: {what}: got {got}", a + 1);
                }
            }
            // cubic ∂_T terms: −(1/8)u^(n+α)(u^j)² and +(1/8)u^α(u^j)² are displayed
            let ours_a = coeff(xa, top, mono(&[(na, 1), (jy, 2)]));
            let ours_na = coeff(xna, top, mono(&[(a, 1), (jx, 2)]));
            cubic_matches &= ours_a == rat(-1, 8) && ours_na == rat(1, 8);
            if a == 0 {
                let _ = writeln!(d, "n={n}: cubic ∂_T coefficients derived {ours_a} / {ours_na}, displayed -1/8 / 1/8");
                let sign = coeff(xna, top, mono(&[(a, 1)]));
                let _ = writeln!(d, "n={n}: X̂_(n+α) linear ∂_T coefficient of u^α is {sign} (displayed −1; sign question)");
            }
        }
    }
    let _ = writeln!(d, "quadratic and weight-2 frame coefficients 1/12, 1/4, −1/12, 1/12 all match: {matched}");

    let mut phi2_zero = true;
    let mut phi3_top = true;
    for n in [1, 2] {
        let c = taylor_coefficients(&ModelSpec::sphere(n), 3).unwrap();
        phi2_zero &= c.phi_terms(2).next().is_none();
        let top = 2 * n;
        let ours = derived_phi3(&c);
        let shown = displayed_phi3(n, false);
        let fixed = displayed_phi3(n, true);
        let horiz = |i: usize| i < n;
        let vert = |i: usize| i >= n && i < 2 * n;
        let is_top = |i: usize| i == top;
        let eq = |f: &dyn Fn(usize) -> bool, a: &BTreeMap<_, _>| restrict(&ours, f) == restrict(a, f);
        let top_ok = eq(&is_top, &shown);
        phi3_top &= top_ok;
        let _ = writeln!(
            d,
            "n={n}: φ^(3,α) matches display {}; φ^(3,n+α) as displayed {}, with α→n+α {}; φ^(3,T) matches {}",
            eq(&horiz, &shown),
            eq(&vert, &shown),
            eq(&vert, &fixed),
            top_ok
        );
        if n == 1 {
            let mut diff = String::new();
            for ((i, w), v) in restrict(&ours, is_top) {
                let p = shown.get(&(i, w.clone())).cloned().unwrap_or_else(|| int(0));
                let _ = write!(diff, " {w:?}:{v}/{p}");
            }
            for ((i, w), p) in restrict(&shown, is_top) {
                if !ours.contains_key(&(i, w.clone())) {
                    let _ = write!(diff, " {w:?}:0/{p}");
                }
            }
            let _ = writeln!(d, "n=1 φ^(3,T) derived/displayed by word:{diff}");
        }
    }
    let _ = writeln!(d, "φ² = 0: {phi2_zero}");
    let pass = matched && cubic_matches && phi2_zero && phi3_top;
    s.report("sphere frame and φ coefficients", pass, true, t0, &d);
}

fn gaveau(s: &mut Suite) {
    let t0 = Instant::now();
    let c0 = gaveau_c0(1).unwrap();
    let elapsed = t0.elapsed().as_secs_f64();
    // ∫₀^∞ s/sinh s ds = π²/4
    let closed = (std::f64::consts::PI.powi(2) / 4.0) / (4.0 * std::f64::consts::PI.powi(2));
    let pass = (c0 - 0.0625).abs() <= 1e-10 && (c0 - closed).abs() <= 1e-10 && elapsed < 0.1;
    s.report("Gaveau constant c0(1)", pass, false, t0, &format!("c0(1) = {c0:.15} in {elapsed:.4} s (closed form {closed})"));
}

// ---------------------------------------------------------- Monte Carlo part

fn richardson() -> Bandwidth {
    Bandwidth::Richardson(Richardson::new(0.6, 0.8).unwrap())
}

fn heat_run(model: ModelSpec, ts: &[f64], paths: u64, seeds: Vec<u64>) -> HeatResult {
    let run = HeatRun {
        model,
        ts: ts.to_vec(),
        seeds,
        paths,
        steps: 1 << 12,
        bandwidth: richardson(),
        order: SIMULATION_ORDER,
        guard: DEFAULT_GUARD,
    };
    heat_kernel_run(&run).unwrap()
}

/// Fit the rows `rows` of `set` (and the matching covariance block).
fn fit_rows(model: &ModelSpec, set: &EstimateSet, rows: std::ops::Range<usize>, t_order: usize) -> ExpansionReport {
    let cov: Vec<Vec<f64>> = set.cov[rows.clone()].iter().map(|r| r[rows.clone()].to_vec()).collect();
    fit_expansion(model, &set.rows[rows], Some(&cov), 2, t_order).unwrap()
}

fn describe(res: &HeatResult, n: usize) -> String {
    let mut d = String::new();
    for r in &res.plain.rows {
        let s = r.t.powi(n as i32 + 1);
        let _ = writeln!(d, "t = {:<8} t^(n+1)·p̂ = {:.5} ± {:.5}", r.t, r.estimate * s, r.stderr * s);
    }
    let _ = writeln!(d, "escapes {:?}", res.escapes);
    d
}

fn describe_fit(fit: &ExpansionReport) -> String {
    let (sf, tf) = (&fit.sqrt_fit, &fit.t_fit);
    let ts: Vec<f64> = fit.rows.iter().map(|r| r.t).collect();
    let mut d = format!("fits over t = {ts:?}\n");
    let _ = writeln!(d, "  √t fit: c0 {:.5} ± {:.5}, c_1/2 {:+.5} ± {:.5}", sf.coeffs[0], sf.stderr(0), sf.coeffs[1], sf.stderr(1));
    let _ = write!(d, "  t fit: ");
    for k in 0..tf.coeffs.len() {
        let _ = write!(d, " c{k} {:+.5} ± {:.5}", tf.coeffs[k], tf.stderr(k));
    }
    d.push('\n');
    d
}

fn odd_coefficients_zero(fit: &ExpansionReport) -> bool {
    fit.sqrt_fit.exponents.iter().enumerate().filter(|(_, e)| e.fract() != 0.0).all(|(k, _)| fit.sqrt_fit.z_score(k) <= 3.0)
}

struct SphereRun {
    fit: ExpansionReport,
}

fn monte_carlo_terms(s: &mut Suite) -> SphereRun {
    let c0 = gaveau_c0(1).unwrap();

    let t0 = Instant::now();
    let heis = ModelSpec::heisenberg(1);
    let ts = [0.1, 0.05, 0.025];
    let hres = heat_run(heis, &ts, 1_000_000, vec![11, 12, 13]);
    let hfit = fit_rows(&heis, &hres.plain, 0..3, 1);
    let hanti = fit_rows(&heis, &hres.antithetic, 0..3, 1);
    let within = hres.plain.rows.iter().all(|r| (r.estimate * r.t * r.t / c0 - 1.0).abs() <= 0.05);
    let flat = hfit.t_fit.z_score(1) <= 3.0;
    let mut d = describe(&hres, 1) + &describe_fit(&hfit);
    let _ = writeln!(d, "every t²p̂ within 5% of 1/16: {within}; slope in t at {:.2}σ", hfit.t_fit.z_score(1));
    s.report("Heisenberg leading term (10⁶ paths, 4096 steps)", within && flat, false, t0, &d);

    // The sphere has c₂ ≠ 0. A three-parameter √t fit leaks about −0.1·c₂ into
    // c_1/2 on t ∈ [0.025, 0.1]; the leak scales like t^{3/2}, so the odd
    // test uses the three smallest times. c₁ comes from a quadratic t fit
    // over all five, which absorbs c₂.
    let t0 = Instant::now();
    let sphere = ModelSpec::sphere(1);
    let sphere_paths = if extended() { 1_000_000 } else { 50_000 };
    let ts = [0.1, 0.05, 0.025, 0.0125, 0.00625];
    let sres = heat_run(sphere, &ts, sphere_paths, vec![21; 5]);
    let sodd = fit_rows(&sphere, &sres.plain, 2..5, 1);
    let santi = fit_rows(&sphere, &sres.antithetic, 2..5, 1);
    let sc1 = fit_rows(&sphere, &sres.plain, 0..5, 2);
    let pass = odd_coefficients_zero(&hfit) && odd_coefficients_zero(&sodd);
    let mut d = format!("sphere, {sphere_paths} paths with common random numbers:\n{}", describe(&sres, 1));
    d += &describe_fit(&sodd);
    d += &describe_fit(&sc1);
    let _ = writeln!(d, "c_1/2 at {:.2}σ (Heisenberg), {:.2}σ (sphere)", hfit.sqrt_fit.z_score(1), sodd.sqrt_fit.z_score(1));
    for (name, p, a) in [("Heisenberg", &hfit, &hanti), ("sphere", &sodd, &santi)] {
        let ratio = (p.sqrt_fit.stderr(1) / a.sqrt_fit.stderr(1)).powi(2);
        let _ = writeln!(
            d,
            "{name}: sign-flip variance ratio for c_1/2 = {ratio:.3} (informational: the fields are even in ε, so the reflected path has the same kernel value and no reduction is possible)"
        );
    }
    s.report("odd √t coefficients vanish (both models)", pass, false, t0, &d);
    SphereRun { fit: sc1 }
}

/// The sphere coefficients with the displayed `φ^{3,T}` substituted for the
/// derived one.
fn with_displayed_top(c: &TaylorCoefficients) -> TaylorCoefficients {
    let top = c.model.dim() - 1;
    let mut p = c.clone();
    p.terms.retain(|t| !(t.component == top && t.norm() == 4));
    for ((i, w), v) in displayed_phi3(c.model.n, false) {
        if i == top {
            p.terms.push(TaylorTerm { component: i, word: w, value: rat_to_f64(&v), exact: v });
        }
    }
    p
}

fn remainder(s: &mut Suite) {
    let t0 = Instant::now();
    let eps = [0.4, 0.2, 0.1, 0.05];
    let c = taylor_coefficients(&ModelSpec::sphere(1), 3).unwrap();
    let mut pass = true;
    let mut d = String::new();
    for a in [1, 3] {
        let r = remainder_scaling(&c, a, &eps, 50, 64, 16, 5).unwrap();
        pass &= r.slope >= a as f64 + 1.0 - 0.3;
        let _ = writeln!(d, "A = {a}: slope {:.3} (needs ≥ {:.1}), mean errors {:?}", r.slope, a as f64 + 0.7, r.mean_error);
    }
    let shown = remainder_scaling(&with_displayed_top(&c), 3, &eps, 50, 64, 16, 5).unwrap();
    let _ = writeln!(
        d,
        "displayed φ^(3,T) in place of the derived one: A = 3 slope {:.3}, errors {:?} (a wrong third-order term shows as slope ≈ 4 instead of 5)",
        shown.slope, shown.mean_error
    );
    s.report("remainder scaling of the Taylor expansion", pass, false, t0, &d);
}

fn hormander(s: &mut Suite) {
    let t0 = Instant::now();
    let h = hormander_inf(&ModelSpec::heisenberg(1), &default_eps_grid(), 10_000).unwrap();
    let sp = hormander_inf(&ModelSpec::sphere(1), &default_eps_grid(), 10_000).unwrap();
    let pass = (0.99..=1.01).contains(&h.min) && sp.min > 0.0;
    let d = format!(
        "Heisenberg grid minimum {:.6} (eigenvalue {:.6}); sphere grid minimum {:.6} at ε = {} (eigenvalue {:.6})",
        h.min, h.eigen_min, sp.min, sp.eps_at_min, sp.eigen_min
    );
    s.report("Hörmander positivity", pass, false, t0, &d);
}

fn cross_estimate(s: &mut Suite, sphere: &SphereRun) {
    let t0 = Instant::now();
    // the mollifier bias (≈ −2% at h₀ = 0.6) only matters once the standard
    // error is that small, so the long run also narrows the mollifier
    let (paths, steps, h0) = if extended() { (10_000_000, 128, 0.4) } else { (200_000, 64, 0.6) };
    let cfg = C1Config { n: 1, paths, steps, h0, seed: 17 };
    let printed = PhiRule::ClosedForm(Kappa4Form::Printed);
    let fs = [
        Functional::One,
        Functional::Printed(printed),
        Functional::Derived(printed),
        Functional::Derived(PhiRule::Rederived),
    ];
    let est = c1_conditional(&cfg, &fs).unwrap();
    let c0 = gaveau_c0(1).unwrap();
    let (fit, fit_se) = (sphere.fit.t_fit.coeffs[1], sphere.fit.t_fit.stderr(1));
    let agrees = |k: usize| (est[k].estimate - fit).abs() <= 3.0 * (est[k].stderr.powi(2) + fit_se.powi(2)).sqrt();
    let one_ok = (est[0].estimate - c0).abs() <= 3.0 * est[0].stderr;
    let mut d = format!("{paths} paths, {steps} steps, h0 = {h0}; fitted ĉ₁ = {fit:.5} ± {fit_se:.5}\n");
    for (k, e) in est.iter().enumerate() {
        let _ = writeln!(d, "{:<40} {:+.5} ± {:.5}{}", e.functional, e.estimate, e.stderr, if k == 0 { "" } else if agrees(k) { "  agrees" } else { "  disagrees" });
    }
    let _ = writeln!(d, "Φ ≡ 1 vs c0 = 1/16: {}", if one_ok { "within 3σ" } else { "outside 3σ" });
    let rederived_ok = agrees(3);
    let _ = writeln!(d, "rederived Φ with derived coefficients agrees with the fit: {rederived_ok}");
    let pass = one_ok && agrees(1);
    s.report("cross-estimator c₁ (sphere, n = 1)", pass, true, t0, &d);
    // the parts that do not depend on the displayed Φ must hold
    if !(one_ok && rederived_ok) {
        s.unexpected.push("cross-estimator c₁: Φ ≡ 1 or rederived Φ");
    }
}

fn main() {
    let mut s = Suite::default();
    println!("acceptance suite{}", if extended() { " (extended)" } else { "" });
    jet_grades(&mut s);
    heisenberg_flat(&mut s);
    sphere_coefficients(&mut s);
    gaveau(&mut s);
    let sphere = monte_carlo_terms(&mut s);
    remainder(&mut s);
    hormander(&mut s);
    cross_estimate(&mut s, &sphere);
    println!("{:<28} no literature value of c₁ for the sphere exists; the c₁ line is a consistency check", "INFO");
    if !s.unexpected.is_empty() {
        eprintln!("unexpected failures: {:?}", s.unexpected);
        std::process::exit(1);
    }
}
