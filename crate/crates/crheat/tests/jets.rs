//! Cross-checks of the exact jet engine against independent numeric routes
//! and closed forms.

use crheat::fsnormal::{f_recursion, frame_expansion, g_closed_form, g_from_f, xi_grades, JetMatrix};
use crheat::models::{chart_jet, christoffel, drift_field, sphere_frame_at, structure_functions, ModelSpec, StructureJet};
use crheat::poly::{Mono, Poly};
use crheat::scalar::{int, rat, Rational, Scalar};
use crheat::vfield::{apply_sequence, lie_bracket, VectorField};
use num_complex::Complex64;
use proptest::prelude::*;

fn rk4(n: usize, u: &[f64], steps: usize) -> Vec<f64> {
    let d = 2 * n + 1;
    let rhs = |q: &[f64]| -> Vec<f64> {
        let frame = sphere_frame_at(n, q);
        (0..d).map(|i| (0..d).map(|j| u[j] * frame[j][i]).sum()).collect()
    };
    let mut q = vec![0.0; d];
    let h = 1.0 / steps as f64;
    for _ in 0..steps {
        let add = |a: &[f64], b: &[f64], s: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + s * y).collect() };
        let k1 = rhs(&q);
        let k2 = rhs(&add(&q, &k1, h / 2.0));
        let k3 = rhs(&add(&q, &k2, h / 2.0));
        let k4 = rhs(&add(&q, &k3, h));
        for i in 0..d {
            q[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    q
}

/// Small points with the parabolic scaling `(δa, δb, δ²c)`.
fn small_points(n: usize, count: usize, delta: f64) -> Vec<Vec<f64>> {
    let d = 2 * n + 1;
    // a fixed quasi-random sequence keeps the test deterministic
    (0..count)
        .map(|k| {
            (0..d)
                .map(|i| {
                    let x = ((k * d + i + 1) as f64 * 0.618_033_988_749_895).fract() * 2.0 - 1.0;
                    if i == d - 1 {
                        x * delta * delta
                    } else {
                        x * delta
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn chart_jet_matches_runge_kutta_flow() {
    let n = 1;
    let jet = chart_jet(&ModelSpec::sphere(n), 7).unwrap();
    for u in small_points(n, 20, 0.03) {
        let exact = rk4(n, &u, 200);
        let approx = jet.eval(&u);
        let err: f64 = exact.iter().zip(&approx).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let size: f64 = exact.iter().map(|a| a * a).sum::<f64>().sqrt();
        assert!(err <= 1e-8 * size, "u = {u:?}: relative error {}", err / size);
    }
}

/// `X̂_k(u) = DE(u)^{-1} X_k(E(u))` evaluated from the chart jet.
fn pushforward(n: usize, jet_order: usize, u: &[f64]) -> Vec<Vec<f64>> {
    let d = 2 * n + 1;
    let jet = chart_jet(&ModelSpec::sphere(n), jet_order).unwrap();
    let q = jet.eval(u);
    let jac = nalgebra::DMatrix::from_fn(d, d, |i, j| jet.coords[i].deriv(j).eval_f64(u));
    let lu = jac.lu();
    sphere_frame_at(n, &q)
        .into_iter()
        .map(|x| lu.solve(&nalgebra::DVector::from_vec(x)).unwrap().iter().copied().collect())
        .collect()
}

#[test]
fn frame_agrees_with_the_jacobian_pushforward() {
    for n in [1, 2] {
        let frame = frame_expansion(&ModelSpec::sphere(n), 5).unwrap();
        for u in small_points(n, 6, 0.05) {
            let push = pushforward(n, 7, &u);
            for (k, field) in frame.fields.iter().chain([&frame.reeb]).enumerate() {
                for (i, c) in field.coeffs().iter().enumerate() {
                    let v = c.eval_f64(&u);
                    assert!((v - push[k][i]).abs() < 1e-7, "n={n} field {k} comp {i}: {v} vs {}", push[k][i]);
                }
            }
        }
    }
}

#[test]
fn christoffel_symbol_matches_the_commutator() {
    // Z = (X_1 + i X_2)/√2; the Z-coefficient of [Z, Z̄] is −Γ^1_{1̄1}
    let n = 1;
    for q in [[0.6, 0.0, 0.0], [0.3, -0.2, 0.4]] {
        let h = 1e-6;
        let field = |q: &[f64], k: usize| sphere_frame_at(n, q)[k].clone();
        let deriv = |k: usize, j: usize| -> Vec<f64> {
            let (mut a, mut b) = (q.to_vec(), q.to_vec());
            a[j] += h;
            b[j] -= h;
            field(&a, k).iter().zip(field(&b, k)).map(|(x, y)| (x - y) / (2.0 * h)).collect()
        };
        let (x1, x2) = (field(&q, 0), field(&q, 1));
        let bracket: Vec<f64> = (0..3)
            .map(|i| (0..3).map(|j| x1[j] * deriv(1, j)[i] - x2[j] * deriv(0, j)[i]).sum())
            .collect();
        let basis = nalgebra::Matrix3::from_fn(|i, k| field(&q, k)[i]);
        let c = basis.lu().solve(&nalgebra::Vector3::from_column_slice(&bracket)).unwrap();
        let z_coef = -Complex64::new(c[1], c[0]) / std::f64::consts::SQRT_2;
        let r2 = q[0] * q[0] + q[1] * q[1];
        let z = [Complex64::new(q[0], q[1]), Complex64::new((1.0 - r2 - q[2] * q[2]).sqrt(), q[2])];
        let gamma = christoffel(&ModelSpec::sphere(n)).gamma_barbeta_alpha(&z, 0, 0, 0);
        assert!((z_coef + gamma).norm() < 1e-6, "q = {q:?}: {z_coef} vs −{gamma}");
    }
    // the documented sample value
    let z = [Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0)];
    let g = christoffel(&ModelSpec::sphere(1)).gamma_barbeta_alpha(&z, 0, 0, 0);
    assert!((g - Complex64::new(0.375, 0.0)).norm() < 1e-12);
}

#[test]
fn drift_linear_part_from_differentiated_christoffel_symbols() {
    for n in [1, 2] {
        let model = ModelSpec::sphere(n);
        let d = 2 * n + 1;
        let drift = drift_field(&model, 1).unwrap();
        let jet = chart_jet(&model, 6).unwrap();
        let gam = christoffel(&model);
        let trace = |u: &[f64], a: usize| -> Complex64 {
            let q = jet.eval(u);
            let r2: f64 = q[..2 * n].iter().map(|v| v * v).sum();
            let mut z: Vec<Complex64> = (0..n).map(|b| Complex64::new(q[b], q[n + b])).collect();
            z.push(Complex64::new((1.0 - r2 - q[2 * n] * q[2 * n]).sqrt(), q[2 * n]));
            (0..n).map(|b| gam.trace_term(&z, a, b)).sum()
        };
        let h = 1e-5;
        for k in 0..d {
            let mut up = vec![0.0; d];
            let mut dn = vec![0.0; d];
            up[k] = h;
            dn[k] = -h;
            for a in 0..n {
                let dg = (trace(&up, a) - trace(&dn, a)) / (2.0 * h);
                let want_re = -std::f64::consts::SQRT_2 * dg.re;
                let want_im = std::f64::consts::SQRT_2 * dg.im;
                let lin = |i: usize| drift.coeff(i).coeff(&Mono::var(d, k)).to_f64();
                assert!((lin(a) - want_re).abs() < 1e-6, "n={n} ∂_{k} drift^{a}: {} vs {want_re}", lin(a));
                assert!((lin(n + a) - want_im).abs() < 1e-6, "n={n} ∂_{k} drift^{}: {} vs {want_im}", n + a, lin(n + a));
            }
            assert!(drift.coeff(d - 1).coeff(&Mono::var(d, k)).is_zero());
        }
        assert!(drift.at_origin().iter().all(Scalar::is_zero));
    }
}

fn antisymmetric_jet(n: usize, entries: &[(usize, usize, usize, i64, Vec<i64>)]) -> StructureJet {
    let d = 2 * n + 1;
    let mut c = StructureJet::zero(n, 1);
    for (i, j, k, c0, lin) in entries {
        if j == k {
            continue;
        }
        let mut p = Poly::constant(d, int(*c0));
        for (l, a) in lin.iter().enumerate() {
            p = p.add(&Poly::var(d, l).scale(&rat(*a, 3)));
        }
        c.set_antisym(*i, *j, *k, p);
    }
    c
}

fn jet_strategy() -> impl Strategy<Value = Vec<(usize, usize, usize, i64, Vec<i64>)>> {
    prop::collection::vec((0usize..3, 0usize..3, 0usize..3, -3i64..=3, prop::collection::vec(-3i64..=3, 3)), 1..8)
}

fn grade(a: &JetMatrix, b: &JetMatrix) -> bool {
    (0..a.dim()).all(|j| (0..a.dim()).all(|k| a.get(j, k) == b.get(j, k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn low_grades_match_their_closed_forms(entries in jet_strategy()) {
        let c = antisymmetric_jet(1, &entries);
        let big = 64;
        let xi = xi_grades(&c, 3);
        let gs = g_from_f(&f_recursion(&xi, 3, big), big);
        prop_assert!(grade(&gs[1], &g_closed_form(&c, 1).unwrap()));
        prop_assert!(grade(&gs[2], &g_closed_form(&c, 2).unwrap()));
        // the recursion itself gives Ξ₂/4 + Ξ₀Ξ₁/12 + Ξ₁Ξ₀/24 at grade three
        let want = xi[2]
            .scale(&rat(1, 4))
            .add(&xi[0].mul_trunc(&xi[1], big).scale(&rat(1, 12)))
            .add(&xi[1].mul_trunc(&xi[0], big).scale(&rat(1, 24)));
        prop_assert!(grade(&gs[3], &want));
    }

    #[test]
    fn g_inverts_f_exactly(entries in jet_strategy()) {
        let c = antisymmetric_jet(1, &entries);
        let big = 64;
        let fs = f_recursion(&xi_grades(&c, 4), 4, big);
        let gs = g_from_f(&fs, big);
        for a in 1..=4 {
            let mut acc = JetMatrix::zero(3, a);
            for b in 0..=a {
                acc = acc.add(&gs[b].mul_trunc(&fs[a - b], big));
            }
            prop_assert!(acc.is_zero(), "grade {}", a);
        }
    }
}

#[test]
fn xi_grades_have_the_expected_degree() {
    let c = structure_functions(&ModelSpec::sphere(1), 3).unwrap();
    for (b, x) in xi_grades(&c, 3).iter().enumerate() {
        for j in 0..3 {
            for k in 0..3 {
                assert!(x.get(j, k).terms().all(|(m, _)| m.degree() == b + 1));
            }
        }
    }
    let h = xi_grades(&structure_functions(&ModelSpec::heisenberg(1), 3).unwrap(), 2);
    assert_eq!(h[0].get(2, 0), &Poly::var(3, 1).scale(&int(-2)));
    assert_eq!(h[0].get(2, 1), &Poly::var(3, 0).scale(&int(2)));
    assert!(h[1].is_zero() && h[2].is_zero());
}

#[test]
fn frames_are_stable_under_truncation() {
    for model in [ModelSpec::sphere(1), ModelSpec::sphere(2), ModelSpec::heisenberg(2)] {
        for a in 2..=5 {
            let hi = frame_expansion(&model, a).unwrap();
            let lo = frame_expansion(&model, a - 1).unwrap();
            for (x, y) in hi.fields.iter().zip(&lo.fields) {
                assert_eq!(&x.truncate(a - 1), y, "{model:?} order {a}");
            }
        }
    }
}

fn weight_trunc(v: &VectorField<Rational>, w: usize) -> VectorField<Rational> {
    VectorField::new(v.coeffs().iter().map(|c| c.truncate(w)).collect())
}

#[test]
fn brackets_close_on_the_structure_functions() {
    for n in [1, 2] {
        let model = ModelSpec::sphere(n);
        let d = 2 * n + 1;
        let frame = frame_expansion(&model, 5).unwrap();
        let c = structure_functions(&model, 5).unwrap();
        let all: Vec<VectorField<Rational>> = frame.fields.iter().cloned().chain([frame.reeb.clone()]).collect();
        for j in 0..d {
            for k in 0..d {
                let br = lie_bracket(&all[j], &all[k]).unwrap();
                let mut rhs = VectorField::zero(d);
                for (i, x) in all.iter().enumerate() {
                    rhs = rhs.add(&x.mul_poly(c.get(i, j, k)));
                }
                assert!(weight_trunc(&br.sub(&rhs), 2).is_zero(), "n={n} [{j},{k}]");
            }
        }
    }
}

#[test]
fn structure_functions_satisfy_jacobi() {
    let model = ModelSpec::sphere(1);
    let d = 3;
    let frame = frame_expansion(&model, 5).unwrap();
    let c = structure_functions(&model, 5).unwrap();
    assert!(c.is_antisymmetric());
    let all: Vec<VectorField<Rational>> = frame.fields.iter().cloned().chain([frame.reeb.clone()]).collect();
    for (i, j, k) in [(0, 1, 2), (0, 0, 1), (1, 2, 2)] {
        for m in 0..d {
            let mut acc = Poly::zero(d);
            for (a, b, e) in [(i, j, k), (j, k, i), (k, i, j)] {
                acc = acc.add(&all[a].apply(c.get(m, b, e)));
                for l in 0..d {
                    acc = acc.add(&c.get(l, b, e).mul(c.get(m, a, l)));
                }
            }
            assert!(acc.truncate(2).is_zero(), "({i},{j},{k}) component {m}: {acc}");
        }
    }
}

#[test]
fn horizontal_fields_and_a_bracket_span_at_the_origin() {
    for model in [ModelSpec::heisenberg(2), ModelSpec::sphere(1), ModelSpec::sphere(2)] {
        let n = model.n;
        let d = model.dim();
        let frame = frame_expansion(&model, 2).unwrap();
        let mut cols: Vec<Vec<f64>> = frame.fields.iter().map(|f| f.at_origin().iter().map(Scalar::to_f64).collect()).collect();
        for a in 0..n {
            let b = lie_bracket(&frame.fields[a], &frame.fields[n + a]).unwrap();
            cols.push(b.at_origin().iter().map(Scalar::to_f64).collect());
        }
        let m = nalgebra::DMatrix::from_fn(d, cols.len(), |i, k| cols[k][i]);
        assert_eq!(m.rank(1e-12), d, "{model:?}");
    }
}

#[test]
fn sphere_frame_display_terms() {
    for n in [1, 2] {
        let d = 2 * n + 1;
        let frame = frame_expansion(&ModelSpec::sphere(n), 4).unwrap();
        let mono = |pairs: &[(usize, u8)]| {
            let mut e = vec![0u8; d];
            for &(i, k) in pairs {
                e[i] += k;
            }
            Mono::from_exps(&e)
        };
        for a in 0..n {
            let xa = &frame.fields[a];
            let xna = &frame.fields[n + a];
            for j in 0..2 * n {
                let sq = mono(&[(j, 2)]);
                let want = if j == a { int(0) } else { rat(1, 12) };
                // (1/12)Σ(u^j)² ∂_α combines with −(1/12)u^α u^j ∂_j at j = α
                assert_eq!(xa.coeff(a).coeff(&sq), want, "n={n} α={a} j={j}");
                if j != a {
                    assert_eq!(xa.coeff(j).coeff(&mono(&[(a, 1), (j, 1)])), rat(-1, 12));
                }
            }
            assert_eq!(xa.coeff(n + a).coeff(&mono(&[(d - 1, 1)])), rat(1, 4));
            assert_eq!(xna.coeff(a).coeff(&mono(&[(d - 1, 1)])), rat(-1, 4));
            assert_eq!(xa.coeff(d - 1).coeff(&mono(&[(a, 1), (d - 1, 1)])), rat(1, 12));
            assert_eq!(xna.coeff(d - 1).coeff(&mono(&[(n + a, 1), (d - 1, 1)])), rat(1, 12));
            assert_eq!(xa.coeff(d - 1).coeff(&mono(&[(n + a, 1)])), int(-1));
            assert_eq!(xna.coeff(d - 1).coeff(&mono(&[(a, 1)])), int(1));
        }
        // the horizontal coefficients of the weight-2 truncation carry nothing else
        for (k, f) in frame.fields.iter().enumerate() {
            let t = f.truncate(2);
            for i in 0..2 * n {
                let extra = t.coeff(i).terms().filter(|(m, _)| m.weight() == 1).count();
                assert_eq!(extra, 0, "n={n} field {k} comp {i} has weight-one terms");
            }
        }
    }
}

#[test]
fn first_letters_and_heisenberg_areas() {
    for model in [ModelSpec::heisenberg(2), ModelSpec::sphere(1)] {
        let n = model.n;
        let d = model.dim();
        let frame = frame_expansion(&model, 3).unwrap();
        let mut fields = vec![VectorField::zero(d)];
        fields.extend(frame.fields.iter().cloned());
        for j in 1..=2 * n {
            assert_eq!(apply_sequence(&fields, &[j], j - 1).unwrap(), int(1));
            assert_eq!(apply_sequence(&fields, &[j], d - 1).unwrap(), int(0));
        }
        if model.kind == crheat::ModelKind::Heisenberg {
            for a in 1..=n {
                assert_eq!(apply_sequence(&fields, &[a, n + a], d - 1).unwrap(), int(1));
                assert_eq!(apply_sequence(&fields, &[n + a, a], d - 1).unwrap(), int(-1));
            }
        }
    }
}
