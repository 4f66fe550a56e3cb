//! `crheat` command line.
//!
//! Every subcommand builds its output as text first; [`run`] then prints it.
//! Exit codes: 0 success, 1 usage or input error, 2 failed `--check` or
//! golden comparison.

pub mod csv;

use clap::{Args, Parser, Subcommand};
use crheat::config::RunConfig;
use crheat::fsnormal::frame_expansion;
use crheat::heat::c1::{c1_conditional, C1Config, Functional, PhiRule};
use crheat::heat::experiment::{heat_kernel_run, HeatRun};
use crheat::heat::fit::fit_expansion;
use crheat::heat::gaveau::gaveau_c0;
use crheat::heat::hormander::{default_eps_grid, hormander_inf};
use crheat::heat::kde::{Bandwidth, Moments};
use crheat::heat::taylor::taylor_coefficients;
use crheat::models::{ModelKind, ModelSpec};
use crheat::par::{map_chunks, with_threads, CHUNK};
use crheat::vfield::MultiIndex;
use crheat::wiener::{sample_path, IteratedTable, Kappa4Form};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "crheat", version, about = "Heat-kernel asymptotics on CR manifolds")]
pub struct Cli {
    /// Worker threads (0 = one per core). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// `key = value` file overriding the defaults; flags override the file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Compare the result with its reference and exit 2 on failure.
    #[arg(long, global = true)]
    pub check: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long)]
    pub model: Option<ModelKind>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the truncated normal-coordinate frame.
    FsExpand {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 3)]
        order: usize,
        /// Compare with a stored golden file (exit 2 on mismatch).
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Empirical moments of the iterated integrals `B^J_1`.
    WienerMoments {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        paths: u64,
        #[arg(long, default_value_t = 256)]
        steps: usize,
        /// Largest `‖J‖`.
        #[arg(long, default_value_t = 3)]
        norm: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// The Heisenberg diagonal constant `c₀`.
    C0 {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Estimate `p(t, x, x)` on a grid of times.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated `ε` values (`t = ε²`).
        #[arg(long, conflicts_with = "t_list")]
        eps_list: Option<String>,
        /// Comma-separated `t` values.
        #[arg(long)]
        t_list: Option<String>,
        #[arg(long)]
        paths: Option<u64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// `h` or `h1:h2` (Richardson pair).
        #[arg(long)]
        bandwidth: Option<String>,
        /// Reuse one seed for every time instead of `seed + k`.
        #[arg(long)]
        common_seeds: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit `t^{n+1} p̂(t)` from a `simulate` file.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        /// Order `A` of the `√t` fit; the `t` fit uses `⌊A/2⌋` (at least 1).
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// The first sphere correction `c₁` by the conditional-expectation route.
    C1Sphere {
        #[arg(long)]
        paths: Option<u64>,
        /// Mollifier width `h₀`.
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Grid infimum of the Hörmander form.
    Hormander {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 2000)]
        grid: usize,
    },
    /// The third-order Taylor coefficients `(X̂_J u^i)(0)`.
    Phi3 {
        #[command(flatten)]
        model: ModelArgs,
    },
}

/// What a subcommand produced.
#[derive(Debug, Default, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {msg}\n"), code: 1 }
    }

    /// Fail with exit code 2 unless `passed`.
    fn checked(mut self, check: bool, passed: bool, what: &str) -> Self {
        if check {
            if passed {
                let _ = writeln!(self.stderr, "check passed: {what}");
            } else {
                let _ = writeln!(self.stderr, "check FAILED: {what}");
                self.code = 2;
            }
        }
        self
    }
}

type Res = std::result::Result<Outcome, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn timestamp() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn load_config(cli: &Cli) -> std::result::Result<RunConfig, String> {
    let mut c = RunConfig::default();
    if let Some(p) = &cli.config {
        let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
        c.apply_text(&text).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    Ok(c)
}

fn apply_model(c: &mut RunConfig, m: &ModelArgs) {
    if let Some(k) = m.model {
        c.model = k;
    }
    if let Some(n) = m.n {
        c.n = n;
    }
}

fn fs_expand(cli: &Cli, model: &ModelArgs, order: usize, golden: &Option<PathBuf>) -> Res {
    let mut c = load_config(cli)?;
    apply_model(&mut c, model);
    let frame = frame_expansion(&c.spec().map_err(err)?, order).map_err(err)?;
    let text = frame.to_text();
    let mut out = Outcome::ok(text.clone());
    if let Some(path) = golden {
        let want = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let same = want.trim_end() == text.trim_end();
        if !same {
            for (k, (a, b)) in want.lines().zip(text.lines()).enumerate() {
                if a != b {
                    let _ = writeln!(out.stderr, "first difference at line {}: golden `{a}` vs computed `{b}`", k + 1);
                    break;
                }
            }
        }
        out = out.checked(true, same, &format!("frame matches {}", path.display()));
    }
    Ok(out)
}

/// `E[B^J_1]` for Stratonovich integrals: the word must split into blocks
/// `0` and `jj`; then the value is `2^{-pairs}/blocks!`.
pub fn stratonovich_mean(word: &[usize]) -> f64 {
    fn go(w: &[usize]) -> Option<(u32, u32)> {
        match w {
            [] => Some((0, 0)),
            [0, rest @ ..] => go(rest).map(|(b, p)| (b + 1, p)),
            [a, b, rest @ ..] if a == b => go(rest).map(|(bl, p)| (bl + 1, p + 1)),
            _ => None,
        }
    }
    match go(word) {
        Some((blocks, pairs)) => {
            let fact: f64 = (1..=blocks).map(f64::from).product();
            0.5f64.powi(pairs as i32) / fact
        }
        None => 0.0,
    }
}

fn wiener_moments(cli: &Cli, seed: u64, paths: u64, steps: usize, norm: usize, n: usize) -> Res {
    if paths < 2 || steps == 0 || n == 0 || norm == 0 {
        return Err("wiener-moments needs paths ≥ 2, steps ≥ 1, n ≥ 1 and norm ≥ 1".into());
    }
    let words = MultiIndex::all_up_to_norm(2 * n + 1, norm);
    let parts = map_chunks(paths, CHUNK, |range| {
        let mut acc = vec![Moments::default(); words.len()];
        for idx in range {
            let mut t = IteratedTable::new(sample_path(seed, idx, steps, n));
            for (m, w) in acc.iter_mut().zip(&words) {
                m.push(t.at_one(&w.0));
            }
        }
        acc
    });
    let mut tot = vec![Moments::default(); words.len()];
    for p in parts {
        tot.iter_mut().zip(&p).for_each(|(t, x)| t.merge(x));
    }
    let mut s = String::from("word,mean,variance,stderr,expected_mean\n");
    let mut worst: f64 = 0.0;
    for (w, m) in words.iter().zip(&tot) {
        let label: Vec<String> = w.0.iter().map(ToString::to_string).collect();
        let e = stratonovich_mean(&w.0);
        let _ = writeln!(s, "{},{},{},{},{}", label.join(":"), m.mean(), m.variance(), m.stderr(), e);
        if m.stderr() > 0.0 {
            worst = worst.max((m.mean() - e).abs() / m.stderr());
        } else if (m.mean() - e).abs() > 1e-12 {
            worst = f64::INFINITY;
        }
    }
    // Bonferroni-style band over all words
    let band = 4.0 + (words.len() as f64).ln().sqrt();
    Ok(Outcome::ok(s).checked(cli.check, worst <= band, &format!("all means within {band:.2} standard errors (worst {worst:.2})")))
}

fn c0_cmd(cli: &Cli, n: usize) -> Res {
    let v = gaveau_c0(n).map_err(err)?;
    let out = Outcome::ok(format!("c0(n={n}) = {v:.12}\n"));
    // closed forms: ∫ s/sinh s = π²/4, ∫ (s/sinh s)² = π²/6
    let reference = match n {
        1 => Some(1.0 / 16.0),
        2 => Some(1.0 / (48.0 * std::f64::consts::PI)),
        _ => None,
    };
    Ok(match reference {
        Some(r) => out.checked(cli.check, (v - r).abs() < 1e-10, &format!("c0 = {r} within 1e-10")),
        None => out.checked(cli.check, v > 0.0, "c0 positive (no closed form for this n)"),
    })
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad number {x:?}"))).collect()
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    cli: &Cli,
    model: &ModelArgs,
    eps_list: &Option<String>,
    t_list: &Option<String>,
    paths: Option<u64>,
    steps: Option<usize>,
    seed: Option<u64>,
    bandwidth: &Option<String>,
    common_seeds: bool,
    out: &Option<PathBuf>,
) -> Res {
    let mut c = load_config(cli)?;
    apply_model(&mut c, model);
    if let Some(e) = eps_list {
        c.ts = parse_list(e)?.into_iter().map(|e| e * e).collect();
    }
    if let Some(t) = t_list {
        c.ts = parse_list(t)?;
    }
    if let Some(p) = paths {
        c.paths = p;
    }
    if let Some(s) = steps {
        c.steps = s;
    }
    if let Some(s) = seed {
        c.seed = s;
    }
    if let Some(b) = bandwidth {
        c.bandwidth = Bandwidth::parse(b).map_err(err)?;
    }
    if common_seeds {
        c.independent_seeds = false;
    }
    if let Some(o) = out {
        c.out = Some(o.display().to_string());
    }
    let spec = c.spec().map_err(err)?;
    let run = HeatRun {
        model: spec,
        ts: c.ts.clone(),
        seeds: (0..c.ts.len()).map(|k| c.seed_for(k)).collect(),
        paths: c.paths,
        steps: c.steps,
        bandwidth: c.bandwidth,
        order: c.order,
        guard: c.guard,
    };
    let res = heat_kernel_run(&run).map_err(err)?;
    let file = csv::EstimateFile { config: c.clone(), rows: res.plain.rows, cov: res.plain.cov, escapes: res.escapes };
    let text = csv::write(&file, timestamp());
    let c0 = gaveau_c0(c.n).map_err(err)?;
    let mut summary = String::new();
    let mut within = true;
    for (r, e) in file.rows.iter().zip(&file.escapes) {
        let scaled = r.estimate * r.t.powi(c.n as i32 + 1);
        let _ = writeln!(
            summary,
            "t = {:<8} p̂ = {:.6} ± {:.6}   t^{}·p̂ = {:.6} ± {:.6}   escapes {e}",
            r.t,
            r.estimate,
            r.stderr,
            c.n + 1,
            scaled,
            r.stderr * r.t.powi(c.n as i32 + 1)
        );
        within &= (scaled / c0 - 1.0).abs() <= 0.05;
    }
    let _ = writeln!(summary, "Heisenberg constant c0 = {c0:.6}");
    let outcome = match &c.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| format!("{path}: {e}"))?;
            Outcome { stdout: summary, stderr: String::new(), code: 0 }
        }
        None => Outcome { stdout: text, stderr: summary, code: 0 },
    };
    let is_heis = c.model == ModelKind::Heisenberg;
    Ok(outcome.checked(cli.check && is_heis, within, "every t^{n+1}·p̂ within 5% of c0"))
}

fn fit_cmd(cli: &Cli, input: &PathBuf, order: usize) -> Res {
    if order == 0 {
        return Err("--order must be at least 1".into());
    }
    let text = std::fs::read_to_string(input).map_err(|e| format!("{}: {e}", input.display()))?;
    let file = csv::read(&text).map_err(err)?;
    let spec = file.config.spec().map_err(err)?;
    let cov = if file.cov.is_empty() { None } else { Some(file.cov.as_slice()) };
    let rep = fit_expansion(&spec, &file.rows, cov, order, (order / 2).max(1)).map_err(err)?;
    let mut s = format!("model {} n={} from {} times\n", spec.kind, spec.n, file.rows.len());
    let mut odd_ok = true;
    for (name, f) in [("sqrt(t)", &rep.sqrt_fit), ("t", &rep.t_fit)] {
        let _ = writeln!(s, "fit in powers of {name} (chi2 = {:.3}):", f.chi2);
        for k in 0..f.coeffs.len() {
            let _ = writeln!(s, "  t^{:<4} {:+.6} ± {:.6}  (z = {:.2})", f.exponents[k], f.coeffs[k], f.stderr(k), f.z_score(k));
        }
    }
    for k in (1..rep.sqrt_fit.coeffs.len()).step_by(2) {
        odd_ok &= rep.sqrt_fit.z_score(k) <= 3.0;
    }
    let mut out = Outcome::ok(s).checked(cli.check, odd_ok, "odd sqrt(t) coefficients zero at 3σ");
    if spec.kind == ModelKind::Heisenberg && cli.check {
        let c0 = gaveau_c0(spec.n).map_err(err)?;
        let flat = (1..rep.t_fit.coeffs.len()).all(|k| rep.t_fit.z_score(k) <= 3.0);
        out = out.checked(true, flat, "higher t coefficients zero at 3σ");
        out = out.checked(true, (rep.t_fit.coeffs[0] / c0 - 1.0).abs() <= 0.05, "leading coefficient within 5% of c0");
    }
    Ok(out)
}

fn c1_sphere(cli: &Cli, paths: Option<u64>, h: Option<f64>, seed: Option<u64>, steps: Option<usize>, n: Option<usize>) -> Res {
    let mut c = load_config(cli)?;
    c.model = ModelKind::Sphere;
    if let Some(v) = paths {
        c.paths = v;
    }
    if let Some(v) = h {
        c.h0 = v;
    }
    if let Some(v) = seed {
        c.seed = v;
    }
    if let Some(v) = n {
        c.n = v;
    }
    // the iterated integrals converge fast; 64 steps keeps the cost per path low
    let cfg = C1Config { n: c.n, paths: c.paths, steps: steps.unwrap_or(64), h0: c.h0, seed: c.seed };
    let fs = [
        Functional::One,
        Functional::Odd,
        Functional::Derived(PhiRule::Rederived),
        Functional::Printed(PhiRule::ClosedForm(Kappa4Form::Printed)),
    ];
    let est = c1_conditional(&cfg, &fs).map_err(err)?;
    let mut s = String::new();
    for e in &est {
        let _ = writeln!(s, "{:<36} {:+.6} ± {:.6}", e.functional, e.estimate, e.stderr);
    }
    let _ = writeln!(s, "paths used {}, excluded {}", est[0].used, est[0].excluded);
    let mut out = Outcome::ok(s);
    if est[0].warning {
        let _ = writeln!(out.stderr, "warning: more than 0.1% of the paths were excluded");
    }
    let c0 = gaveau_c0(c.n).map_err(err)?;
    let one_ok = (est[0].estimate - c0).abs() <= 3.0 * est[0].stderr;
    let odd_ok = est[1].estimate.abs() <= 3.0 * est[1].stderr;
    Ok(out.checked(cli.check, one_ok, "Φ ≡ 1 reproduces c0 at 3σ").checked(cli.check, odd_ok, "odd functional zero at 3σ"))
}

fn hormander(cli: &Cli, model: &ModelArgs, grid: usize) -> Res {
    let mut c = load_config(cli)?;
    apply_model(&mut c, model);
    let spec = c.spec().map_err(err)?;
    let r = hormander_inf(&spec, &default_eps_grid(), grid).map_err(err)?;
    let s = format!(
        "grid minimum {:.6} at ε = {} over {} directions (smallest eigenvalue {:.6})\nargmin {:?}\n",
        r.min, r.eps_at_min, r.grid_points, r.eigen_min, r.argmin
    );
    let (ok, what) = match spec.kind {
        ModelKind::Heisenberg => ((0.99..=1.01).contains(&r.min), "minimum in [0.99, 1.01]"),
        ModelKind::Sphere => (r.min > 0.0, "minimum positive"),
    };
    Ok(Outcome::ok(s).checked(cli.check, ok, what))
}

fn phi3(cli: &Cli, model: &ModelArgs) -> Res {
    let mut c = load_config(cli)?;
    apply_model(&mut c, model);
    let spec: ModelSpec = c.spec().map_err(err)?;
    let coeffs = taylor_coefficients(&spec, 3).map_err(err)?;
    let terms: Vec<_> = coeffs.phi_terms(3).collect();
    let phi2_zero = coeffs.phi_terms(2).next().is_none();
    let mut s = String::new();
    if terms.is_empty() {
        s.push_str("all φ³ coefficients zero\n");
    } else {
        for t in &terms {
            let _ = writeln!(s, "component {} word {} coefficient {}", t.component + 1, MultiIndex::new(&t.word), t.exact);
        }
    }
    let heis = spec.kind == ModelKind::Heisenberg;
    Ok(Outcome::ok(s).checked(cli.check, phi2_zero && (!heis || terms.is_empty()), "φ² vanishes (and φ³ for the Heisenberg group)"))
}

/// Run a parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    let res = with_threads(cli.threads, || match &cli.command {
        Command::FsExpand { model, order, golden } => fs_expand(cli, model, *order, golden),
        Command::WienerMoments { seed, paths, steps, norm, n } => wiener_moments(cli, *seed, *paths, *steps, *norm, *n),
        Command::C0 { n } => c0_cmd(cli, *n),
        Command::Simulate { model, eps_list, t_list, paths, steps, seed, bandwidth, common_seeds, out } => {
            simulate(cli, model, eps_list, t_list, *paths, *steps, *seed, bandwidth, *common_seeds, out)
        }
        Command::Fit { input, order } => fit_cmd(cli, input, *order),
        Command::C1Sphere { paths, h, seed, steps, n } => c1_sphere(cli, *paths, *h, *seed, *steps, *n),
        Command::Hormander { model, grid } => hormander(cli, model, *grid),
        Command::Phi3 { model } => phi3(cli, model),
    });
    res.unwrap_or_else(Outcome::usage)
}

/// Parse `args` (including the program name) and run.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            }
        }
    }
}

/// Entry point used by the binary: prints and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let o = run_args(args);
    print!("{}", o.stdout);
    eprint!("{}", o.stderr);
    o.code
}
