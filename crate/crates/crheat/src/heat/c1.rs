//! The first curvature correction `c₁` of the sphere as a Wiener expectation
//! `E[δ₀(X₁) Φ] / 2` with `X₁ = (B_1, Σ_α S^α_1)`.
//!
//! `δ₀` is replaced by a parabolic Gaussian mollifier of width `h` and the
//! `O(h²)` smoothing bias is removed by combining `h₀` and `h₀/2`. The factor
//! ½ converts the Lebesgue density of `X₁` into the density against `θ∧(dθ)^n`
//! used for heat kernels throughout the crate.

use super::kde::{gaussian_mollifier, Moments};
use super::taylor::taylor_coefficients;
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::par::{map_chunks, CHUNK};
use crate::wiener::{phi_functionals, printed_phi_terms, sample_path, IteratedTable, Kappa4Form, PhiFunctionals};

/// How the functionals `Φ^i_J` are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiRule {
    /// The closed forms as printed, with the chosen `κ₄`.
    ClosedForm(Kappa4Form),
    /// The generic integration by parts of [`PhiFunctionals::phi_rederived`].
    Rederived,
    /// The same before restricting to the support of `δ₀(X₁)`
    /// ([`PhiFunctionals::phi_unrestricted`]); only meaningful for
    /// integration-by-parts checks.
    Unrestricted,
}

impl PhiRule {
    fn kappa4(&self) -> Kappa4Form {
        match self {
            PhiRule::ClosedForm(f) => *f,
            PhiRule::Rederived | PhiRule::Unrestricted => Kappa4Form::Rederived,
        }
    }

    fn eval(&self, pf: &mut PhiFunctionals, i: usize, word: &[usize]) -> Result<f64> {
        match self {
            PhiRule::ClosedForm(_) => pf.phi(i, word),
            PhiRule::Rederived => pf.phi_rederived(i, word),
            PhiRule::Unrestricted => pf.phi_unrestricted(i, word),
        }
    }

    fn aggregate(&self, pf: &mut PhiFunctionals, terms: &[(usize, Vec<usize>, f64)]) -> Result<f64> {
        match self {
            PhiRule::ClosedForm(_) => pf.aggregate(terms),
            PhiRule::Rederived => pf.aggregate_rederived(terms),
            PhiRule::Unrestricted => {
                let mut acc = 0.0;
                for (i, w, c) in terms {
                    acc += c * pf.phi_unrestricted(*i, w)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            PhiRule::ClosedForm(Kappa4Form::Printed) => "closed-form",
            PhiRule::ClosedForm(Kappa4Form::Rederived) => "closed-form+kappa4",
            PhiRule::Rederived => "rederived",
            PhiRule::Unrestricted => "unrestricted",
        }
    }
}

/// The functional paired with the mollified delta.
#[derive(Clone, Debug, PartialEq)]
pub enum Functional {
    /// `Φ ≡ 1`; the estimate is then `c₀`.
    One,
    /// `W^1_1`, odd under `B ↦ −B`; the estimate is then 0.
    Odd,
    /// `Σ (X̂_J u^i)(0) Φ^i_J` over the derived third-order coefficients.
    Derived(PhiRule),
    /// The aggregate with the coefficients as printed.
    Printed(PhiRule),
}

impl Functional {
    pub fn label(&self) -> String {
        match self {
            Functional::One => "one".into(),
            Functional::Odd => "odd".into(),
            Functional::Derived(r) => format!("derived-coefficients/{}", r.label()),
            Functional::Printed(r) => format!("printed-coefficients/{}", r.label()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct C1Config {
    pub n: usize,
    pub paths: u64,
    pub steps: usize,
    pub h0: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct C1Estimate {
    pub functional: String,
    pub estimate: f64,
    pub stderr: f64,
    pub used: u64,
    pub excluded: u64,
    /// More than 0.1% of the paths had to be dropped.
    pub warning: bool,
}

/// Richardson-combined mollifier `(4φ_{h/2} − φ_h)/3` at `x`.
#[inline]
pub fn mollified_delta(x: &[f64], h0: f64) -> f64 {
    (4.0 * gaussian_mollifier(x, h0 / 2.0) - gaussian_mollifier(x, h0)) / 3.0
}

fn endpoint(table: &mut IteratedTable) -> Vec<f64> {
    let n = table.n();
    let mut x: Vec<f64> = (1..=2 * n).map(|j| table.at_one(&[j])).collect();
    let area: f64 = (1..=n).map(|a| table.at_one(&[a, n + a]) - table.at_one(&[n + a, a])).sum();
    x.push(area);
    x
}

type Weights = Vec<(usize, Vec<usize>, f64)>;

/// `c1_conditional` for several functionals on one shared sample. Paths whose
/// functionals are degenerate are dropped for every functional.
pub fn c1_conditional(cfg: &C1Config, functionals: &[Functional]) -> Result<Vec<C1Estimate>> {
    if !(cfg.h0 > 0.0) || cfg.steps == 0 || cfg.paths < 2 {
        return Err(Error::Invalid("c1 estimation needs h0 > 0, steps ≥ 1 and at least two paths".into()));
    }
    let n = cfg.n;
    let derived: Weights = taylor_coefficients(&ModelSpec::sphere(n), 3)?.phi_weights(3);
    let printed: Weights = printed_phi_terms(n);
    let k = functionals.len();
    let parts = map_chunks(cfg.paths, CHUNK, |range| -> Result<(Vec<Moments>, u64)> {
        let mut acc = vec![Moments::default(); k];
        let mut excluded = 0;
        'paths: for idx in range {
            let mut table = IteratedTable::new(sample_path(cfg.seed, idx, cfg.steps, n));
            let x = endpoint(&mut table);
            let weight = mollified_delta(&x, cfg.h0) / 2.0;
            let mut vals = vec![0.0; k];
            for (v, f) in vals.iter_mut().zip(functionals) {
                *v = match f {
                    Functional::One => 1.0,
                    Functional::Odd => x[0],
                    Functional::Derived(rule) | Functional::Printed(rule) => {
                        let terms = if matches!(f, Functional::Derived(_)) { &derived } else { &printed };
                        match phi_functionals(table.clone(), rule.kappa4()) {
                            Ok(mut pf) => rule.aggregate(&mut pf, terms)?,
                            Err(Error::DegeneratePath(_)) => {
                                excluded += 1;
                                continue 'paths;
                            }
                            Err(e) => return Err(e),
                        }
                    }
                };
            }
            for (a, v) in acc.iter_mut().zip(vals) {
                a.push(weight * v);
            }
        }
        Ok((acc, excluded))
    });
    let mut total = vec![Moments::default(); k];
    let mut excluded = 0;
    for p in parts {
        let (m, e) = p?;
        total.iter_mut().zip(&m).for_each(|(t, x)| t.merge(x));
        excluded += e;
    }
    let warning = excluded as f64 > 1e-3 * cfg.paths as f64;
    Ok(functionals
        .iter()
        .zip(total)
        .map(|(f, m)| C1Estimate {
            functional: f.label(),
            estimate: m.mean(),
            stderr: m.stderr(),
            used: m.count,
            excluded,
            warning,
        })
        .collect())
}

/// Both sides of the integration-by-parts identity
/// `E[(∂_i δ₀)(X₁) B^J_1] = E[δ₀(X₁) Φ^i_J]` under the same mollifier:
/// returns `(lhs, rhs)` as `(mean, stderr)` pairs of the per-path values and
/// of their difference.
#[derive(Clone, Debug, PartialEq)]
pub struct IbpCheck {
    pub lhs: (f64, f64),
    pub rhs: (f64, f64),
    pub diff: (f64, f64),
}

/// Integration-by-parts check for component `i` (one-based) and word `J`.
pub fn ibp_check(cfg: &C1Config, i: usize, word: &[usize], rule: PhiRule) -> Result<IbpCheck> {
    let n = cfg.n;
    let h = cfg.h0;
    let parts = map_chunks(cfg.paths, CHUNK, |range| -> Result<[Moments; 3]> {
        let mut acc = [Moments::default(); 3];
        for idx in range {
            let mut table = IteratedTable::new(sample_path(cfg.seed, idx, cfg.steps, n));
            let x = endpoint(&mut table);
            let bj = table.at_one(word);
            let mut pf = match phi_functionals(table, rule.kappa4()) {
                Ok(pf) => pf,
                Err(Error::DegeneratePath(_)) => continue,
                Err(e) => return Err(e),
            };
            let phi = rule.eval(&mut pf, i, word)?;
            // ∂_i of the Gaussian mollifier: −x_i/var_i times its value
            let var = if i == 2 * n + 1 { h.powi(4) } else { h * h };
            let m = gaussian_mollifier(&x, h);
            let l = -x[i - 1] / var * m * bj;
            let r = m * phi;
            acc[0].push(l);
            acc[1].push(r);
            acc[2].push(l - r);
        }
        Ok(acc)
    });
    let mut tot = [Moments::default(); 3];
    for p in parts {
        let p = p?;
        for (t, x) in tot.iter_mut().zip(&p) {
            t.merge(x);
        }
    }
    let ms = |m: &Moments| (m.mean(), m.stderr());
    Ok(IbpCheck { lhs: ms(&tot[0]), rhs: ms(&tot[1]), diff: ms(&tot[2]) })
}
