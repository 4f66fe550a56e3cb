//! How fast the truncated stochastic Taylor expansion approaches the
//! diffusion: `U^ε_1 − Σ_{a≤A} ε^a φ^a_1 = O(ε^{A+1})`.
//!
//! Both sides are evaluated on the same piecewise-linear driving path. Each
//! sampled increment is split into `refine` equal pieces before integrating
//! and before building the iterated integrals, which shrinks the mismatch
//! between the two discretisations without changing the path itself.

use super::system::{compile, Heun, Scaling, SIMULATION_ORDER};
use super::taylor::{taylor_endpoint, TaylorCoefficients};
use crate::error::{Error, Result};
use crate::par::map_chunks;
use crate::wiener::{sample_path, IteratedTable, PathGrid};

#[derive(Clone, Debug, PartialEq)]
pub struct RemainderReport {
    pub order: usize,
    pub eps: Vec<f64>,
    /// Mean Euclidean distance between the SDE endpoint and the expansion.
    pub mean_error: Vec<f64>,
    /// Least-squares slope of `log mean_error` against `log ε`.
    pub slope: f64,
}

/// Split every increment of `path` into `k` equal pieces.
pub fn refine_path(path: &PathGrid, k: usize) -> PathGrid {
    let w = path.width();
    let mut inc = Vec::with_capacity(path.increments.len() * k);
    for step in path.increments.chunks_exact(w) {
        for _ in 0..k {
            inc.extend(step.iter().map(|x| x / k as f64));
        }
    }
    PathGrid::from_increments(path.n, path.steps * k, inc)
}

/// Slope of the least-squares line through `(x, y)`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let m = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / m, y.iter().sum::<f64>() / m);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Measure the remainder of the order-`order` expansion described by
/// `coeffs` over `eps`, averaging over `paths` paths of `steps × refine`
/// integration steps.
pub fn remainder_scaling(
    coeffs: &TaylorCoefficients,
    order: usize,
    eps: &[f64],
    paths: u64,
    steps: usize,
    refine: usize,
    seed: u64,
) -> Result<RemainderReport> {
    if eps.len() < 2 || eps.iter().any(|&e| !(e > 0.0)) || paths == 0 || steps == 0 || refine == 0 {
        return Err(Error::Invalid("remainder scaling needs ≥ 2 positive ε, paths, steps and refine ≥ 1".into()));
    }
    let model = coeffs.model;
    let top = model.dim() - 1;
    let systems = eps.iter().map(|&e| compile(&model, SIMULATION_ORDER.max(order + 1), Scaling::Unscaled(e))).collect::<Result<Vec<_>>>()?;
    let words: Vec<&[usize]> = coeffs
        .terms
        .iter()
        .filter(|t| t.norm() <= order + usize::from(t.component == top))
        .map(|t| t.word.as_slice())
        .collect();
    let parts = map_chunks(paths, 16, |range| -> Result<Vec<f64>> {
        let mut sums = vec![0.0; eps.len()];
        for idx in range {
            let path = refine_path(&sample_path(seed, idx, steps, model.n), refine);
            let mut table = IteratedTable::new(path.clone());
            for w in &words {
                table.ensure(w);
            }
            for (k, sys) in systems.iter().enumerate() {
                let sde = Heun::new(sys, f64::INFINITY).run(&path.increments, path.steps, 1.0)?;
                let tay = taylor_endpoint(coeffs, &table, order, eps[k])?;
                sums[k] += sde.iter().zip(&tay).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            }
        }
        Ok(sums)
    });
    let mut mean_error = vec![0.0; eps.len()];
    for p in parts {
        for (m, s) in mean_error.iter_mut().zip(p?) {
            *m += s;
        }
    }
    mean_error.iter_mut().for_each(|m| *m /= paths as f64);
    let lx: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ly: Vec<f64> = mean_error.iter().map(|e| e.ln()).collect();
    Ok(RemainderReport { order, eps: eps.to_vec(), slope: ls_slope(&lx, &ly), mean_error })
}
