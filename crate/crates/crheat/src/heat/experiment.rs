//! Monte Carlo estimation of the diagonal heat kernel `p(t, x, x)`.
//!
//! For `t = ε²` the dilated endpoint `F^ε_1` has a density that stays of
//! order one, and `p(ε²) = ε^{−2n−2} ρ_{F^ε_1}(0) / 2` (the ½ converts to the
//! volume `θ∧(dθ)^n`). Each path is also run with its increments negated:
//! `D F^ε(−B) = F^{−ε}(B)` with `D` flipping the horizontal signs, and the
//! kernel is even in each coordinate, so averaging the two cancels every odd
//! power of `ε` path by path.
//!
//! When every scaled coefficient carries an even power of `ε` (true for the
//! Heisenberg group and the sphere) the reflected run equals the original one
//! and is not recomputed.
//!
//! Rows that share a seed share their paths (common random numbers); their
//! covariance is estimated from the per-path values. Rows with different
//! seeds are independent.

use super::fit::EstimateRow;
use super::kde::Bandwidth;
use super::system::{compile, HeunBatch, NumSystem, Scaling, LANES};
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::par::{map_chunks, CHUNK};
use crate::wiener::fill_increments;

#[derive(Clone, Debug, PartialEq)]
pub struct HeatRun {
    pub model: ModelSpec,
    pub ts: Vec<f64>,
    /// One seed per `t`.
    pub seeds: Vec<u64>,
    pub paths: u64,
    pub steps: usize,
    pub bandwidth: Bandwidth,
    /// Truncation order of the simulated fields.
    pub order: usize,
    pub guard: f64,
}

/// Estimates for one estimator: rows plus the full covariance.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateSet {
    pub rows: Vec<EstimateRow>,
    pub cov: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeatResult {
    /// Plain estimator `K(F^ε(B))`.
    pub plain: EstimateSet,
    /// Sign-flip average `(K(F^ε(B)) + K(F^ε(−B)))/2`.
    pub antithetic: EstimateSet,
    /// Trajectories that left the guard ball, counted per row and sign.
    pub escapes: Vec<u64>,
}

#[derive(Clone, Debug, Default)]
struct Sums {
    count: u64,
    plain: Vec<f64>,
    anti: Vec<f64>,
    plain_x: Vec<f64>,
    anti_x: Vec<f64>,
    escapes: Vec<u64>,
}

impl Sums {
    fn new(g: usize) -> Self {
        Sums {
            count: 0,
            plain: vec![0.0; g],
            anti: vec![0.0; g],
            plain_x: vec![0.0; g * g],
            anti_x: vec![0.0; g * g],
            escapes: vec![0; g],
        }
    }

    fn merge(&mut self, o: &Sums) {
        self.count += o.count;
        let add = |a: &mut Vec<f64>, b: &Vec<f64>| a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        add(&mut self.plain, &o.plain);
        add(&mut self.anti, &o.anti);
        add(&mut self.plain_x, &o.plain_x);
        add(&mut self.anti_x, &o.anti_x);
        self.escapes.iter_mut().zip(&o.escapes).for_each(|(x, y)| *x += y);
    }
}

fn kernel_or_zero(bw: &Bandwidth, end: &Result<Vec<f64>>, esc: &mut u64) -> f64 {
    match end {
        Ok(u) => bw.kernel(u),
        Err(Error::Escaped { .. }) => {
            *esc += 1;
            0.0
        }
        Err(e) => panic!("unexpected integration failure: {e}"),
    }
}

/// Run the estimator for every `t` of `run`.
pub fn heat_kernel_run(run: &HeatRun) -> Result<HeatResult> {
    let m = run.ts.len();
    if run.seeds.len() != m {
        return Err(Error::DimensionMismatch { left: m, right: run.seeds.len() });
    }
    if run.paths < 2 || run.steps == 0 {
        return Err(Error::Invalid("need at least two paths and one step".into()));
    }
    if let Some(t) = run.ts.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
        return Err(Error::Invalid(format!("t = {t} outside (0, 1]")));
    }
    let n = run.model.n;
    let systems: Vec<NumSystem> = run
        .ts
        .iter()
        .map(|t| compile(&run.model, run.order, Scaling::Scaled(t.sqrt())))
        .collect::<Result<_>>()?;
    let prefactor: Vec<f64> = run.ts.iter().map(|t| t.powi(-(n as i32) - 1) / 2.0).collect();

    let mut groups: Vec<(u64, Vec<usize>)> = Vec::new();
    for (r, &s) in run.seeds.iter().enumerate() {
        match groups.iter_mut().find(|(seed, _)| *seed == s) {
            Some((_, rows)) => rows.push(r),
            None => groups.push((s, vec![r])),
        }
    }

    let mut plain_cov = vec![vec![0.0; m]; m];
    let mut anti_cov = vec![vec![0.0; m]; m];
    let mut plain_mean = vec![0.0; m];
    let mut anti_mean = vec![0.0; m];
    let mut escapes = vec![0u64; m];
    let width = 2 * n;
    for (seed, rows) in &groups {
        let g = rows.len();
        let parts = map_chunks(run.paths, CHUNK, |range| {
            let mut sums = Sums::new(g);
            let len = run.steps * width;
            let mut buf = vec![0.0; len * LANES];
            let mut batches: Vec<HeunBatch> = rows.iter().map(|&r| HeunBatch::new(&systems[r], run.guard)).collect();
            let mut pv = vec![[0.0; LANES]; g];
            let mut av = vec![[0.0; LANES]; g];
            let mut start = range.start;
            while start < range.end {
                let live = ((range.end - start) as usize).min(LANES);
                for (l, lane) in buf.chunks_exact_mut(len).enumerate() {
                    if l < live {
                        fill_increments(*seed, start + l as u64, run.steps, lane);
                    } else {
                        lane.iter_mut().for_each(|x| *x = 0.0);
                    }
                }
                let lanes: [&[f64]; LANES] = std::array::from_fn(|l| &buf[l * len..(l + 1) * len]);
                for (k, &r) in rows.iter().enumerate() {
                    let plus = batches[k].run(&lanes, run.steps, 1.0);
                    let minus = if systems[r].is_even_in_eps() { None } else { Some(batches[k].run(&lanes, run.steps, -1.0)) };
                    for l in 0..live {
                        let mut esc = 0;
                        let kp = kernel_or_zero(&run.bandwidth, &plus[l], &mut esc);
                        let km = match &minus {
                            Some(m) => kernel_or_zero(&run.bandwidth, &m[l], &mut esc),
                            None => {
                                esc *= 2;
                                kp
                            }
                        };
                        sums.escapes[k] += esc;
                        pv[k][l] = kp * prefactor[r];
                        av[k][l] = 0.5 * (kp + km) * prefactor[r];
                    }
                }
                for l in 0..live {
                    sums.count += 1;
                    for a in 0..g {
                        sums.plain[a] += pv[a][l];
                        sums.anti[a] += av[a][l];
                        for b in 0..g {
                            sums.plain_x[a * g + b] += pv[a][l] * pv[b][l];
                            sums.anti_x[a * g + b] += av[a][l] * av[b][l];
                        }
                    }
                }
                start += live as u64;
            }
            sums
        });
        let mut tot = Sums::new(g);
        for p in &parts {
            tot.merge(p);
        }
        let nf = tot.count as f64;
        for (a, &ra) in rows.iter().enumerate() {
            plain_mean[ra] = tot.plain[a] / nf;
            anti_mean[ra] = tot.anti[a] / nf;
            escapes[ra] = tot.escapes[a];
            for (b, &rb) in rows.iter().enumerate() {
                let c = |s: &[f64], x: &[f64]| (x[a * g + b] - s[a] * s[b] / nf) / (nf - 1.0) / nf;
                plain_cov[ra][rb] = c(&tot.plain, &tot.plain_x);
                anti_cov[ra][rb] = c(&tot.anti, &tot.anti_x);
            }
        }
    }
    let make = |mean: &[f64], cov: Vec<Vec<f64>>| EstimateSet {
        rows: (0..m)
            .map(|r| EstimateRow {
                t: run.ts[r],
                estimate: mean[r],
                stderr: cov[r][r].max(0.0).sqrt(),
                paths: run.paths,
                steps: run.steps,
                bandwidth: run.bandwidth.label(),
                seed: run.seeds[r],
            })
            .collect(),
        cov,
    };
    Ok(HeatResult { plain: make(&plain_mean, plain_cov), antithetic: make(&anti_mean, anti_cov), escapes })
}
