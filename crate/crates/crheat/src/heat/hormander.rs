//! Uniform non-degeneracy of the scaled frame at the origin.
//!
//! For each `ε` the quadratic form
//! `Q_ε(ξ) = Σ_j ⟨X̂^ε_j(0), ξ⟩² + Σ_α ⟨[X̂^ε_α, X̂^ε_{n+α}](0), ξ⟩²`
//! is minimised over a deterministic grid on the unit sphere `S^{2n}`.

use super::system::{NumSystem, Scaling};
use crate::error::Result;
use crate::fsnormal::frame_expansion;
use crate::models::{drift_field, ModelSpec};
use nalgebra::DMatrix;

/// Default `ε` grid `0, 0.1, …, 1`.
pub fn default_eps_grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

/// Fibonacci spiral on `S²`.
pub fn fibonacci_sphere(count: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * k as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Quasi-uniform points on `S^{d−1}`: a Kronecker sequence in the cube,
/// mapped to Gaussians by Box–Muller and normalised. For `d = 3` the
/// Fibonacci spiral is used instead. The coordinate axes are always included.
pub fn sphere_grid(d: usize, count: usize) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = if d == 3 {
        fibonacci_sphere(count).iter().map(|p| p.to_vec()).collect()
    } else {
        let m = d + d % 2;
        // square roots of the first primes are rationally independent
        let primes = [2.0f64, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0, 31.0, 37.0, 41.0, 43.0, 47.0, 53.0];
        let alpha: Vec<f64> = (0..m).map(|k| primes[k % primes.len()].sqrt().fract() + k as f64 / primes.len() as f64 / 7.0).collect();
        (1..=count)
            .map(|k| {
                let u: Vec<f64> = alpha.iter().map(|a| (k as f64 * a).fract().max(1e-12)).collect();
                let mut g = Vec::with_capacity(m);
                for pair in u.chunks(2) {
                    let r = (-2.0 * pair[0].ln()).sqrt();
                    let th = 2.0 * std::f64::consts::PI * pair[1];
                    g.push(r * th.cos());
                    g.push(r * th.sin());
                }
                g.truncate(d);
                let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                g.iter().map(|x| x / norm).collect()
            })
            .collect()
    };
    for k in 0..d {
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        pts.push(e);
    }
    pts
}

/// The matrix of `Q_ε`.
pub fn form_matrix(sys: &NumSystem) -> Vec<Vec<f64>> {
    let n = sys.n;
    let d = sys.dim();
    let mut q = vec![vec![0.0; d]; d];
    let mut add = |v: &[f64]| {
        for r in 0..d {
            for c in 0..d {
                q[r][c] += v[r] * v[c];
            }
        }
    };
    let jets: Vec<_> = (1..=2 * n).map(|j| sys.jet_at_origin(j)).collect();
    for (v, _) in &jets {
        add(v);
    }
    for a in 0..n {
        let (va, ja) = &jets[a];
        let (vb, jb) = &jets[n + a];
        // [V, W](0) = DW(0) V(0) − DV(0) W(0)
        let br: Vec<f64> = (0..d)
            .map(|i| (0..d).map(|k| jb[i][k] * va[k] - ja[i][k] * vb[k]).sum())
            .collect();
        add(&br);
    }
    q
}

pub fn quadratic_form(q: &[Vec<f64>], xi: &[f64]) -> f64 {
    q.iter().zip(xi).map(|(row, x)| x * row.iter().zip(xi).map(|(a, b)| a * b).sum::<f64>()).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct HormanderReport {
    /// Smallest grid value of `Q_ε(ξ)`.
    pub min: f64,
    pub argmin: Vec<f64>,
    pub eps_at_min: f64,
    pub grid_points: usize,
    /// Smallest eigenvalue of `Q_ε` over the `ε` grid (the exact spherical
    /// minimum, as a cross-check of the grid search).
    pub eigen_min: f64,
}

/// `hormander_inf(system grid over ε, ξ grid)`.
pub fn hormander_inf(model: &ModelSpec, eps_grid: &[f64], grid_points: usize) -> Result<HormanderReport> {
    let frame = frame_expansion(model, 2)?;
    let drift = drift_field(model, 2)?;
    let d = model.dim();
    let grid = sphere_grid(d, grid_points);
    let mut best = HormanderReport { min: f64::INFINITY, argmin: vec![], eps_at_min: 0.0, grid_points: grid.len(), eigen_min: f64::INFINITY };
    for &eps in eps_grid {
        let q = form_matrix(&NumSystem::new(&frame, &drift, Scaling::Scaled(eps)));
        for xi in &grid {
            let v = quadratic_form(&q, xi);
            if v < best.min {
                best.min = v;
                best.argmin = xi.clone();
                best.eps_at_min = eps;
            }
        }
        let m = DMatrix::from_fn(d, d, |r, c| q[r][c]);
        best.eigen_min = best.eigen_min.min(m.symmetric_eigen().eigenvalues.min());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_lie_on_the_sphere() {
        for d in [3, 5, 7] {
            let g = sphere_grid(d, 500);
            assert_eq!(g.len(), 500 + d);
            assert!(g.iter().all(|p| (p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn heisenberg_form_is_diagonal() {
        let m = ModelSpec::heisenberg(1);
        let f = frame_expansion(&m, 2).unwrap();
        let q = form_matrix(&NumSystem::new(&f, &drift_field(&m, 2).unwrap(), Scaling::Scaled(0.7)));
        assert_eq!(q, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 4.0]]);
    }

    #[test]
    fn first_axis_gives_one() {
        let m = ModelSpec::sphere(1);
        let f = frame_expansion(&m, 2).unwrap();
        let dr = drift_field(&m, 2).unwrap();
        for eps in default_eps_grid() {
            let q = form_matrix(&NumSystem::new(&f, &dr, Scaling::Scaled(eps)));
            assert!((quadratic_form(&q, &[1.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);
        }
    }
}
