//! Generalised least-squares fits of `t^{n+1} p̂(t)` against powers of `t`.

use crate::error::{Error, Result};
use crate::models::ModelSpec;
use nalgebra::{DMatrix, DVector};

/// One density estimate on the diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateRow {
    pub t: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub paths: u64,
    pub steps: usize,
    pub bandwidth: String,
    pub seed: u64,
}

/// Which powers of `t` appear in a fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// `t^{k/2}`, `k = 0..=order`.
    SqrtT,
    /// `t^k`, `k = 0..=order`.
    T,
}

impl Basis {
    pub fn exponents(&self, order: usize) -> Vec<f64> {
        (0..=order)
            .map(|k| match self {
                Basis::SqrtT => k as f64 / 2.0,
                Basis::T => k as f64,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fit {
    pub basis: Basis,
    pub exponents: Vec<f64>,
    pub coeffs: Vec<f64>,
    /// Covariance of the coefficients.
    pub cov: Vec<Vec<f64>>,
    /// Generalised residual `rᵀ Σ⁻¹ r`.
    pub chi2: f64,
}

impl Fit {
    pub fn stderr(&self, k: usize) -> f64 {
        self.cov[k][k].sqrt()
    }

    /// `|coef| / stderr`, the number of standard errors away from zero.
    pub fn z_score(&self, k: usize) -> f64 {
        self.coeffs[k].abs() / self.stderr(k)
    }
}

/// `β = (XᵀΣ⁻¹X)⁻¹ XᵀΣ⁻¹ y` with `Cov β = (XᵀΣ⁻¹X)⁻¹`.
pub fn gls(design: &DMatrix<f64>, y: &DVector<f64>, cov: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>, f64)> {
    let chol = cov
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Singular("data covariance is not positive definite".into()))?;
    let wx = chol.solve(design);
    let normal = design.transpose() * &wx;
    let scale = normal.diagonal().amax();
    let eig = normal.clone().symmetric_eigen();
    if !(eig.eigenvalues.min() > 1e-13 * scale) {
        return Err(Error::Singular(format!("design matrix has numerically dependent columns (eigenvalues {:?})", eig.eigenvalues.as_slice())));
    }
    let inv = normal
        .try_inverse()
        .ok_or_else(|| Error::Singular("normal equations are not invertible".into()))?;
    let beta = &inv * (design.transpose() * chol.solve(y));
    let r = y - design * &beta;
    let chi2 = r.dot(&chol.solve(&r));
    Ok((beta, inv, chi2))
}

/// Fit `y(t) = Σ_k b_k t^{e_k}` given `Cov y`.
pub fn fit_series(ts: &[f64], ys: &[f64], cov: &[Vec<f64>], basis: Basis, order: usize) -> Result<Fit> {
    let m = ts.len();
    if ys.len() != m || cov.len() != m {
        return Err(Error::DimensionMismatch { left: m, right: ys.len().min(cov.len()) });
    }
    let exponents = basis.exponents(order);
    let design = DMatrix::from_fn(m, exponents.len(), |r, c| ts[r].powf(exponents[c]));
    let sigma = DMatrix::from_fn(m, m, |r, c| cov[r][c]);
    let (beta, vb, chi2) = gls(&design, &DVector::from_column_slice(ys), &sigma)?;
    let k = exponents.len();
    Ok(Fit {
        basis,
        exponents,
        coeffs: beta.iter().copied().collect(),
        cov: (0..k).map(|r| (0..k).map(|c| vb[(r, c)]).collect()).collect(),
        chi2,
    })
}

/// Estimates, both fits and the metadata they came from.
#[derive(Clone, Debug)]
pub struct ExpansionReport {
    pub model: ModelSpec,
    pub rows: Vec<EstimateRow>,
    /// Covariance of the estimates `p̂(t)`.
    pub cov: Vec<Vec<f64>>,
    /// Fit in powers of `√t` (odd powers should vanish).
    pub sqrt_fit: Fit,
    /// Fit in powers of `t`; coefficient `a` estimates `c_a`.
    pub t_fit: Fit,
}

/// `fit_expansion(model, t grid, estimates)`.
///
/// Fits `t^{n+1} p̂(t)` by GLS, using `cov` (the covariance of the `p̂`) if
/// given and the reported standard errors otherwise.
pub fn fit_expansion(
    model: &ModelSpec,
    rows: &[EstimateRow],
    cov: Option<&[Vec<f64>]>,
    sqrt_order: usize,
    t_order: usize,
) -> Result<ExpansionReport> {
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    if ts.len() < 3 {
        return Err(Error::Invalid(format!("need at least 3 t values, got {}", ts.len())));
    }
    let (lo, hi) = ts.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &t| (a.min(t), b.max(t)));
    if !(lo > 0.0 && hi >= 4.0 * lo * (1.0 - 1e-12)) {
        return Err(Error::Invalid(format!("t values must be positive and span a factor of 4 (got {lo}..{hi})")));
    }
    let m = rows.len();
    let p_cov: Vec<Vec<f64>> = match cov {
        Some(c) => c.to_vec(),
        None => (0..m).map(|r| (0..m).map(|c| if r == c { rows[r].stderr.powi(2) } else { 0.0 }).collect()).collect(),
    };
    let pw = model.n as i32 + 1;
    let scale: Vec<f64> = ts.iter().map(|t| t.powi(pw)).collect();
    let ys: Vec<f64> = rows.iter().zip(&scale).map(|(r, s)| r.estimate * s).collect();
    let y_cov: Vec<Vec<f64>> = (0..m).map(|r| (0..m).map(|c| p_cov[r][c] * scale[r] * scale[c]).collect()).collect();
    Ok(ExpansionReport {
        model: *model,
        rows: rows.to_vec(),
        sqrt_fit: fit_series(&ts, &ys, &y_cov, Basis::SqrtT, sqrt_order)?,
        t_fit: fit_series(&ts, &ys, &y_cov, Basis::T, t_order)?,
        cov: p_cov,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(ts: &[f64], p: impl Fn(f64) -> f64) -> Vec<EstimateRow> {
        ts.iter()
            .map(|&t| EstimateRow { t, estimate: p(t), stderr: 1e-3 * p(t), paths: 0, steps: 0, bandwidth: "0".into(), seed: 0 })
            .collect()
    }

    #[test]
    fn exact_heisenberg_data() {
        let c0 = 0.0625;
        let ts = [0.1, 0.05, 0.025];
        let r = fit_expansion(&ModelSpec::heisenberg(1), &rows(&ts, |t| c0 / (t * t)), None, 2, 1).unwrap();
        assert!((r.sqrt_fit.coeffs[0] - c0).abs() < 1e-12);
        assert!(r.sqrt_fit.coeffs[1..].iter().all(|c| c.abs() < 1e-12));
        assert!((r.t_fit.coeffs[0] - c0).abs() < 1e-12 && r.t_fit.coeffs[1].abs() < 1e-12);
    }

    #[test]
    fn recovers_a_linear_correction() {
        let ts = [0.2, 0.1, 0.05, 0.025];
        let r = fit_expansion(&ModelSpec::sphere(1), &rows(&ts, |t| (0.0625 + 0.3 * t) / (t * t)), None, 3, 1).unwrap();
        assert!((r.t_fit.coeffs[1] - 0.3).abs() < 1e-10);
        assert!(r.sqrt_fit.coeffs[1].abs() < 1e-9 && r.sqrt_fit.coeffs[3].abs() < 1e-8);
    }

    #[test]
    fn preconditions() {
        let m = ModelSpec::heisenberg(1);
        assert!(fit_expansion(&m, &rows(&[0.1, 0.05], |t| 1.0 / t), None, 1, 1).is_err());
        assert!(fit_expansion(&m, &rows(&[0.1, 0.08, 0.05], |t| 1.0 / t), None, 1, 1).is_err());
        let dup = rows(&[0.1, 0.1, 0.1, 0.025], |t| 1.0 / t);
        assert!(matches!(fit_expansion(&m, &dup, None, 2, 1), Err(Error::Singular(_))));
    }

    #[test]
    fn covariance_matches_ols_for_white_noise() {
        // with Σ = s²I the coefficient covariance is s²(XᵀX)⁻¹
        let ts = [1.0, 2.0, 4.0];
        let cov = vec![vec![4.0, 0.0, 0.0], vec![0.0, 4.0, 0.0], vec![0.0, 0.0, 4.0]];
        let f = fit_series(&ts, &[1.0, 2.0, 3.0], &cov, Basis::T, 1).unwrap();
        // XᵀX = [[3, 7], [7, 21]], det 14
        assert!((f.cov[0][0] - 4.0 * 21.0 / 14.0).abs() < 1e-12);
        assert!((f.cov[1][1] - 4.0 * 3.0 / 14.0).abs() < 1e-12);
    }
}
