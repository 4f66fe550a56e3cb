//! Density estimation at the origin for samples in `ℝ^{2n+1}`.
//!
//! All kernels here are product kernels with parabolic bandwidths: width `h`
//! in each of the `2n` horizontal coordinates and `h²` in the last one, so the
//! smoothing respects the dilations `λ_ε`. Values are Lebesgue densities.

use crate::error::{Error, Result};

/// Minimum sample size accepted by [`kde_diag`].
pub const MIN_POINTS: usize = 10_000;

/// Epanechnikov kernel `¾(1 − x²)₊`.
#[inline]
pub fn epanechnikov(x: f64) -> f64 {
    let r = 1.0 - x * x;
    if r > 0.0 {
        0.75 * r
    } else {
        0.0
    }
}

/// Product Epanechnikov kernel at the origin, `K_h(−u)`, for a point `u`
/// whose last entry is the vertical coordinate.
#[inline]
pub fn kernel_at_origin(u: &[f64], h: f64) -> f64 {
    let (last, horiz) = u.split_last().expect("point has at least one coordinate");
    let h2 = h * h;
    let mut v = epanechnikov(last / h2) / h2;
    for x in horiz {
        if v == 0.0 {
            return 0.0;
        }
        v *= epanechnikov(x / h) / h;
    }
    v
}

/// Parabolic Gaussian mollifier at the origin: standard deviation `h`
/// horizontally and `h²` vertically.
#[inline]
pub fn gaussian_mollifier(u: &[f64], h: f64) -> f64 {
    let (last, horiz) = u.split_last().expect("point has at least one coordinate");
    let h2 = h * h;
    let inv = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let mut q = (last / h2).powi(2);
    let mut norm = inv / h2;
    for x in horiz {
        q += (x / h).powi(2);
        norm *= inv / h;
    }
    norm * (-0.5 * q).exp()
}

/// Running sums of a scalar per-path quantity.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, o: &Moments) {
        self.count += o.count;
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let n = self.count as f64;
        ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0)
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KdeEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub count: usize,
    pub bandwidth: f64,
    /// Every sample sits at the same point, so the standard error says
    /// nothing about the density.
    pub degenerate: bool,
}

/// `kde_diag(endpoints, h)`: Epanechnikov estimate of the density at 0.
pub fn kde_diag(points: &[Vec<f64>], h: f64) -> Result<KdeEstimate> {
    if !(h > 0.0) {
        return Err(Error::Invalid(format!("bandwidth must be positive, got {h}")));
    }
    if points.len() < MIN_POINTS {
        return Err(Error::Invalid(format!("need at least {MIN_POINTS} samples, got {}", points.len())));
    }
    let mut m = Moments::default();
    for p in points {
        m.push(kernel_at_origin(p, h));
    }
    let degenerate = points.iter().all(|p| p == &points[0]);
    Ok(KdeEstimate { estimate: m.mean(), stderr: m.stderr(), count: points.len(), bandwidth: h, degenerate })
}

/// Rule-of-thumb horizontal bandwidth `1.06 σ̂ N^{−1/(2n+5)}`, with `σ̂` the
/// pooled standard deviation of the horizontal coordinates.
pub fn plugin_bandwidth(points: &[Vec<f64>]) -> f64 {
    let dim = points.first().map_or(1, Vec::len);
    let horiz = dim.saturating_sub(1).max(1);
    let mut m = Moments::default();
    for p in points {
        for x in &p[..horiz.min(p.len())] {
            m.push(*x);
        }
    }
    let n = (dim - 1) / 2;
    1.06 * m.variance().sqrt() * (points.len() as f64).powf(-1.0 / (2 * n + 5) as f64)
}

/// Two-bandwidth Richardson combination cancelling the `O(h²)` smoothing
/// bias: `w₁K_{h₁} + w₂K_{h₂}` with `w₁ = h₂²/(h₂² − h₁²)`, `w₂ = 1 − w₁`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Richardson {
    pub h1: f64,
    pub h2: f64,
    w1: f64,
    w2: f64,
}

impl Richardson {
    pub fn new(h1: f64, h2: f64) -> Result<Self> {
        if !(h1 > 0.0 && h2 > 0.0) || h1 == h2 {
            return Err(Error::Invalid(format!("Richardson needs two distinct positive bandwidths, got {h1}, {h2}")));
        }
        let d = h2 * h2 - h1 * h1;
        Ok(Richardson { h1, h2, w1: h2 * h2 / d, w2: -h1 * h1 / d })
    }

    #[inline]
    pub fn combine(&self, k1: f64, k2: f64) -> f64 {
        self.w1 * k1 + self.w2 * k2
    }

    #[inline]
    pub fn kernel(&self, u: &[f64]) -> f64 {
        self.combine(kernel_at_origin(u, self.h1), kernel_at_origin(u, self.h2))
    }
}

/// Bandwidth choice for density estimates at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bandwidth {
    Fixed(f64),
    Richardson(Richardson),
}

impl Bandwidth {
    #[inline]
    pub fn kernel(&self, u: &[f64]) -> f64 {
        match self {
            Bandwidth::Fixed(h) => kernel_at_origin(u, *h),
            Bandwidth::Richardson(r) => r.kernel(u),
        }
    }

    /// Text form used in CSV rows: `h` or `h1:h2`.
    pub fn label(&self) -> String {
        match self {
            Bandwidth::Fixed(h) => format!("{h}"),
            Bandwidth::Richardson(r) => format!("{}:{}", r.h1, r.h2),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("cannot read bandwidth '{s}'"));
        match s.split_once(':') {
            Some((a, b)) => {
                let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                Ok(Bandwidth::Richardson(Richardson::new(a, b)?))
            }
            None => {
                let h: f64 = s.trim().parse().map_err(|_| bad())?;
                if h > 0.0 {
                    Ok(Bandwidth::Fixed(h))
                } else {
                    Err(bad())
                }
            }
        }
    }
}
