//! The Heisenberg diagonal constant
//! `c₀(n) = (2π)^{-(n+1)} ∫_ℝ (2τ / sinh 2τ)^n dτ`.

use crate::error::{Error, Result};

/// `(2τ / sinh 2τ)^n`, equal to 1 at `τ = 0`.
fn integrand(tau: f64, n: i32) -> f64 {
    let x = 2.0 * tau;
    let r = if x.abs() < 1e-4 {
        // x / sinh x = 1 − x²/6 + 7x⁴/360 − …
        let x2 = x * x;
        1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0
    } else {
        x / x.sinh()
    };
    r.powi(n)
}

/// Upper bound of `∫_L^∞ (2τ/sinh 2τ)^n dτ`, using `sinh x ≥ e^x/2.5`
/// for `x ≥ 2`, so `2τ/sinh 2τ ≤ 5τ e^{−2τ}`, and `∫_L^∞ τ^n e^{−2nτ} dτ ≤
/// L^n e^{−2nL} / (2n − n/L)` for `L > 1/2`.
fn tail_bound(l: f64, n: i32) -> f64 {
    let nf = n as f64;
    5f64.powi(n) * l.powi(n) * (-2.0 * nf * l).exp() / (2.0 * nf - nf / l)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// `gaveau_c0(n)`: quadrature to absolute tolerance `1e-12` on the
/// integral, with the tail cut where the integrand drops below `1e-18`.
pub fn gaveau_c0(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("the τ-integral diverges for n = 0".into()));
    }
    let ni = n as i32;
    let mut l = 2.0;
    while integrand(l, ni) >= 1e-18 || tail_bound(l, ni) >= 1e-15 {
        l += 0.5;
    }
    let half = integrate_adaptive(|t| integrand(t, ni), 0.0, l, 5e-13);
    Ok(2.0 * half / (2.0 * std::f64::consts::PI).powi(ni + 1))
}
