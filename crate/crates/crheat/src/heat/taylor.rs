//! Stochastic Taylor expansion of the normal-coordinate diffusion.
//!
//! With `U^ε` driven by `ε X̂_j ∘ dB^j + ε² X̂₀ dt` and started at 0,
//! `U^{ε,i}_1 = Σ_J ε^{‖J‖} (X̂_J u^i)(0) B^J_1`. The horizontal components
//! are truncated at `‖J‖ ≤ A` and the vertical one at `‖J‖ ≤ A+1`, which is
//! how the vertical coordinate's extra weight shows up.

use crate::error::{Error, Result};
use crate::fsnormal::frame_expansion;
use crate::models::{drift_field, ModelSpec};
use crate::poly::Poly;
use crate::scalar::{rat_to_f64, Rational};
use crate::vfield::{MultiIndex, VectorField};
use crate::wiener::IteratedTable;
use num_traits::Zero;

/// One non-zero coefficient `(X̂_J u^i)(0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorTerm {
    /// Zero-based coordinate.
    pub component: usize,
    pub word: Vec<usize>,
    pub exact: Rational,
    pub value: f64,
}

impl TaylorTerm {
    pub fn norm(&self) -> usize {
        MultiIndex::new(&self.word).norm()
    }
}

/// All non-zero `(X̂_J u^i)(0)` up to expansion order `A`.
#[derive(Clone, Debug)]
pub struct TaylorCoefficients {
    pub model: ModelSpec,
    pub order: usize,
    pub terms: Vec<TaylorTerm>,
}

/// The drift followed by the horizontal frame, indexed by letter.
pub fn letter_fields(model: &ModelSpec, order: usize) -> Result<Vec<VectorField<Rational>>> {
    let frame = frame_expansion(model, order)?;
    let mut fields = vec![drift_field(model, order)?];
    fields.extend(frame.fields);
    Ok(fields)
}

fn letter_norm(l: usize) -> usize {
    if l == 0 {
        2
    } else {
        1
    }
}

/// Exact Taylor coefficients up to order `A ≥ 1`.
///
/// Words are grown from the right (the last letter acts first); a partial
/// result is truncated to the weight that the remaining letters can still
/// remove, since a frame field lowers weight by at most one and the drift
/// never lowers it.
pub fn taylor_coefficients(model: &ModelSpec, order: usize) -> Result<TaylorCoefficients> {
    if order == 0 {
        return Err(Error::Invalid("expansion order must be at least 1".into()));
    }
    let dim = model.dim();
    let fields = letter_fields(model, order + 1)?;
    let mut terms = Vec::new();
    for comp in 0..dim {
        let limit = if comp == dim - 1 { order + 1 } else { order };
        let mut stack: Vec<(Vec<usize>, Poly<Rational>, usize)> = vec![(Vec::new(), Poly::var(dim, comp), 0)];
        while let Some((suffix, p, norm)) = stack.pop() {
            for l in (0..fields.len()).rev() {
                let nn = norm + letter_norm(l);
                if nn > limit {
                    continue;
                }
                let q = fields[l].apply(&p).truncate(limit - nn);
                if q.is_zero() {
                    continue;
                }
                let mut word = Vec::with_capacity(suffix.len() + 1);
                word.push(l);
                word.extend_from_slice(&suffix);
                let c = q.constant_term();
                if !c.is_zero() {
                    terms.push(TaylorTerm { component: comp, word: word.clone(), value: rat_to_f64(&c), exact: c });
                }
                stack.push((word, q, nn));
            }
        }
    }
    terms.sort_by(|a, b| (a.component, a.norm(), &a.word).cmp(&(b.component, b.norm(), &b.word)));
    Ok(TaylorCoefficients { model: *model, order, terms })
}

impl TaylorCoefficients {
    fn top(&self) -> usize {
        self.model.dim() - 1
    }

    /// Terms of `φ^{a,i}`: norm `a` horizontally, `a+1` vertically.
    pub fn phi_terms(&self, a: usize) -> impl Iterator<Item = &TaylorTerm> {
        let top = self.top();
        self.terms.iter().filter(move |t| t.norm() == if t.component == top { a + 1 } else { a })
    }

    /// `(i, J, c)` triples (one-based `i`) for pairing `φ^a` with functionals.
    pub fn phi_weights(&self, a: usize) -> Vec<(usize, Vec<usize>, f64)> {
        self.phi_terms(a).map(|t| (t.component + 1, t.word.clone(), t.value)).collect()
    }
}

fn check_order(c: &TaylorCoefficients, a: usize) -> Result<()> {
    if a > c.order {
        return Err(Error::Invalid(format!("coefficients computed to order {} but order {a} requested", c.order)));
    }
    Ok(())
}

/// `φ^a_1` evaluated on a table that must already hold every needed word.
pub fn phi_a(coeffs: &TaylorCoefficients, table: &IteratedTable, a: usize) -> Result<Vec<f64>> {
    check_order(coeffs, a)?;
    let mut out = vec![0.0; coeffs.model.dim()];
    for t in coeffs.phi_terms(a) {
        out[t.component] += t.value * table.value(&t.word)?;
    }
    Ok(out)
}

/// Truncated expansion of `U^ε_1` through order `A`.
pub fn taylor_endpoint(coeffs: &TaylorCoefficients, table: &IteratedTable, order: usize, eps: f64) -> Result<Vec<f64>> {
    check_order(coeffs, order)?;
    let top = coeffs.top();
    let mut out = vec![0.0; coeffs.model.dim()];
    for t in &coeffs.terms {
        let norm = t.norm();
        if norm > order + usize::from(t.component == top) {
            continue;
        }
        out[t.component] += eps.powi(norm as i32) * t.value * table.value(&t.word)?;
    }
    Ok(out)
}
