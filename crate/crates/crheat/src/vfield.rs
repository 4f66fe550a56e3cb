//! Polynomial vector fields, Lie brackets and `(X̂_J u^i)(0)`.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;
use std::fmt;

/// `Σ_i coeffs[i] ∂/∂u^{i+1}` with polynomial coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct VectorField<S> {
    coeffs: Vec<Poly<S>>,
}

impl<S: Scalar> VectorField<S> {
    pub fn new(coeffs: Vec<Poly<S>>) -> Self {
        let d = coeffs.len();
        assert!(coeffs.iter().all(|c| c.nvars() == d), "field coefficients must live in {d} variables");
        VectorField { coeffs }
    }

    pub fn zero(dim: usize) -> Self {
        VectorField { coeffs: vec![Poly::zero(dim); dim] }
    }

    /// The coordinate field `∂/∂u^{i+1}`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coeffs[i] = Poly::one(dim);
        v
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Poly<S>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Poly<S> {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Apply the field as a derivation: `V f = Σ V^i ∂_i f`.
    pub fn apply(&self, f: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero(self.dim());
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.deriv(i);
            if !d.is_zero() {
                out = out.add(&c.mul(&d));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorField::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        VectorField::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect())
    }

    /// Multiply every coefficient by the function `f`.
    pub fn mul_poly(&self, f: &Poly<S>) -> Self {
        VectorField::new(self.coeffs.iter().map(|c| c.mul(f)).collect())
    }

    pub fn scale(&self, s: &S) -> Self {
        VectorField::new(self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    /// Value at the origin (constant terms).
    pub fn at_origin(&self) -> Vec<S> {
        self.coeffs.iter().map(Poly::constant_term).collect()
    }

    /// Horizontal coefficients truncated to weight `a`, the last (vertical)
    /// coefficient to weight `a + 1`.
    pub fn truncate(&self, a: usize) -> Self {
        let last = self.dim() - 1;
        VectorField::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.truncate(if i == last { a + 1 } else { a }))
                .collect(),
        )
    }

    /// Canonical text, one `d<i>: <term>` line per coefficient term.
    pub fn to_text(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            for line in c.to_text() {
                out.push(format!("d{}: {}", i + 1, line));
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Display for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.to_text() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// `[V, W] = V∘W − W∘V`, i.e. `[V,W]^i = V(W^i) − W(V^i)`.
pub fn lie_bracket<S: Scalar>(v: &VectorField<S>, w: &VectorField<S>) -> Result<VectorField<S>> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch { left: v.dim(), right: w.dim() });
    }
    Ok(VectorField::new(
        (0..v.dim()).map(|i| v.apply(&w.coeffs[i]).sub(&w.apply(&v.coeffs[i]))).collect(),
    ))
}

/// See [`VectorField::truncate`].
pub fn truncate_field<S: Scalar>(v: &VectorField<S>, a: usize) -> VectorField<S> {
    v.truncate(a)
}

/// `(X̂_J u^i)(0)` with `X̂_J = X̂_{j1} ⋯ X̂_{jb}`: the last entry of `J`
/// acts first. `fields[j]` is the field for letter `j` (index 0 is the drift)
/// and `coordinate` is zero-based.
pub fn apply_sequence<S: Scalar>(fields: &[VectorField<S>], word: &[usize], coordinate: usize) -> Result<S> {
    let dim = fields.first().map_or(0, VectorField::dim);
    if let Some(bad) = fields.iter().find(|f| f.dim() != dim) {
        return Err(Error::DimensionMismatch { left: dim, right: bad.dim() });
    }
    if coordinate >= dim {
        return Err(Error::Invalid(format!("coordinate {} out of range for dimension {dim}", coordinate + 1)));
    }
    let mut p = Poly::var(dim, coordinate);
    for &j in word.iter().rev() {
        let f = fields
            .get(j)
            .ok_or_else(|| Error::Invalid(format!("multi-index letter {j} has no field")))?;
        p = f.apply(&p);
        if p.is_zero() {
            break;
        }
    }
    Ok(p.constant_term())
}

/// Finite word over `{0, 1, …, 2n}`; `0` stands for the `dt` direction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn new(entries: &[usize]) -> Self {
        MultiIndex(entries.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `‖J‖ = length + #zeros`.
    pub fn norm(&self) -> usize {
        self.0.len() + self.0.iter().filter(|&&j| j == 0).count()
    }

    /// Number of non-zero letters (the Brownian degree).
    pub fn brownian_degree(&self) -> usize {
        self.0.iter().filter(|&&j| j != 0).count()
    }

    /// All words over `{0,…,letters-1}` with `‖J‖` exactly `norm`, in
    /// lexicographic order.
    pub fn all_with_norm(letters: usize, norm: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(letters: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if left == 0 {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for j in 0..letters {
                let cost = if j == 0 { 2 } else { 1 };
                if cost <= left {
                    cur.push(j);
                    rec(letters, left - cost, cur, out);
                    cur.pop();
                }
            }
        }
        if norm > 0 {
            rec(letters, norm, &mut cur, &mut out);
        }
        out
    }

    pub fn all_up_to_norm(letters: usize, max_norm: usize) -> Vec<MultiIndex> {
        (1..=max_norm).flat_map(|k| Self::all_with_norm(letters, k)).collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    fn heis() -> (VectorField<Rational>, VectorField<Rational>) {
        let u = |i| Poly::<Rational>::var(3, i);
        let one = Poly::<Rational>::one(3);
        let z = Poly::<Rational>::zero(3);
        (
            VectorField::new(vec![one.clone(), z.clone(), u(1).neg()]),
            VectorField::new(vec![z, one, u(0)]),
        )
    }

    #[test]
    fn heisenberg_bracket() {
        let (x1, x2) = heis();
        let b = lie_bracket(&x1, &x2).unwrap();
        assert_eq!(b, VectorField::coordinate(3, 2).scale(&int(2)));
        assert!(lie_bracket(&x1, &x1).unwrap().is_zero());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let (x1, _) = heis();
        assert!(lie_bracket(&x1, &VectorField::zero(5)).is_err());
    }

    #[test]
    fn sequence_values() {
        let (x1, x2) = heis();
        let fields = vec![VectorField::zero(3), x1, x2];
        assert_eq!(apply_sequence(&fields, &[1, 2], 2).unwrap(), int(1));
        assert_eq!(apply_sequence(&fields, &[2, 1], 2).unwrap(), int(-1));
        assert_eq!(apply_sequence(&fields, &[1], 0).unwrap(), int(1));
        assert_eq!(apply_sequence(&fields, &[1], 2).unwrap(), int(0));
    }

    #[test]
    fn truncation_keeps_one_extra_vertical_weight() {
        let u = |i| Poly::<Rational>::var(3, i);
        let v = VectorField::new(vec![Poly::one(3).add(&u(0)), Poly::zero(3), u(0).mul(&u(1))]);
        let t = truncate_field(&v, 0);
        assert_eq!(t, VectorField::new(vec![Poly::one(3), Poly::zero(3), Poly::zero(3)]));
        assert_eq!(truncate_field(&v, 1).coeff(2), &u(0).mul(&u(1)));
    }

    #[test]
    fn norm_counts_zeros_twice() {
        let j = MultiIndex::new(&[1, 0, 2]);
        assert_eq!(j.norm(), 4);
        assert_eq!(j.brownian_degree(), 2);
        // over {0,1,2}: N(k) = 2N(k-1) + N(k-2)
        let counts: Vec<usize> = (1..=4).map(|k| MultiIndex::all_with_norm(3, k).len()).collect();
        assert_eq!(counts, vec![2, 5, 12, 29]);
    }
}
