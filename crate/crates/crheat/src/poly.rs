//! Sparse multivariate polynomials with parabolic weights.
//!
//! Variables are `u1 … u(2n+1)`. The last variable carries weight 2 and all
//! others weight 1, so `w(u^e) = Σ_{i<last} e_i + 2·e_last`. Monomials are
//! ordered by weight first and then lexicographically (higher power of the
//! earlier variable first), which fixes the canonical text form.

use crate::scalar::{int, Rational, Scalar};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(Box<[u8]>);

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono(vec![0; nvars].into_boxed_slice())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Mono(e.into_boxed_slice())
    }

    pub fn from_exps(exps: &[u8]) -> Self {
        Mono(exps.to_vec().into_boxed_slice())
    }

    pub fn exps(&self) -> &[u8] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// Unweighted total degree.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// Parabolic weight (the last variable counts twice).
    pub fn weight(&self) -> usize {
        self.degree() + self.0.last().map_or(0, |&e| e as usize)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            write!(f, "u{}^{}", i + 1, e)?;
            first = false;
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Polynomial in `nvars` variables with coefficients in `S`. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<S> {
    nvars: usize,
    terms: BTreeMap<Mono, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        Self::term(nvars, Mono::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    /// The coordinate function `u^{i+1}` (zero-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(nvars, Mono::var(nvars, i), S::one())
    }

    pub fn term(nvars: usize, m: Mono, c: S) -> Self {
        assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, S)>>(nvars: usize, it: I) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &S)> {
        self.terms.iter()
    }

    /// Coefficient of a monomial (zero if absent).
    pub fn coeff(&self, m: &Mono) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&Mono::one(self.nvars))
    }

    /// Largest monomial weight present, `None` for the zero polynomial.
    pub fn max_weight(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Mono::weight)
    }

    /// Smallest monomial weight present.
    pub fn min_weight(&self) -> Option<usize> {
        self.terms.keys().next().map(Mono::weight)
    }

    pub fn add_term(&mut self, m: Mono, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        self.map(|c| c.mul(s))
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        self.map(|c| c.scale(r))
    }

    fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_trunc(other, usize::MAX)
    }

    /// Product with every monomial of weight above `w` discarded.
    pub fn mul_trunc(&self, other: &Self, w: usize) -> Self {
        self.check(other);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            let wa = ma.weight();
            if wa > w {
                break;
            }
            for (mb, cb) in &other.terms {
                if wa + mb.weight() > w {
                    break;
                }
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    /// Drop every monomial of weight greater than `w`.
    pub fn truncate(&self, w: usize) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() <= w)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous part of unweighted degree `d`.
    pub fn degree_part(&self, d: usize) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Split into homogeneous parts by unweighted degree.
    pub fn degree_parts(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Poly::zero(self.nvars))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Partial derivative with respect to variable `i` (zero-based).
    pub fn deriv(&self, i: usize) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut ex = m.0.clone();
            ex[i] = e - 1;
            out.add_term(Mono(ex), c.scale(&int(e as i64)));
        }
        out
    }

    /// Integer power with truncation at weight `w`.
    pub fn pow_trunc(&self, k: u32, w: usize) -> Self {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul_trunc(self, w);
        }
        acc
    }

    /// Substitute polynomials for the variables, truncating at weight `w`.
    /// `vals[i]` replaces `u^{i+1}`.
    pub fn compose(&self, vals: &[Poly<S>], w: usize) -> Poly<S> {
        assert_eq!(vals.len(), self.nvars);
        let target = vals.first().map_or(self.nvars, |p| p.nvars);
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul_trunc(&vals[i], w);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Convert coefficients into another ring; `None` if any conversion fails.
    pub fn try_map_ring<T: Scalar>(&self, f: impl Fn(&S) -> Option<T>) -> Option<Poly<T>> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Some(out)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_f64();
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        v *= x[i].powi(e as i32);
                    }
                }
                v
            })
            .sum()
    }

    /// `sqrt(1 + h)` as a truncated series; `h` must have no constant term.
    pub fn sqrt1p(h: &Self, w: usize) -> Self {
        Self::binomial_series(h, w, |k, prev| {
            // binom(1/2, k) = binom(1/2, k-1) · (1/2 - (k-1)) / k
            prev * (crate::scalar::rat(1, 2) - int(k as i64 - 1)) / int(k as i64)
        })
    }

    /// `1 / (1 + h)` as a truncated series; `h` must have no constant term.
    pub fn inv1p(h: &Self, w: usize) -> Self {
        Self::binomial_series(h, w, |_, prev| -prev)
    }

    fn binomial_series(h: &Self, w: usize, next: impl Fn(usize, Rational) -> Rational) -> Self {
        assert!(h.constant_term().is_zero(), "series argument must vanish at 0");
        let mut out = Poly::one(h.nvars);
        let mut hk = Poly::one(h.nvars);
        let mut c = int(1);
        for k in 1.. {
            hk = hk.mul_trunc(h, w);
            if hk.is_zero() {
                break;
            }
            c = next(k, c);
            out = out.add(&hk.scale_rat(&c));
        }
        out
    }

    /// Canonical text form: one `coeff * u1^e1 …` line per term.
    pub fn to_text(&self) -> Vec<String> {
        self.terms
            .iter()
            .map(|(m, c)| {
                if m.degree() == 0 {
                    format!("{c}")
                } else {
                    format!("{c} * {m}")
                }
            })
            .collect()
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.to_text().join(" + "))
    }
}
