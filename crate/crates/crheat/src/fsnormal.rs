//! Folland-Stein normal-coordinate engine.
//!
//! Given a structure jet `C^i_{jk}`, the frame `X̂_k = Σ_j G^j_k ∂_j` in normal
//! coordinates is computed grade by grade: `Ξ^{(b)}(u)^j_k = Σ_l
//! [deg-b part of C^j_{lk}] u^l`, then `(a+1)F^{(a)} = −Σ_{b<a} Ξ^{(b)}
//! F^{(a−b−1)}` and finally `G^{(a)} = −Σ_{b<a} G^{(b)} F^{(a−b)}` so that
//! `GF = I`. Here the grade is the (unweighted) homogeneous degree in `u`.

use crate::error::{Error, Result};
use crate::models::{structure_functions, ModelSpec, StructureJet};
use crate::poly::Poly;
use crate::scalar::{int, rat, Rational};
use crate::vfield::VectorField;

/// Square matrix of jets.
#[derive(Clone, Debug, PartialEq)]
pub struct JetMatrix {
    pub grade: usize,
    rows: Vec<Vec<Poly<Rational>>>,
}

impl JetMatrix {
    pub fn zero(dim: usize, grade: usize) -> Self {
        JetMatrix { grade, rows: vec![vec![Poly::zero(dim); dim]; dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim, 0);
        for i in 0..dim {
            m.rows[i][i] = Poly::one(dim);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, j: usize, k: usize) -> &Poly<Rational> {
        &self.rows[j][k]
    }

    pub fn set(&mut self, j: usize, k: usize, p: Poly<Rational>) {
        self.rows[j][k] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Poly::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let rows = self
            .rows
            .iter()
            .zip(&o.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            .collect();
        JetMatrix { grade: self.grade, rows }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        JetMatrix { grade: self.grade, rows: self.rows.iter().map(|r_| r_.iter().map(|p| p.scale_rat(r)).collect()).collect() }
    }

    /// Matrix product, discarding monomials of weight above `w`.
    pub fn mul_trunc(&self, o: &Self, w: usize) -> Self {
        let d = self.dim();
        let mut out = JetMatrix::zero(d, self.grade + o.grade);
        for j in 0..d {
            for k in 0..d {
                let mut acc = Poly::zero(d);
                for p in 0..d {
                    let (a, b) = (&self.rows[j][p], &o.rows[p][k]);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul_trunc(b, w));
                    }
                }
                out.rows[j][k] = acc;
            }
        }
        out
    }

    pub fn truncate(&self, w: usize) -> Self {
        JetMatrix { grade: self.grade, rows: self.rows.iter().map(|r| r.iter().map(|p| p.truncate(w)).collect()).collect() }
    }
}

/// `Ξ^{(0)}, …, Ξ^{(max_grade)}`.
pub fn xi_grades(c: &StructureJet, max_grade: usize) -> Vec<JetMatrix> {
    let d = c.dim();
    let parts: Vec<Vec<Vec<_>>> = (0..d)
        .map(|j| (0..d).map(|l| (0..d).map(|k| c.get(j, l, k).degree_parts()).collect()).collect())
        .collect();
    (0..=max_grade)
        .map(|b| {
            let mut m = JetMatrix::zero(d, b);
            for j in 0..d {
                for k in 0..d {
                    let mut acc = Poly::zero(d);
                    for l in 0..d {
                        if let Some(part) = parts[j][l][k].get(&b) {
                            acc = acc.add(&part.mul(&Poly::var(d, l)));
                        }
                    }
                    m.set(j, k, acc);
                }
            }
            m
        })
        .collect()
}

/// `F^{(0)} = I`, `(a+1) F^{(a)} = −Σ_{b=0}^{a−1} Ξ^{(b)} F^{(a−b−1)}`.
pub fn f_recursion(xi: &[JetMatrix], order: usize, w: usize) -> Vec<JetMatrix> {
    let d = xi.first().map_or(1, JetMatrix::dim);
    let mut fs = vec![JetMatrix::identity(d)];
    for a in 1..=order {
        let mut acc = JetMatrix::zero(d, a);
        for b in 0..a {
            if let Some(x) = xi.get(b) {
                acc = acc.add(&x.mul_trunc(&fs[a - b - 1], w));
            }
        }
        let mut next = acc.scale(&rat(-1, a as i64 + 1));
        next.grade = a;
        fs.push(next);
    }
    fs
}

/// Solve `Σ_b G^{(b)} F^{(a−b)} = 0` (a ≥ 1) with `G^{(0)} = I`.
pub fn g_from_f(fs: &[JetMatrix], w: usize) -> Vec<JetMatrix> {
    let d = fs.first().map_or(1, JetMatrix::dim);
    let mut gs = vec![JetMatrix::identity(d)];
    for a in 1..fs.len() {
        let mut acc = JetMatrix::zero(d, a);
        for b in 0..a {
            acc = acc.add(&gs[b].mul_trunc(&fs[a - b], w));
        }
        let mut next = acc.scale(&int(-1));
        next.grade = a;
        gs.push(next);
    }
    gs
}

/// Frame fields in normal coordinates, truncated at weight `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub model: ModelSpec,
    pub order: usize,
    /// `X̂_1, …, X̂_{2n}`.
    pub fields: Vec<VectorField<Rational>>,
    /// `X̂_{2n+1} = T`, truncated like the others.
    pub reeb: VectorField<Rational>,
}

impl Frame {
    pub fn n(&self) -> usize {
        self.model.n
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    /// Canonical text of the horizontal fields, as printed by `fs-expand`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, f) in self.fields.iter().enumerate() {
            s.push_str(&format!("X{}:\n", k + 1));
            for line in f.to_text() {
                s.push_str("  ");
                s.push_str(&line);
                s.push('\n');
            }
        }
        s
    }
}

/// Frame from an arbitrary structure jet.
pub fn frame_from_structure(model: ModelSpec, c: &StructureJet, order: usize) -> Result<Frame> {
    let d = c.dim();
    let n = c.n;
    let w = order + 1;
    let xi = xi_grades(c, w);
    let fs = f_recursion(&xi, w, w);
    let gs = g_from_f(&fs, w);
    let mut total = JetMatrix::identity(d);
    for g in &gs[1..] {
        total = total.add(g);
    }
    let column = |k: usize| VectorField::new((0..d).map(|j| total.get(j, k).clone()).collect()).truncate(order);
    Ok(Frame { model, order, fields: (0..2 * n).map(column).collect(), reeb: column(2 * n) })
}

/// `frame_expansion(model, order)`: the truncated normal-coordinate frame.
///
/// Fails with [`Error::BrokenStructure`] unless the weight-one vertical part
/// is `−u^{n+α} ∂_{2n+1}` in `X̂_α` and `+u^α ∂_{2n+1}` in `X̂_{n+α}`.
pub fn frame_expansion(model: &ModelSpec, order: usize) -> Result<Frame> {
    if order == 0 {
        return Err(Error::Invalid("frame order must be at least 1".into()));
    }
    let c = structure_functions(model, order)?;
    let frame = frame_from_structure(*model, &c, order)?;
    check_normal_form(&frame)?;
    Ok(frame)
}

fn check_normal_form(frame: &Frame) -> Result<()> {
    let (n, d) = (frame.n(), frame.dim());
    for a in 0..n {
        let lin = |k: usize| frame.fields[k].coeff(2 * n).truncate(1);
        if lin(a) != Poly::var(d, n + a).neg() || lin(n + a) != Poly::var(d, a) {
            return Err(Error::BrokenStructure(format!(
                "weight-one vertical parts of fields {} and {} are {} / {}",
                a + 1,
                n + a + 1,
                lin(a),
                lin(n + a)
            )));
        }
    }
    Ok(())
}

/// The closed forms for the first three grades of `G` in terms of the
/// structure jet (as usually quoted):
///
/// * `G^{(1)} = ½ Σ_l C^j_{lk}(0) u^l`
/// * `G^{(2)} = (1/12) Σ C^j_{lp}(0) C^p_{mk}(0) u^l u^m + (1/3) Σ (d/ds)C^j_{lk}(su) u^l`
/// * `G^{(3)} = (1/8) Σ C^j_{lp}(0) (d/ds)C^p_{mk}(su) u^l u^m + (1/8) Σ (d²/ds²)C^j_{lk}(su) u^l`
///
/// Used to cross-check the recursion; `grade` must be 1, 2 or 3.
pub fn g_closed_form(c: &StructureJet, grade: usize) -> Result<JetMatrix> {
    let d = c.dim();
    let xi = xi_grades(c, 2);
    let big = usize::MAX;
    // Σ_l (d^b/ds^b) C^j_{lk}(su)|_0 u^l = b! Ξ^{(b)}
    let out = match grade {
        1 => xi[0].scale(&rat(1, 2)),
        2 => xi[0].mul_trunc(&xi[0], big).scale(&rat(1, 12)).add(&xi[1].scale(&rat(1, 3))),
        3 => xi[0].mul_trunc(&xi[1], big).scale(&rat(1, 8)).add(&xi[2].scale(&rat(2, 8))),
        _ => return Err(Error::Invalid(format!("closed forms exist for grades 1..=3, not {grade}"))),
    };
    let mut out = out;
    out.grade = grade;
    debug_assert_eq!(out.dim(), d);
    Ok(out)
}
