//! The two CR models: the Heisenberg group `H_n` and the CR sphere
//! `S^{2n+1} ⊂ ℂ^{n+1}` around the base point `(0,…,0,1)`.
//!
//! Coordinates on the sphere near the base point are the ambient real parts
//! `(x^1,…,x^n, y^1,…,y^n, y^{n+1})`; the constraint is eliminated through
//! `x^{n+1} = sqrt(1 − Σ|z^α|² − (y^{n+1})²)`. All jets in this module are
//! power series in the Folland-Stein coordinates `u`, truncated by weight.

use crate::error::{Error, Result};
use crate::fsnormal::frame_expansion;
use crate::poly::Poly;
use crate::scalar::{int, rat, QSqrt2, Rational, Scalar};
use crate::vfield::VectorField;
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum ModelKind {
    Heisenberg,
    Sphere,
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "heisenberg" | "h" => Ok(ModelKind::Heisenberg),
            "sphere" | "s" | "cr-sphere" => Ok(ModelKind::Sphere),
            other => Err(Error::UnsupportedModel(other.to_string())),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Heisenberg => "heisenberg",
            ModelKind::Sphere => "sphere",
        })
    }
}

/// A CR model of real dimension `2n+1` together with its base point.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n: usize,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("n must be at least 1".into()));
        }
        Ok(ModelSpec { kind, n })
    }

    pub fn heisenberg(n: usize) -> Self {
        ModelSpec { kind: ModelKind::Heisenberg, n }
    }

    pub fn sphere(n: usize) -> Self {
        ModelSpec { kind: ModelKind::Sphere, n }
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    /// Base point in the model's own coordinates: the origin of `H_n`, or
    /// `(0,…,0,1) ∈ ℂ^{n+1}` written as real pairs for the sphere.
    pub fn base_point(&self) -> Vec<f64> {
        match self.kind {
            ModelKind::Heisenberg => vec![0.0; self.dim()],
            ModelKind::Sphere => {
                let mut p = vec![0.0; 2 * self.n + 2];
                p[2 * self.n] = 1.0;
                p
            }
        }
    }
}

/// Structure functions `C^i_{jk}` as jets in `u`, truncated at `order`.
/// `[X̂_j, X̂_k] = Σ_i C^i_{jk} X̂_i` with `X̂_{2n+1} = T`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureJet {
    pub n: usize,
    pub order: usize,
    c: Vec<Poly<Rational>>,
}

impl StructureJet {
    pub fn zero(n: usize, order: usize) -> Self {
        let d = 2 * n + 1;
        StructureJet { n, order, c: vec![Poly::zero(d); d * d * d] }
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        let d = self.dim();
        (i * d + j) * d + k
    }

    /// `C^i_{jk}` with zero-based indices.
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Poly<Rational> {
        &self.c[self.idx(i, j, k)]
    }

    /// Set `C^i_{jk}` and, antisymmetrically, `C^i_{kj}`.
    pub fn set_antisym(&mut self, i: usize, j: usize, k: usize, p: Poly<Rational>) {
        let a = self.idx(i, j, k);
        let b = self.idx(i, k, j);
        self.c[b] = p.neg();
        self.c[a] = p;
    }

    pub fn truncate(&self, order: usize) -> Self {
        StructureJet { n: self.n, order: order.min(self.order), c: self.c.iter().map(|p| p.truncate(order)).collect() }
    }

    /// `C^i_{jk} + C^i_{kj}` vanishes for every index triple.
    pub fn is_antisymmetric(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| (0..d).all(|k| self.get(i, j, k).add(self.get(i, k, j)).is_zero())))
    }
}

/// Structure functions of `model` in Folland-Stein coordinates.
pub fn structure_functions(model: &ModelSpec, order: usize) -> Result<StructureJet> {
    match model.kind {
        ModelKind::Heisenberg => Ok(heisenberg_structure(model.n, order)),
        ModelKind::Sphere => sphere_structure(model.n, order),
    }
}

fn heisenberg_structure(n: usize, order: usize) -> StructureJet {
    let d = 2 * n + 1;
    let mut c = StructureJet::zero(n, order);
    for a in 0..n {
        c.set_antisym(2 * n, a, n + a, Poly::constant(d, int(2)));
    }
    c
}

/// Complex-valued jet `re + i·im`.
#[derive(Clone, Debug, PartialEq)]
struct CJet<S> {
    re: Poly<S>,
    im: Poly<S>,
}

impl<S: Scalar> CJet<S> {
    fn real(p: Poly<S>) -> Self {
        let d = p.nvars();
        CJet { re: p, im: Poly::zero(d) }
    }
    fn new(re: Poly<S>, im: Poly<S>) -> Self {
        CJet { re, im }
    }
    fn conj(&self) -> Self {
        CJet::new(self.re.clone(), self.im.neg())
    }
    fn sub(&self, o: &Self) -> Self {
        CJet::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }
    fn mul(&self, o: &Self, w: usize) -> Self {
        CJet::new(
            self.re.mul_trunc(&o.re, w).sub(&self.im.mul_trunc(&o.im, w)),
            self.re.mul_trunc(&o.im, w).add(&self.im.mul_trunc(&o.re, w)),
        )
    }
    fn mul_real(&self, p: &Poly<S>, w: usize) -> Self {
        CJet::new(self.re.mul_trunc(p, w), self.im.mul_trunc(p, w))
    }
}

type Q = QSqrt2;

/// Jets of the ambient functions needed by the sphere formulas, evaluated
/// on chart coordinates `q = (x^1..x^n, y^1..y^n, y^{n+1})`.
struct SphereAmbient {
    n: usize,
    w: usize,
    xs: Vec<Poly<Q>>,
    ys: Vec<Poly<Q>>,
    y_last: Poly<Q>,
    x_last: Poly<Q>,
    /// `|z^{n+1}|`
    abs_last: Poly<Q>,
    /// `1/(1+|z^{n+1}|)`
    inv_one_plus: Poly<Q>,
}

impl SphereAmbient {
    fn new(n: usize, q: &[Poly<Q>], w: usize) -> Self {
        let d = q[0].nvars();
        let xs = q[..n].to_vec();
        let ys = q[n..2 * n].to_vec();
        let y_last = q[2 * n].clone();
        let mut r2 = Poly::zero(d);
        for a in 0..n {
            r2 = r2.add(&xs[a].mul_trunc(&xs[a], w)).add(&ys[a].mul_trunc(&ys[a], w));
        }
        let x_last = Poly::sqrt1p(&r2.add(&y_last.mul_trunc(&y_last, w)).neg(), w);
        let abs_last = Poly::sqrt1p(&r2.neg(), w);
        // 1/(1+s) = ½ · 1/(1 + (s−1)/2), s = |z^{n+1}| = 1 + O(u²)
        let h = abs_last.sub(&Poly::one(d)).scale_rat(&rat(1, 2));
        let inv_one_plus = Poly::inv1p(&h, w).scale_rat(&rat(1, 2));
        SphereAmbient { n, w, xs, ys, y_last, x_last, abs_last, inv_one_plus }
    }

    fn d(&self) -> usize {
        self.y_last.nvars()
    }

    /// `1/(|z^{n+1}| (1+|z^{n+1}|)²)`
    fn inv_b(&self) -> Poly<Q> {
        let d = self.d();
        let inv_abs = Poly::inv1p(&self.abs_last.sub(&Poly::one(d)), self.w);
        self.inv_one_plus.mul_trunc(&self.inv_one_plus, self.w).mul_trunc(&inv_abs, self.w)
    }

    fn z(&self, b: usize) -> CJet<Q> {
        if b == self.n {
            CJet::new(self.x_last.clone(), self.y_last.clone())
        } else {
            CJet::new(self.xs[b].clone(), self.ys[b].clone())
        }
    }

    /// Components, along `∂x^β, ∂y^β (β ≤ n)` and `∂y^{n+1}`, of the real
    /// frame `X̂_1, …, X̂_{2n}, T`.
    fn frame(&self) -> Vec<Vec<Poly<Q>>> {
        let (n, w, d) = (self.n, self.w, self.d());
        let zs: Vec<CJet<Q>> = (0..=n).map(|b| self.z(b)).collect();
        let t_vec = |a: usize| -> Vec<CJet<Q>> {
            (0..=n)
                .map(|b| {
                    let delta = if a == b { Poly::one(d) } else { Poly::zero(d) };
                    CJet::real(delta).sub(&zs[a].conj().mul(&zs[b], w))
                })
                .collect()
        };
        let t_last = t_vec(n);
        // c_α = z̄^α z^{n+1} / (|z^{n+1}|(1+|z^{n+1}|))
        let inv_den = {
            let prod = self.abs_last.mul_trunc(&Poly::one(d).add(&self.abs_last), w);
            let h = prod.sub(&Poly::constant(d, Q::from_rational(int(2)))).scale_rat(&rat(1, 2));
            Poly::inv1p(&h, w).scale_rat(&rat(1, 2))
        };
        let inv_sqrt2 = QSqrt2::inv_sqrt2();
        let mut out = Vec::with_capacity(2 * n + 1);
        let mut zfields = Vec::with_capacity(n);
        for a in 0..n {
            let c = zs[a].conj().mul(&zs[n], w).mul_real(&inv_den, w);
            let tv = t_vec(a);
            let v: Vec<CJet<Q>> = (0..=n).map(|b| tv[b].sub(&c.mul(&t_last[b], w))).collect();
            zfields.push(v);
        }
        let real_field = |v: &[CJet<Q>], imaginary: bool| -> Vec<Poly<Q>> {
            // X = (1/√2) Σ (Re v ∂x + Im v ∂y)   or   (1/√2) Σ (Im v ∂x − Re v ∂y)
            let (cx, cy): (Vec<Poly<Q>>, Vec<Poly<Q>>) = v
                .iter()
                .map(|vb| if imaginary { (vb.im.clone(), vb.re.neg()) } else { (vb.re.clone(), vb.im.clone()) })
                .unzip();
            let mut comps = Vec::with_capacity(2 * n + 1);
            comps.extend(cx[..n].iter().map(|p| p.scale(&inv_sqrt2)));
            comps.extend(cy[..n].iter().map(|p| p.scale(&inv_sqrt2)));
            comps.push(cy[n].scale(&inv_sqrt2));
            comps
        };
        for v in &zfields {
            out.push(real_field(v, false));
        }
        for v in &zfields {
            out.push(real_field(v, true));
        }
        let half = rat(1, 2);
        let mut t = Vec::with_capacity(2 * n + 1);
        t.extend(self.ys.iter().map(|y| y.scale_rat(&half).neg()));
        t.extend(self.xs.iter().map(|x| x.scale_rat(&half)));
        t.push(self.x_last.scale_rat(&half));
        out.push(t);
        out
    }
}

/// Jet of the Folland-Stein chart map `u ↦ E_x(u)` for the sphere, as the
/// chart coordinates `(x^1..x^n, y^1..y^n, y^{n+1})` of the point reached at
/// time 1 along the flow of `Σ_j u^j X̂_j` from the base point.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartJet {
    pub n: usize,
    pub order: usize,
    pub coords: Vec<Poly<QSqrt2>>,
    pub iterations: usize,
}

impl ChartJet {
    /// Evaluate the jet at a numeric `u`.
    pub fn eval(&self, u: &[f64]) -> Vec<f64> {
        self.coords.iter().map(|p| p.eval_f64(u)).collect()
    }
}

/// Picard iteration `E ← Σ_d (1/d)·[deg_d Σ_j u^j F_j(E)]` in the truncated
/// jet algebra. Each sweep fixes at least one more weight.
pub fn chart_jet(model: &ModelSpec, order: usize) -> Result<ChartJet> {
    if model.kind != ModelKind::Sphere {
        return Err(Error::UnsupportedModel(format!("{} has global normal coordinates; no chart jet", model.kind)));
    }
    let n = model.n;
    let d = model.dim();
    let mut e: Vec<Poly<QSqrt2>> = vec![Poly::zero(d); d];
    let max_iter = order + 2;
    for it in 0..=max_iter {
        let amb = SphereAmbient::new(n, &e, order);
        let frame = amb.frame();
        let mut next = Vec::with_capacity(d);
        for i in 0..d {
            let mut v = Poly::zero(d);
            for (j, fj) in frame.iter().enumerate() {
                v = v.add(&fj[i].mul_trunc(&Poly::var(d, j), order));
            }
            let mut ei = Poly::zero(d);
            for (deg, part) in v.degree_parts() {
                ei = ei.add(&part.scale_rat(&rat(1, deg as i64)));
            }
            next.push(ei);
        }
        if next == e {
            return Ok(ChartJet { n, order, coords: e, iterations: it });
        }
        e = next;
    }
    Err(Error::NoConvergence(max_iter))
}

fn to_rational(p: &Poly<QSqrt2>) -> Result<Poly<Rational>> {
    p.try_map_ring(QSqrt2::as_rational)
        .ok_or_else(|| Error::Invalid("irrational coefficient where a rational was expected".into()))
}

fn sphere_structure(n: usize, order: usize) -> Result<StructureJet> {
    let d = 2 * n + 1;
    let chart = chart_jet(&ModelSpec::sphere(n), order)?;
    let w = order;
    let amb = SphereAmbient::new(n, &chart.coords, w);
    let a_ = amb.inv_one_plus.clone();
    let b_ = amb.inv_b();
    let (x, y) = (&amb.xs, &amb.ys);
    let s2 = QSqrt2::inv_sqrt2();
    let delta = |p: usize, q: usize| if p == q { 1 } else { 0 };
    let mut c = StructureJet::zero(n, order);
    let lin = |coefs: [(i64, &Poly<QSqrt2>); 3]| -> Poly<QSqrt2> {
        let mut acc = Poly::zero(d);
        for (k, p) in coefs {
            if k != 0 {
                acc = acc.add(&p.scale_rat(&int(k)));
            }
        }
        acc
    };
    let zero = Poly::zero(d);
    for al in 0..n {
        for be in 0..n {
            let cross = x[al].mul_trunc(&y[be], w).sub(&x[be].mul_trunc(&y[al], w)).mul_trunc(&b_, w);
            let dot = x[al].mul_trunc(&x[be], w).add(&y[al].mul_trunc(&y[be], w)).mul_trunc(&b_, w);
            for ga in 0..n {
                let f = |first: Poly<QSqrt2>, second: Poly<QSqrt2>| -> Result<Poly<Rational>> {
                    to_rational(&first.mul_trunc(&a_, w).add(&second).scale(&s2).truncate(w))
                };
                let (dag, dbg, dab) = (delta(al, ga), delta(be, ga), delta(al, be));
                // C^γ_{αβ}, C^{n+γ}_{αβ}
                if al < be {
                    c.set_antisym(ga, al, be, f(lin([(-dag, &x[be]), (dbg, &x[al]), (0, &zero)]), cross.mul_trunc(&y[ga], w))?);
                    c.set_antisym(n + ga, al, be, f(lin([(-dag, &y[be]), (dbg, &y[al]), (0, &zero)]), cross.mul_trunc(&x[ga], w))?);
                    c.set_antisym(ga, n + al, n + be, f(lin([(dag, &x[be]), (-dbg, &x[al]), (0, &zero)]), cross.mul_trunc(&y[ga], w))?);
                    c.set_antisym(n + ga, n + al, n + be, f(lin([(dag, &y[be]), (-dbg, &y[al]), (0, &zero)]), cross.mul_trunc(&x[ga], w))?);
                }
                c.set_antisym(ga, al, n + be, f(lin([(dag, &y[be]), (-dbg, &y[al]), (2 * dab, &y[ga])]), dot.mul_trunc(&y[ga], w))?);
                c.set_antisym(n + ga, al, n + be, f(lin([(-dag, &x[be]), (dbg, &x[al]), (2 * dab, &x[ga])]), dot.mul_trunc(&x[ga], w))?);
            }
        }
        c.set_antisym(2 * n, al, n + al, Poly::constant(d, int(2)));
        c.set_antisym(n + al, 2 * n, al, Poly::constant(d, rat(1, 2)).truncate(w));
        c.set_antisym(al, 2 * n, n + al, Poly::constant(d, rat(-1, 2)).truncate(w));
    }
    Ok(c)
}

/// Christoffel symbols of the Tanaka-Webster connection in the frame `Z_α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Christoffel {
    pub model: ModelSpec,
}

/// Christoffel data for `model`.
pub fn christoffel(model: &ModelSpec) -> Christoffel {
    Christoffel { model: *model }
}

impl Christoffel {
    /// `g_{αβ}(z) = δ_{αβ}/(1+|z^{n+1}|) + z̄^α z^β / (2|z^{n+1}|(1+|z^{n+1}|)²)`.
    fn g(&self, z: &[Complex64], al: usize, be: usize) -> Complex64 {
        let n = self.model.n;
        let s = z[n].norm();
        let delta = if al == be { 1.0 } else { 0.0 };
        Complex64::new(delta / (1.0 + s), 0.0) + z[al].conj() * z[be] / (2.0 * s * (1.0 + s).powi(2))
    }

    /// `Γ^γ_{β̄α}(z)` (zero-based indices), `z ∈ ℂ^{n+1}` on the sphere.
    pub fn gamma_barbeta_alpha(&self, z: &[Complex64], gamma: usize, beta: usize, alpha: usize) -> Complex64 {
        match self.model.kind {
            ModelKind::Heisenberg => Complex64::new(0.0, 0.0),
            ModelKind::Sphere => self.g(z, alpha, beta) * z[gamma],
        }
    }

    /// `Γ^γ̄_{αβ̄}(z)`.
    pub fn gamma_alpha_barbeta_conj(&self, z: &[Complex64], gamma: usize, alpha: usize, beta: usize) -> Complex64 {
        match self.model.kind {
            ModelKind::Heisenberg => Complex64::new(0.0, 0.0),
            ModelKind::Sphere => self.g(z, alpha, beta) * z[gamma].conj(),
        }
    }

    /// `Γ^α_{β̄β}(z)`.
    pub fn trace_term(&self, z: &[Complex64], alpha: usize, beta: usize) -> Complex64 {
        self.gamma_barbeta_alpha(z, alpha, beta, beta)
    }

    /// `Γ^α_{β̄β}` at the base point, as a matrix `[α][β]`.
    pub fn at_base_point(&self) -> Vec<Vec<Complex64>> {
        let n = self.model.n;
        let mut z = vec![Complex64::new(0.0, 0.0); n + 1];
        z[n] = Complex64::new(1.0, 0.0);
        (0..n).map(|a| (0..n).map(|b| self.trace_term(&z, a, b)).collect()).collect()
    }
}

/// Drift `X̂₀ = −√2 Σ_{α,β} (Re Γ^α_{β̄β} X̂_α − Im Γ^α_{β̄β} X̂_{n+α})`,
/// truncated like a frame field of weight `order`.
pub fn drift_field(model: &ModelSpec, order: usize) -> Result<VectorField<Rational>> {
    let d = model.dim();
    match model.kind {
        ModelKind::Heisenberg => Ok(VectorField::zero(d)),
        ModelKind::Sphere => {
            let n = model.n;
            let w = order + 1;
            let frame = frame_expansion(model, order.max(1))?;
            let chart = chart_jet(model, w)?;
            let amb = SphereAmbient::new(n, &chart.coords, w);
            let b_half = amb.inv_b().scale_rat(&rat(1, 2));
            let mut g = Poly::zero(d);
            for be in 0..n {
                let mod2 = amb.xs[be].mul_trunc(&amb.xs[be], w).add(&amb.ys[be].mul_trunc(&amb.ys[be], w));
                g = g.add(&amb.inv_one_plus).add(&mod2.mul_trunc(&b_half, w));
            }
            let minus_sqrt2 = QSqrt2::sqrt2().neg();
            let mut drift = VectorField::zero(d);
            for al in 0..n {
                let re = to_rational(&g.mul_trunc(&amb.xs[al], w).scale(&minus_sqrt2))?;
                let im = to_rational(&g.mul_trunc(&amb.ys[al], w).scale(&minus_sqrt2))?;
                let xa = &frame.fields[al];
                let xna = &frame.fields[n + al];
                let part = xa.mul_poly(&re).sub(&xna.mul_poly(&im));
                drift = drift.add(&part);
            }
            Ok(drift.truncate(order))
        }
    }
}

/// The ambient frame `X̂_1,…,X̂_{2n}, T` of the sphere at a numeric chart
/// point `q = (x^1..x^n, y^1..y^n, y^{n+1})`, as components along the chart
/// coordinates. Used by numeric cross-checks.
pub fn sphere_frame_at(n: usize, q: &[f64]) -> Vec<Vec<f64>> {
    let xs = &q[..n];
    let ys = &q[n..2 * n];
    let y_last = q[2 * n];
    let r2: f64 = xs.iter().chain(ys).map(|v| v * v).sum();
    let x_last = (1.0 - r2 - y_last * y_last).sqrt();
    let abs_last = (1.0 - r2).sqrt();
    let mut z: Vec<Complex64> = (0..n).map(|a| Complex64::new(xs[a], ys[a])).collect();
    z.push(Complex64::new(x_last, y_last));
    let t_vec = |a: usize| -> Vec<Complex64> {
        (0..=n).map(|b| Complex64::new(if a == b { 1.0 } else { 0.0 }, 0.0) - z[a].conj() * z[b]).collect()
    };
    let t_last = t_vec(n);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(2 * n + 1);
    let mut zf = Vec::new();
    for a in 0..n {
        let c = z[a].conj() * z[n] / (abs_last * (1.0 + abs_last));
        let tv = t_vec(a);
        zf.push((0..=n).map(|b| tv[b] - c * t_last[b]).collect::<Vec<_>>());
    }
    for imaginary in [false, true] {
        for v in &zf {
            let mut comps = vec![0.0; 2 * n + 1];
            for b in 0..=n {
                let (cx, cy) = if imaginary { (v[b].im, -v[b].re) } else { (v[b].re, v[b].im) };
                if b < n {
                    comps[b] = s * cx;
                    comps[n + b] = s * cy;
                } else {
                    comps[2 * n] = s * cy;
                }
            }
            out.push(comps);
        }
    }
    let mut t = Vec::with_capacity(2 * n + 1);
    t.extend(ys.iter().map(|y| -0.5 * y));
    t.extend(xs.iter().map(|x| 0.5 * x));
    t.push(0.5 * x_last);
    out.push(t);
    out
}
