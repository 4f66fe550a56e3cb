//! Floating-point SDE systems built from exact frames, and the Heun
//! (explicit trapezoid) integrator for `du = Σ_j V_j(u) ∘ dW^j + V_0(u) dt`.

use crate::error::{Error, Result};
use crate::fsnormal::Frame;
use crate::scalar::{Rational, Scalar};
use crate::vfield::VectorField;
use crate::wiener::PathGrid;

/// Which member of the ε-family the compiled fields represent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scaling {
    /// `dU = ε Σ X̂_j(U) ∘ dB^j + ε² X̂₀(U) dt` (ε = 1 is the plain diffusion).
    Unscaled(f64),
    /// The dilated system `F^ε = λ_ε^{-1} U^ε`, whose coefficients are
    /// `a^{i,ε}_j = a^i_j∘λ_ε` (i ≤ 2n), `a^{2n+1,ε}_j = ε^{-1} a^{2n+1}_j∘λ_ε`,
    /// `b^{i,ε} = ε b^i∘λ_ε` (i ≤ 2n), `b^{2n+1,ε} = b^{2n+1}∘λ_ε`.
    Scaled(f64),
}

impl Scaling {
    pub fn eps(&self) -> f64 {
        match *self {
            Scaling::Unscaled(e) | Scaling::Scaled(e) => e,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Term {
    /// Weight slot: 0 = drift, j = field `X̂_j`.
    field: usize,
    comp: usize,
    coef: f64,
    /// Index into the distinct monomials.
    mono: usize,
}

/// Compiled polynomial fields `V_0, V_1, …, V_{2n}` in `2n+1` variables.
///
/// Distinct monomials are evaluated once per call and shared by every
/// field and component that uses them.
#[derive(Clone, Debug)]
pub struct NumSystem {
    pub n: usize,
    pub scaling: Scaling,
    terms: Vec<Term>,
    /// `(variable, exponent)` factors of each distinct monomial.
    monos: Vec<Vec<(usize, i32)>>,
    /// The same factors as offsets into the power table, flattened; monomial
    /// `k` uses `slots[offsets[k]..offsets[k + 1]]`.
    slots: Vec<u32>,
    offsets: Vec<u32>,
    /// Largest exponent of each variable; the power table has rows of
    /// length `stride = max + 1`.
    max_exp: Vec<usize>,
    stride: usize,
    even: bool,
}

fn int_pow(x: f64, k: i32) -> f64 {
    if k == 0 {
        1.0
    } else {
        x.powi(k)
    }
}

impl NumSystem {
    /// Compile `drift` and the horizontal frame under `scaling`.
    pub fn new(frame: &Frame, drift: &VectorField<Rational>, scaling: Scaling) -> Self {
        let n = frame.n();
        let dim = 2 * n + 1;
        let eps = scaling.eps();
        let mut terms = Vec::new();
        let mut monos: Vec<Vec<(usize, i32)>> = Vec::new();
        let mut even = true;
        let mut push = |field: usize, v: &VectorField<Rational>| {
            for comp in 0..dim {
                let vertical = comp == dim - 1;
                for (m, c) in v.coeff(comp).terms() {
                    let w = m.weight() as i32;
                    // power of ε multiplying this monomial
                    let k = match (scaling, field == 0, vertical) {
                        (Scaling::Unscaled(_), false, _) => 1,
                        (Scaling::Unscaled(_), true, _) => 2,
                        (Scaling::Scaled(_), false, false) => w,
                        (Scaling::Scaled(_), false, true) => w - 1,
                        (Scaling::Scaled(_), true, false) => w + 1,
                        (Scaling::Scaled(_), true, true) => w,
                    };
                    debug_assert!(k >= 0, "negative ε power");
                    even &= k % 2 == 0;
                    let coef = c.to_f64() * int_pow(eps, k);
                    if coef == 0.0 {
                        continue;
                    }
                    let factors: Vec<(usize, i32)> = m
                        .exps()
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| (i, e as i32))
                        .collect();
                    let mono = match monos.iter().position(|f| *f == factors) {
                        Some(i) => i,
                        None => {
                            monos.push(factors);
                            monos.len() - 1
                        }
                    };
                    terms.push(Term { field, comp, coef, mono });
                }
            }
        };
        push(0, drift);
        for (j, f) in frame.fields.iter().enumerate() {
            push(j + 1, f);
        }
        let mut max_exp = vec![0usize; dim];
        for f in &monos {
            for &(i, e) in f {
                max_exp[i] = max_exp[i].max(e as usize);
            }
        }
        let stride = max_exp.iter().max().copied().unwrap_or(0) + 1;
        let mut slots = Vec::new();
        let mut offsets = vec![0u32];
        for f in &monos {
            slots.extend(f.iter().map(|&(i, e)| (i * stride + e as usize) as u32));
            offsets.push(slots.len() as u32);
        }
        NumSystem { n, scaling, terms, monos, slots, offsets, max_exp, stride, even }
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `Σ_j weights[j] V_j(u)` written into `out`; `scratch` holds powers
    /// of the coordinates followed by the monomial values.
    #[inline]
    pub fn combine(&self, u: &[f64], weights: &[f64], out: &mut [f64], scratch: &mut Vec<f64>) {
        let table = self.stride * u.len();
        let need = table + self.monos.len();
        if scratch.len() != need {
            scratch.resize(need, 0.0);
        }
        let (pw, vals) = scratch.split_at_mut(table);
        for (i, &x) in u.iter().enumerate() {
            let row = &mut pw[i * self.stride..(i + 1) * self.stride];
            row[0] = 1.0;
            for e in 1..=self.max_exp[i] {
                row[e] = row[e - 1] * x;
            }
        }
        for (v, w) in vals.iter_mut().zip(self.offsets.windows(2)) {
            *v = self.slots[w[0] as usize..w[1] as usize].iter().fold(1.0, |acc, &k| acc * pw[k as usize]);
        }
        out.iter_mut().for_each(|x| *x = 0.0);
        for t in &self.terms {
            out[t.comp] += t.coef * weights[t.field] * vals[t.mono];
        }
    }

    /// Value of `V_j` at `u` (`j = 0` is the drift).
    pub fn field_at(&self, j: usize, u: &[f64]) -> Vec<f64> {
        let mut w = vec![0.0; 2 * self.n + 1];
        w[j] = 1.0;
        let mut out = vec![0.0; self.dim()];
        self.combine(u, &w, &mut out, &mut Vec::new());
        out
    }

    /// Value at 0 and Jacobian at 0 (`jac[i][k] = ∂_k V_j^i(0)`).
    pub fn jet_at_origin(&self, j: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
        let dim = self.dim();
        let mut v0 = vec![0.0; dim];
        let mut jac = vec![vec![0.0; dim]; dim];
        for t in self.terms.iter().filter(|t| t.field == j) {
            match self.monos[t.mono].as_slice() {
                [] => v0[t.comp] += t.coef,
                [(k, 1)] => jac[t.comp][*k] += t.coef,
                _ => {}
            }
        }
        (v0, jac)
    }

    /// Whether every coefficient carries an even power of `ε`. Then
    /// `F^{−ε} = F^ε`, and since `D F^ε(−B) = F^{−ε}(B)` a reflected path
    /// adds nothing for kernels that are even in each coordinate.
    pub fn is_even_in_eps(&self) -> bool {
        self.even
    }
}

/// Heun integration state with preallocated buffers.
pub struct Heun<'a> {
    sys: &'a NumSystem,
    pub guard: f64,
    weights: Vec<f64>,
    k1: Vec<f64>,
    k2: Vec<f64>,
    pred: Vec<f64>,
    scratch: Vec<f64>,
}

impl<'a> Heun<'a> {
    pub fn new(sys: &'a NumSystem, guard: f64) -> Self {
        let dim = sys.dim();
        Heun {
            sys,
            guard,
            weights: vec![0.0; 2 * sys.n + 1],
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            pred: vec![0.0; dim],
            scratch: Vec::new(),
        }
    }

    /// One step with driver increments `dw` (length `2n`) and time step `dt`.
    #[inline]
    pub fn step(&mut self, u: &mut [f64], dw: &[f64], dt: f64) {
        self.weights[0] = dt;
        self.weights[1..].copy_from_slice(dw);
        self.sys.combine(u, &self.weights, &mut self.k1, &mut self.scratch);
        for ((p, x), k) in self.pred.iter_mut().zip(u.iter()).zip(&self.k1) {
            *p = x + k;
        }
        self.sys.combine(&self.pred, &self.weights, &mut self.k2, &mut self.scratch);
        for ((x, a), b) in u.iter_mut().zip(&self.k1).zip(&self.k2) {
            *x += 0.5 * (a + b);
        }
    }

    /// Integrate from 0 along increments laid out as `steps × 2n`, with
    /// every increment multiplied by `sign`.
    pub fn run(&mut self, increments: &[f64], steps: usize, sign: f64) -> Result<Vec<f64>> {
        let dim = self.sys.dim();
        let width = dim - 1;
        let dt = 1.0 / steps as f64;
        let mut u = vec![0.0; dim];
        let mut dw = vec![0.0; width];
        let g2 = self.guard * self.guard;
        for row in increments.chunks_exact(width).take(steps) {
            for (x, r) in dw.iter_mut().zip(row) {
                *x = sign * r;
            }
            self.step(&mut u, &dw, dt);
            let r2: f64 = u.iter().map(|x| x * x).sum();
            if !(r2 <= g2) {
                return Err(Error::Escaped { norm: r2.sqrt(), radius: self.guard });
            }
        }
        Ok(u)
    }
}

/// Paths integrated together by [`HeunBatch`].
pub const LANES: usize = 16;

type Lanes = [f64; LANES];

/// Heun integration of [`LANES`] paths in lockstep. Every lane performs the
/// same floating-point operations in the same order as [`Heun`], so results
/// are bit-identical to integrating the paths one by one; batching only
/// turns a latency-bound loop into a vectorisable one.
pub struct HeunBatch<'a> {
    sys: &'a NumSystem,
    pub guard: f64,
    pw: Vec<Lanes>,
    vals: Vec<Lanes>,
    weights: Vec<Lanes>,
    k1: Vec<Lanes>,
    k2: Vec<Lanes>,
    pred: Vec<Lanes>,
}

impl<'a> HeunBatch<'a> {
    pub fn new(sys: &'a NumSystem, guard: f64) -> Self {
        let dim = sys.dim();
        let z = [0.0; LANES];
        HeunBatch {
            sys,
            guard,
            pw: vec![z; dim * sys.stride],
            vals: vec![z; sys.monos.len()],
            weights: vec![z; 2 * sys.n + 1],
            k1: vec![z; dim],
            k2: vec![z; dim],
            pred: vec![z; dim],
        }
    }

    #[inline]
    fn combine(&mut self, from_pred: bool, into_k2: bool) {
        let sys = self.sys;
        let u = if from_pred { &self.pred } else { &self.k2 };
        // `k2` doubles as the state buffer between steps; see `run`.
        for (i, x) in u.iter().enumerate() {
            let base = i * sys.stride;
            self.pw[base] = [1.0; LANES];
            for e in 1..=sys.max_exp[i] {
                let prev = self.pw[base + e - 1];
                let row = &mut self.pw[base + e];
                for l in 0..LANES {
                    row[l] = prev[l] * x[l];
                }
            }
        }
        for (k, w) in sys.offsets.windows(2).enumerate() {
            let mut acc = [1.0; LANES];
            for &slot in &sys.slots[w[0] as usize..w[1] as usize] {
                let p = &self.pw[slot as usize];
                for l in 0..LANES {
                    acc[l] *= p[l];
                }
            }
            self.vals[k] = acc;
        }
        let out = if into_k2 { &mut self.k2 } else { &mut self.k1 };
        out.iter_mut().for_each(|x| *x = [0.0; LANES]);
        for t in &sys.terms {
            let (w, v, o) = (&self.weights[t.field], &self.vals[t.mono], &mut out[t.comp]);
            for l in 0..LANES {
                o[l] += t.coef * w[l] * v[l];
            }
        }
    }

    /// Integrate `LANES` paths whose increments are `paths[l]` (each
    /// `steps × 2n`, multiplied by `sign`). Lanes that leave the guard ball
    /// report `Escaped` and are frozen at the origin from then on.
    pub fn run(&mut self, paths: &[&[f64]; LANES], steps: usize, sign: f64) -> [Result<Vec<f64>>; LANES] {
        let sys = self.sys;
        let dim = sys.dim();
        let width = dim - 1;
        let dt = 1.0 / steps as f64;
        let g2 = self.guard * self.guard;
        let mut state = vec![[0.0; LANES]; dim];
        let mut escaped: [Option<f64>; LANES] = [None; LANES];
        self.weights[0] = [dt; LANES];
        for m in 0..steps {
            for j in 0..width {
                for l in 0..LANES {
                    self.weights[j + 1][l] = sign * paths[l][m * width + j];
                }
            }
            // k1 = V(u)·w, evaluated from `state` staged through `pred`
            self.pred.copy_from_slice(&state);
            self.combine(true, false);
            for i in 0..dim {
                for l in 0..LANES {
                    self.pred[i][l] = state[i][l] + self.k1[i][l];
                }
            }
            self.combine(true, true);
            for i in 0..dim {
                for l in 0..LANES {
                    state[i][l] += 0.5 * (self.k1[i][l] + self.k2[i][l]);
                }
            }
            for l in 0..LANES {
                if escaped[l].is_some() {
                    continue;
                }
                let r2: f64 = (0..dim).map(|i| state[i][l] * state[i][l]).sum();
                if !(r2 <= g2) {
                    escaped[l] = Some(r2.sqrt());
                    for row in state.iter_mut() {
                        row[l] = 0.0;
                    }
                }
            }
        }
        std::array::from_fn(|l| match escaped[l] {
            Some(norm) => Err(Error::Escaped { norm, radius: self.guard }),
            None => Ok((0..dim).map(|i| state[i][l]).collect()),
        })
    }
}

/// Default guard radius for trajectories of truncated fields.
pub const DEFAULT_GUARD: f64 = 10.0;

/// `simulate_endpoint(system, path)`.
pub fn simulate_endpoint(sys: &NumSystem, path: &PathGrid, guard: f64) -> Result<Vec<f64>> {
    if path.n != sys.n {
        return Err(Error::DimensionMismatch { left: sys.n, right: path.n });
    }
    Heun::new(sys, guard).run(&path.increments, path.steps, 1.0)
}

/// Order of the truncated fields used for simulation.
pub const SIMULATION_ORDER: usize = 4;

/// Compiled system for `model` at the simulation order.
pub fn compile(model: &crate::models::ModelSpec, order: usize, scaling: Scaling) -> Result<NumSystem> {
    let frame = crate::fsnormal::frame_expansion(model, order)?;
    let drift = crate::models::drift_field(model, order)?;
    Ok(NumSystem::new(&frame, &drift, scaling))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingCheck {
    /// `max_i |F^{ε,i} − ε^{-w_i} U^{ε,i}|` over the components.
    pub max_residual: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// `scaling_identity_check(model, ε, seed)`: integrate `U^ε` with the
/// unscaled fields and `F^ε` with the scaled ones along one path and compare
/// `F^ε` with `(ε^{-1} U^{ε,h}, ε^{-2} U^{ε,2n+1})`. The tolerance is `1e-10`
/// for the Heisenberg group and `10·dt` otherwise.
pub fn scaling_identity_check(model: &crate::models::ModelSpec, eps: f64, seed: u64, steps: usize) -> Result<ScalingCheck> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Invalid(format!("ε must lie in (0, 1], got {eps}")));
    }
    let frame = crate::fsnormal::frame_expansion(model, SIMULATION_ORDER)?;
    let drift = crate::models::drift_field(model, SIMULATION_ORDER)?;
    let u_sys = NumSystem::new(&frame, &drift, Scaling::Unscaled(eps));
    let f_sys = NumSystem::new(&frame, &drift, Scaling::Scaled(eps));
    let path = crate::wiener::sample_path(seed, 0, steps, model.n);
    let u = simulate_endpoint(&u_sys, &path, f64::INFINITY)?;
    let f = simulate_endpoint(&f_sys, &path, f64::INFINITY)?;
    let top = u.len() - 1;
    let max_residual = (0..u.len())
        .map(|i| {
            let s = if i == top { eps * eps } else { eps };
            (f[i] - u[i] / s).abs()
        })
        .fold(0.0, f64::max);
    let tolerance = match model.kind {
        crate::models::ModelKind::Heisenberg => 1e-10,
        crate::models::ModelKind::Sphere => 10.0 / steps as f64,
    };
    Ok(ScalingCheck { max_residual, tolerance, holds: max_residual <= tolerance })
}
