//! Brownian paths on a uniform grid, iterated Stratonovich integrals, Lévy
//! areas and the Wiener functionals that enter the first curvature
//! correction of the sphere's heat kernel.
//!
//! Letters `1..=2n` index Brownian components and `0` stands for `dt`.
//! Every Stratonovich integral uses the trapezoid rule
//! `Y_{m+1} = Y_m + ½(X_m + X_{m+1}) ΔW_m`, which makes the shuffle identity
//! `B^{(j)} B^{(k)} = B^{(j,k)} + B^{(k,j)}` hold to round-off.

use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::collections::HashMap;

/// The random source for path `path_index` of the run keyed by `seed`.
/// Streams are disjoint ChaCha substreams, so paths are independent and can
/// be generated in any order.
pub fn path_rng(seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

/// A discretised `2n`-dimensional Brownian path on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathGrid {
    pub n: usize,
    pub steps: usize,
    pub dt: f64,
    pub seed: u64,
    pub path_index: u64,
    /// Row-major `steps × 2n` array of increments.
    pub increments: Vec<f64>,
}

impl PathGrid {
    pub fn from_increments(n: usize, steps: usize, increments: Vec<f64>) -> Self {
        assert_eq!(increments.len(), steps * 2 * n);
        PathGrid { n, steps, dt: 1.0 / steps as f64, seed: 0, path_index: 0, increments }
    }

    pub fn width(&self) -> usize {
        2 * self.n
    }

    /// Increment of component `j ∈ 1..=2n` over step `m`; `j = 0` gives `dt`.
    #[inline]
    pub fn dw(&self, m: usize, j: usize) -> f64 {
        if j == 0 {
            self.dt
        } else {
            self.increments[m * self.width() + j - 1]
        }
    }

    /// `W^j` at the grid points (length `steps + 1`, starting at 0).
    pub fn component(&self, j: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.steps + 1);
        let mut acc = 0.0;
        out.push(acc);
        for m in 0..self.steps {
            acc += self.dw(m, j);
            out.push(acc);
        }
        out
    }

    /// `W_1`.
    pub fn endpoint(&self) -> Vec<f64> {
        (1..=self.width()).map(|j| (0..self.steps).map(|m| self.dw(m, j)).sum()).collect()
    }

    /// The reflected path `−W`.
    pub fn negated(&self) -> Self {
        PathGrid { increments: self.increments.iter().map(|x| -x).collect(), ..self.clone() }
    }
}

/// `sample_path(seed, path_index, steps, n)`.
pub fn sample_path(seed: u64, path_index: u64, steps: usize, n: usize) -> PathGrid {
    let mut increments = vec![0.0; steps * 2 * n];
    fill_increments(seed, path_index, steps, &mut increments);
    PathGrid { n, steps, dt: 1.0 / steps as f64, seed, path_index, increments }
}

/// Write the increments of path `path_index` into `buf` (length `steps·2n`)
/// without allocating; identical to [`sample_path`]'s.
pub fn fill_increments(seed: u64, path_index: u64, steps: usize, buf: &mut [f64]) {
    let mut rng = path_rng(seed, path_index);
    let sd = (1.0 / steps as f64).sqrt();
    for x in buf.iter_mut() {
        let z: f64 = StandardNormal.sample(&mut rng);
        *x = z * sd;
    }
}

/// `∫_0^t x ∘ dW^j` on the grid by the trapezoid rule (`j = 0`: `dt`).
pub fn integrate(path: &PathGrid, x: &[f64], j: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(path.steps + 1);
    let mut acc = 0.0;
    out.push(acc);
    for m in 0..path.steps {
        acc += 0.5 * (x[m] + x[m + 1]) * path.dw(m, j);
        out.push(acc);
    }
    out
}

/// Pointwise product of two grid processes.
pub fn product(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// `B^J` at every grid point, for words filled in on demand. The table is
/// prefix-closed: storing `(j_1,…,j_b)` stores all its prefixes.
#[derive(Clone, Debug)]
pub struct IteratedTable {
    path: PathGrid,
    values: HashMap<Vec<usize>, Vec<f64>>,
}

impl IteratedTable {
    pub fn new(path: PathGrid) -> Self {
        IteratedTable { path, values: HashMap::new() }
    }

    /// Table holding every word with `‖J‖ ≤ max_norm`.
    pub fn build(path: PathGrid, max_norm: usize) -> Self {
        let mut t = IteratedTable::new(path);
        let letters = 2 * t.path.n + 1;
        for w in crate::vfield::MultiIndex::all_up_to_norm(letters, max_norm) {
            t.ensure(&w.0);
        }
        t
    }

    pub fn path(&self) -> &PathGrid {
        &self.path
    }

    pub fn n(&self) -> usize {
        self.path.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, word: &[usize]) -> bool {
        self.values.contains_key(word)
    }

    /// Compute `B^J` (and its prefixes) if not yet present.
    pub fn ensure(&mut self, word: &[usize]) -> &[f64] {
        if !self.values.contains_key(word) {
            let (&last, prefix) = word.split_last().expect("empty multi-index");
            let inner = if prefix.is_empty() {
                vec![1.0; self.path.steps + 1]
            } else {
                self.ensure(prefix).to_vec()
            };
            let v = integrate(&self.path, &inner, last);
            self.values.insert(word.to_vec(), v);
        }
        &self.values[word]
    }

    /// Stored `B^J` path.
    pub fn get(&self, word: &[usize]) -> Result<&[f64]> {
        self.values
            .get(word)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingIndex(crate::vfield::MultiIndex::new(word).to_string()))
    }

    /// `B^J_1`, computing it if needed.
    pub fn at_one(&mut self, word: &[usize]) -> f64 {
        *self.ensure(word).last().expect("non-empty grid")
    }

    /// Stored `B^J_1`.
    pub fn value(&self, word: &[usize]) -> Result<f64> {
        Ok(*self.get(word)?.last().expect("non-empty grid"))
    }
}

/// Lévy area `S^α = B^{(α,n+α)} − B^{(n+α,α)}` along the grid (`α ∈ 1..=n`).
pub fn levy_area(table: &IteratedTable, alpha: usize) -> Result<Vec<f64>> {
    let n = table.n();
    if alpha == 0 || alpha > n {
        return Err(Error::Invalid(format!("area index {alpha} outside 1..={n}")));
    }
    let a = table.get(&[alpha, n + alpha])?;
    let b = table.get(&[n + alpha, alpha])?;
    Ok(a.iter().zip(b).map(|(x, y)| x - y).collect())
}

/// `Σ_α S^α_1` computed straight from the increments (no table).
pub fn total_area(path: &PathGrid) -> f64 {
    let n = path.n;
    let mut w = vec![0.0; 2 * n];
    let mut s = 0.0;
    for m in 0..path.steps {
        for a in 0..n {
            let (dx, dy) = (path.dw(m, a + 1), path.dw(m, n + a + 1));
            s += (w[a] + 0.5 * dx) * dy - (w[n + a] + 0.5 * dy) * dx;
        }
        for (j, wj) in w.iter_mut().enumerate() {
            *wj += path.dw(m, j + 1);
        }
    }
    s
}

/// `σ(i) = +1` for `i ≤ n`, `−1` for `n < i ≤ 2n`.
pub fn sigma(i: usize, n: usize) -> f64 {
    if i <= n {
        1.0
    } else {
        -1.0
    }
}

/// The index written `σ(i)n + i`, read as the conjugate partner: `n+i` for
/// `i ≤ n` and `i−n` for `i > n`.
pub fn partner(i: usize, n: usize) -> usize {
    if i <= n {
        n + i
    } else {
        i - n
    }
}

/// How the `κ₄` weight is assembled; see [`PhiFunctionals::kappa4`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kappa4Form {
    /// `−8κ₃² Σ_α(−2∫B^{(n+α,0)}B^α + 2∫B^{(α,0)}B^{n+α}) + 2Σ_α(B^{(α,0)}B^{(n+α,0,0)} − B^{(n+α,0)}B^{(α,0,0)})`,
    /// the formula as usually printed.
    Printed,
    /// `−κ₃⁻¹⟨∇κ₃, ∇̃S⟩` worked out directly:
    /// `−8κ₃² Σ_α(−2∫B^{(n+α,0)}B^α + 2∫B^{(α,0)}B^{n+α} + 4(B^{(α,0)}B^{(n+α,0,0)} − B^{(n+α,0)}B^{(α,0,0)}))`.
    Rederived,
}

/// Pathwise weights `σ, κ^i_1, κ^i_2, κ_3, κ_4` and the functionals `Φ^i_J`
/// with `E[∂^i δ_0(X_1) B^J_1] = E[δ_0(X_1) Φ^i_J]`, where
/// `X_1 = (B^1_1, …, B^{2n}_1, Σ_α S^α_1)`.
#[derive(Clone, Debug)]
pub struct PhiFunctionals {
    pub n: usize,
    pub table: IteratedTable,
    pub kappa1: Vec<f64>,
    pub kappa2: Vec<f64>,
    pub kappa3: f64,
    pub kappa4: f64,
    /// `κ₄` from the rederived formula, whatever `form` was requested; the
    /// generic functionals of [`PhiFunctionals::phi_rederived`] use it.
    pub kappa4_rederived: f64,
    comp: Vec<Vec<f64>>,
}

/// Smallest admissible `κ₃` denominator.
pub const KAPPA3_FLOOR: f64 = 1e-12;

/// `phi_functionals(path, table, n)`.
pub fn phi_functionals(table: IteratedTable, form: Kappa4Form) -> Result<PhiFunctionals> {
    let mut table = table;
    let n = table.n();
    let path = table.path().clone();
    let comp: Vec<Vec<f64>> = (0..=2 * n).map(|j| if j == 0 { vec![] } else { path.component(j) }).collect();
    let mut kappa1 = vec![0.0; 2 * n + 1];
    let mut kappa2 = vec![0.0; 2 * n + 1];
    let mut denom = 0.0;
    for i in 1..=2 * n {
        kappa1[i] = -2.0 * sigma(i, n) * table.at_one(&[partner(i, n), 0]);
        kappa2[i] = 2.0 * table.at_one(&[i, 0]) - 4.0 * table.at_one(&[i, 0, 0]);
        let sq = integrate(&path, &product(&comp[i], &comp[i]), 0);
        let mean = table.at_one(&[i, 0]);
        denom += sq[path.steps] - mean * mean;
    }
    denom *= 4.0;
    if !(denom > KAPPA3_FLOOR) {
        return Err(Error::DegeneratePath(format!("κ₃ denominator {denom:e}")));
    }
    let kappa3 = 1.0 / denom;
    let mut area_part = 0.0;
    let mut cross_part = 0.0;
    for a in 1..=n {
        let ba0 = table.ensure(&[a, 0]).to_vec();
        let bna0 = table.ensure(&[n + a, 0]).to_vec();
        let i1 = integrate(&path, &product(&bna0, &comp[a]), 0)[path.steps];
        let i2 = integrate(&path, &product(&ba0, &comp[n + a]), 0)[path.steps];
        area_part += -2.0 * i1 + 2.0 * i2;
        cross_part += table.at_one(&[a, 0]) * table.at_one(&[n + a, 0, 0]) - table.at_one(&[n + a, 0]) * table.at_one(&[a, 0, 0]);
    }
    let kappa4_rederived = -8.0 * kappa3 * kappa3 * (area_part + 4.0 * cross_part);
    let kappa4 = match form {
        Kappa4Form::Printed => -8.0 * kappa3 * kappa3 * area_part + 2.0 * cross_part,
        Kappa4Form::Rederived => kappa4_rederived,
    };
    Ok(PhiFunctionals { n, table, kappa1, kappa2, kappa3, kappa4, kappa4_rederived, comp })
}

impl PhiFunctionals {
    fn path(&self) -> &PathGrid {
        self.table.path()
    }

    fn end(v: &[f64]) -> f64 {
        *v.last().expect("non-empty grid")
    }

    /// `∫_0^1 x_s B^{p(l)}_s ds`
    fn against_partner_dt(&self, x: &[f64], l: usize) -> f64 {
        Self::end(&integrate(self.path(), &product(x, &self.comp[partner(l, self.n)]), 0))
    }

    /// `Φ^i_{jkl}` for `i, j, k, l ∈ 1..=2n`.
    pub fn phi_jkl(&mut self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let t = &mut self.table;
        let mut v = -d(i, j) * t.at_one(&[0, k, l]) - d(i, k) * t.at_one(&[j, 0, l]) - d(i, l) * t.at_one(&[j, k, 0]);
        v += (self.kappa1[i] * self.kappa4 + self.kappa2[i] * self.kappa3) * t.at_one(&[j, k, l]);
        let first = sigma(j, n) * t.at_one(&[partner(j, n), 0, k, l]);
        let inner = integrate(self.path(), &product(&self.comp[j], &self.comp[partner(k, n)]), 0);
        let second = sigma(k, n) * Self::end(&integrate(self.path(), &inner, l));
        let bjk = self.table.ensure(&[j, k]).to_vec();
        let third = sigma(l, n) * self.against_partner_dt(&bjk, l);
        v - 2.0 * self.kappa1[i] * self.kappa3 * (first + second + third)
    }

    /// `Φ^i_{i,0}`.
    pub fn phi_i0(&mut self, i: usize) -> f64 {
        let n = self.n;
        let t = &mut self.table;
        (self.kappa1[i] * self.kappa4 + self.kappa2[i] * self.kappa3) * t.at_one(&[i, 0])
            - 2.0 * sigma(i, n) * self.kappa1[i] * self.kappa3 * t.at_one(&[partner(i, n), 0])
    }

    /// `Φ^{2n+1}_{ijkl}`.
    pub fn phi_top_ijkl(&mut self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        let mut v = -self.kappa4 * self.table.at_one(&[i, j, k, l]);
        let a = sigma(i, n) * self.table.at_one(&[partner(i, n), 0, j, k, l]);
        let p = self.path().clone();
        let inner = integrate(&p, &product(&self.comp[i], &self.comp[partner(j, n)]), 0);
        let b = sigma(j, n) * Self::end(&integrate(&p, &integrate(&p, &inner, k), l));
        let bij = self.table.ensure(&[i, j]).to_vec();
        let c = sigma(k, n) * Self::end(&integrate(&p, &integrate(&p, &product(&bij, &self.comp[partner(k, n)]), 0), l));
        let bijk = self.table.ensure(&[i, j, k]).to_vec();
        let e = sigma(l, n) * self.against_partner_dt(&bijk, l);
        v += 2.0 * self.kappa3 * (a + b + c + e);
        v
    }

    /// `Φ^{2n+1}_{i,0,j}`.
    pub fn phi_top_i0j(&mut self, i: usize, j: usize) -> f64 {
        let n = self.n;
        let mut v = -self.kappa4 * self.table.at_one(&[i, 0, j]);
        let a = sigma(i, n) * self.table.at_one(&[partner(i, n), 0, 0, j]);
        let bi0 = self.table.ensure(&[i, 0]).to_vec();
        let b = sigma(j, n) * self.against_partner_dt(&bi0, j);
        v += 2.0 * self.kappa3 * (a + b);
        v
    }

    /// `Φ^i_J` for any word supported by the closed forms above
    /// (`(j,k,l)` and `(i,0)` for `i ≤ 2n`; `(i,j,k,l)` and `(i,0,j)` for
    /// `i = 2n+1`). Component `i` is one-based.
    pub fn phi(&mut self, i: usize, word: &[usize]) -> Result<f64> {
        let top = 2 * self.n + 1;
        match (i == top, word) {
            (false, &[j, k, l]) if j > 0 && k > 0 && l > 0 => Ok(self.phi_jkl(i, j, k, l)),
            (false, &[a, 0]) if a == i => Ok(self.phi_i0(i)),
            (true, &[a, b, c, d]) if a > 0 && b > 0 && c > 0 && d > 0 => Ok(self.phi_top_ijkl(a, b, c, d)),
            (true, &[a, 0, b]) if a > 0 && b > 0 => Ok(self.phi_top_i0j(a, b)),
            _ => Err(Error::Invalid(format!(
                "no closed-form functional for component {i} and word {}",
                crate::vfield::MultiIndex::new(word)
            ))),
        }
    }

    /// `⟨∇B^J, V⟩` where `V = ∇̃S` is the part of the derivative of the total
    /// area orthogonal to the directions of `B_1`:
    /// `V^k_t = −2σ(k)(B^{p(k)}_t − B^{(p(k),0)}_1)`. Each non-zero letter of
    /// `J` in turn is replaced by `V^k_t dt`.
    pub fn derivative_along_area(&mut self, word: &[usize]) -> f64 {
        let n = self.n;
        let p = self.path().clone();
        let mut acc = 0.0;
        for (s, &k) in word.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let q = partner(k, n);
            let mean = self.table.at_one(&[q, 0]);
            let v: Vec<f64> = self.comp[q].iter().map(|w| -2.0 * sigma(k, n) * (w - mean)).collect();
            let prefix = if s == 0 { vec![1.0; p.steps + 1] } else { self.table.ensure(&word[..s]).to_vec() };
            let mut z = integrate(&p, &product(&prefix, &v), 0);
            for &l in &word[s + 1..] {
                z = integrate(&p, &z, l);
            }
            acc += Self::end(&z);
        }
        acc
    }

    /// `⟨∇B^J, B^i_1⟩`: the sum of `B^J` with one occurrence of `i` replaced
    /// by `0`.
    pub fn derivative_along_axis(&mut self, i: usize, word: &[usize]) -> f64 {
        let mut acc = 0.0;
        for s in 0..word.len() {
            if word[s] == i {
                let mut w = word.to_vec();
                w[s] = 0;
                acc += self.table.at_one(&w);
            }
        }
        acc
    }

    /// `Φ^i_J` for any word, from the integration by parts worked out
    /// directly on the support of `δ₀(X₁)` (where `B_1 = 0` and `ΣS_1 = 0`):
    ///
    /// * `i ≤ 2n`: `−⟨∇B^J, B^i_1⟩ + κ₃κ^i_1⟨∇B^J, V⟩ + (κ^i_1κ₄ + κ^i_2κ₃) B^J_1`
    /// * `i = 2n+1`: `−κ₄ B^J_1 − κ₃⟨∇B^J, V⟩`
    ///
    /// with the rederived `κ₄ = ⟨∇κ₃, V⟩`. Component `i` is one-based.
    pub fn phi_rederived(&mut self, i: usize, word: &[usize]) -> Result<f64> {
        let top = 2 * self.n + 1;
        if i == 0 || i > top {
            return Err(Error::Invalid(format!("component {i} outside 1..={top}")));
        }
        let bj = self.table.at_one(word);
        let along = self.derivative_along_area(word);
        let k4 = self.kappa4_rederived;
        if i == top {
            return Ok(-k4 * bj - self.kappa3 * along);
        }
        let axis = self.derivative_along_axis(i, word);
        Ok(-axis + self.kappa3 * self.kappa1[i] * along + (self.kappa1[i] * k4 + self.kappa2[i] * self.kappa3) * bj)
    }

    /// The same integration by parts before restricting to the support of
    /// `δ₀(X₁)`: for any smooth `f`,
    /// `E[∂_i f(X₁) B^J_1] = E[f(X₁) Φ̄^i_J]` with
    ///
    /// * `i ≤ 2n`: `Φ̄ = B^J W^i_1 − ⟨∇B^J, B^i_1⟩ − κ₃ b_i B^J δ(V) + κ₃ b_i ⟨∇B^J, V⟩ + (b_i κ₄ + κ^i_2 κ₃) B^J`
    /// * `i = 2n+1`: `Φ̄ = κ₃ B^J δ(V) − κ₃ ⟨∇B^J, V⟩ − κ₄ B^J`
    ///
    /// where `b_i = κ^i_1 + σ(i) W^{p(i)}_1` and
    /// `δ(V) = 2Σ_α (S^α_1 + B^{(n+α,0)}_1 W^α_1 − B^{(α,0)}_1 W^{n+α}_1)`.
    /// On the support (`W_1 = 0`, `ΣS_1 = 0`) it reduces to
    /// [`PhiFunctionals::phi_rederived`]; away from it the identity holds for
    /// every smooth `f`, which makes it testable with wide mollifiers.
    pub fn phi_unrestricted(&mut self, i: usize, word: &[usize]) -> Result<f64> {
        let n = self.n;
        let top = 2 * n + 1;
        if i == 0 || i > top {
            return Err(Error::Invalid(format!("component {i} outside 1..={top}")));
        }
        let mut div_v = 0.0;
        for a in 1..=n {
            let s = self.table.at_one(&[a, n + a]) - self.table.at_one(&[n + a, a]);
            let w_a = self.table.at_one(&[a]);
            let w_na = self.table.at_one(&[n + a]);
            div_v += 2.0 * (s + self.table.at_one(&[n + a, 0]) * w_a - self.table.at_one(&[a, 0]) * w_na);
        }
        let bj = self.table.at_one(word);
        let along = self.derivative_along_area(word);
        let k4 = self.kappa4_rederived;
        let k3 = self.kappa3;
        if i == top {
            return Ok(k3 * bj * div_v - k3 * along - k4 * bj);
        }
        let b = self.kappa1[i] + sigma(i, n) * self.table.at_one(&[partner(i, n)]);
        let wi = self.table.at_one(&[i]);
        let axis = self.derivative_along_axis(i, word);
        Ok(bj * wi - axis - k3 * b * bj * div_v + k3 * b * along + (b * k4 + self.kappa2[i] * k3) * bj)
    }

    /// `Σ_{(i,J)} c_{i,J} Φ^i_J` with the rederived functionals.
    pub fn aggregate_rederived(&mut self, terms: &[(usize, Vec<usize>, f64)]) -> Result<f64> {
        let mut acc = 0.0;
        for (i, w, c) in terms {
            acc += c * self.phi_rederived(*i, w)?;
        }
        Ok(acc)
    }

    /// `Σ_{(i,J)} c_{i,J} Φ^i_J`.
    pub fn aggregate(&mut self, terms: &[(usize, Vec<usize>, f64)]) -> Result<f64> {
        let mut acc = 0.0;
        for (i, w, c) in terms {
            acc += c * self.phi(*i, w)?;
        }
        Ok(acc)
    }
}

/// The weighted list of `(i, J, c)` making up the aggregate `Φ` in its
/// printed form, for the sphere of dimension `2n+1` (the `Φ^i_{i,2n+1}` and
/// `Φ^{2n+1}_{α,2n+1,β}` entries are read as `Φ^i_{i,0}` and
/// `Φ^{2n+1}_{α,0,β}`).
pub fn printed_phi_terms(n: usize) -> Vec<(usize, Vec<usize>, f64)> {
    let top = 2 * n + 1;
    let mut t: Vec<(usize, Vec<usize>, f64)> = Vec::new();
    let nf = n as f64;
    for i in 1..=2 * n {
        for j in 1..=2 * n {
            t.push((i, vec![j, j, i], 1.0 / 6.0));
            t.push((i, vec![j, i, j], -1.0 / 12.0));
            t.push((i, vec![i, j, j], -1.0 / 12.0));
        }
    }
    for a in 1..=n {
        for b in 1..=n {
            t.push((a, vec![n + b, b, n + a], 0.25));
            t.push((a, vec![b, n + b, n + a], -0.25));
            t.push((n + a, vec![n + b, b, a], -0.25));
            t.push((n + a, vec![b, n + b, a], 0.25));
        }
    }
    for i in 1..=2 * n {
        t.push((i, vec![i, 0], -nf / 2.0));
    }
    for a in 1..=n {
        t.push((top, vec![a, 0, n + a], -nf / 2.0));
        t.push((top, vec![n + a, 0, a], nf / 2.0));
        for j in 1..=2 * n {
            let pairs: [(f64, [usize; 4], [usize; 4]); 6] = [
                (5.0 / 12.0, [j, j, a, n + a], [j, j, n + a, a]),
                (1.0 / 6.0, [j, a, j, n + a], [j, n + a, j, a]),
                (1.0 / 6.0, [a, j, j, n + a], [n + a, j, j, a]),
                (1.0 / 12.0, [a, j, n + a, j], [n + a, j, a, j]),
                (1.0 / 12.0, [j, a, n + a, j], [j, n + a, a, j]),
                (-1.0 / 6.0, [a, n + a, j, j], [n + a, a, j, j]),
            ];
            for (c, p, m) in pairs {
                t.push((top, p.to_vec(), c));
                t.push((top, m.to_vec(), -c));
            }
        }
    }
    t
}
