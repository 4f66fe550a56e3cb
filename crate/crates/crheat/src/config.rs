//! Run configuration: defaults, `key = value` files and the reproducibility
//! stanza written at the top of every output file.

use crate::error::{Error, Result};
use crate::heat::kde::{Bandwidth, Richardson};
use crate::models::{ModelKind, ModelSpec};
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    pub n: usize,
    pub seed: u64,
    pub paths: u64,
    pub steps: usize,
    /// Times `t = ε²` at which the diagonal is estimated.
    pub ts: Vec<f64>,
    /// Use one seed per `t` (`seed + k`) instead of common random numbers.
    pub independent_seeds: bool,
    pub bandwidth: Bandwidth,
    /// Truncation order of the simulated normal-coordinate fields.
    pub order: usize,
    /// Fit orders in the `√t` and `t` bases.
    pub sqrt_order: usize,
    pub t_order: usize,
    pub guard: f64,
    /// Mollifier width for the `c₁` estimator.
    pub h0: f64,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelKind::Sphere,
            n: 1,
            seed: 1,
            paths: 100_000,
            steps: 4096,
            ts: vec![0.1, 0.05, 0.025],
            independent_seeds: true,
            bandwidth: Bandwidth::Richardson(Richardson::new(0.6, 0.8).expect("valid default bandwidths")),
            order: crate::heat::system::SIMULATION_ORDER,
            sqrt_order: 2,
            t_order: 1,
            guard: crate::heat::system::DEFAULT_GUARD,
            h0: 0.6,
            out: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Invalid(format!("bad value {v:?} for {key}")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_num(key, s)).collect()
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Invalid(format!("bad value {v:?} for {key}"))),
    }
}

impl RunConfig {
    pub fn spec(&self) -> Result<ModelSpec> {
        ModelSpec::new(self.model, self.n)
    }

    /// Set one key. Keys mirror the field names; `eps` is accepted as an
    /// alternative to `t` and is squared.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "model" => self.model = v.parse()?,
            "n" => self.n = parse_num(key, v)?,
            "seed" => self.seed = parse_num(key, v)?,
            "paths" => self.paths = parse_num(key, v)?,
            "steps" => self.steps = parse_num(key, v)?,
            "t" => self.ts = parse_list(key, v)?,
            "eps" => self.ts = parse_list(key, v)?.into_iter().map(|e| e * e).collect(),
            "independent_seeds" => self.independent_seeds = parse_bool(key, v)?,
            "bandwidth" => self.bandwidth = Bandwidth::parse(v)?,
            "order" => self.order = parse_num(key, v)?,
            "sqrt_order" => self.sqrt_order = parse_num(key, v)?,
            "t_order" => self.t_order = parse_num(key, v)?,
            "guard" => self.guard = parse_num(key, v)?,
            "h0" => self.h0 = parse_num(key, v)?,
            "out" => self.out = if v.is_empty() { None } else { Some(v.to_string()) },
            other => return Err(Error::Invalid(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    /// Apply a line-oriented `key = value` text; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("line {}: expected `key = value`", no + 1)))?;
            self.set(k, v).map_err(|e| Error::Invalid(format!("line {}: {e}", no + 1)))?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        c.apply_text(text)?;
        Ok(c)
    }

    /// Seed used for the `k`-th time of the grid.
    pub fn seed_for(&self, k: usize) -> u64 {
        if self.independent_seeds {
            self.seed + k as u64
        } else {
            self.seed
        }
    }

    /// Every field as `key = value` lines, in a fixed order. Parsing this text
    /// reproduces the configuration.
    pub fn to_text(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        let _ = writeln!(s, "model = {}", self.model);
        let _ = writeln!(s, "n = {}", self.n);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "paths = {}", self.paths);
        let _ = writeln!(s, "steps = {}", self.steps);
        let _ = writeln!(s, "t = {}", list(&self.ts));
        let _ = writeln!(s, "independent_seeds = {}", self.independent_seeds);
        let _ = writeln!(s, "bandwidth = {}", self.bandwidth.label());
        let _ = writeln!(s, "order = {}", self.order);
        let _ = writeln!(s, "sqrt_order = {}", self.sqrt_order);
        let _ = writeln!(s, "t_order = {}", self.t_order);
        let _ = writeln!(s, "guard = {}", self.guard);
        let _ = writeln!(s, "h0 = {}", self.h0);
        let _ = writeln!(s, "out = {}", self.out.as_deref().unwrap_or(""));
        s
    }

    /// The stanza as `# config key = value` comment lines.
    pub fn header(&self) -> String {
        self.to_text().lines().map(|l| format!("# config {l}\n")).collect()
    }

    /// Recover a configuration from a file that starts with [`Self::header`].
    pub fn from_header(text: &str) -> Result<Self> {
        let body: String = text
            .lines()
            .filter_map(|l| l.strip_prefix("# config "))
            .map(|l| format!("{l}\n"))
            .collect();
        Self::from_text(&body)
    }
}
