//! Diagonal short-time heat-kernel asymptotics of sub-Laplacians on
//! strictly pseudoconvex CR manifolds.
//!
//! The crate has two halves. The exact half ([`poly`], [`vfield`],
//! [`models`], [`fsnormal`]) computes Folland-Stein normal-coordinate jets of
//! a CR frame in rational arithmetic. The stochastic half ([`wiener`],
//! [`heat`]) simulates the associated diffusion, evaluates iterated
//! Stratonovich integrals and estimates the expansion coefficients
//! `p(t,x,x) ~ t^{-n-1} Σ c_a t^a` by Monte Carlo.

pub mod config;
pub mod error;
pub mod fsnormal;
pub mod heat;
pub mod models;
pub mod par;
pub mod poly;
pub mod scalar;
pub mod vfield;
pub mod wiener;

pub use error::{Error, Result};
pub use models::{ModelKind, ModelSpec};
