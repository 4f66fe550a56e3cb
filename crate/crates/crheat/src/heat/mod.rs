//! Numerical side: the Heisenberg constant, compiled SDE systems, kernel
//! density estimation, Taylor expansions of the diffusion, fitting and the
//! heat-kernel experiments built from them.

pub mod c1;
pub mod experiment;
pub mod fit;
pub mod gaveau;
pub mod hormander;
pub mod kde;
pub mod remainder;
pub mod system;
pub mod taylor;
