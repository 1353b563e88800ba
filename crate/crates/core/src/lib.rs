//! Numerical toolkit for composition operators between model spaces, the
//! Hardy space of the upper half-plane, and de Branges spaces of entire
//! functions.
//!
//! The crate is split into four layers:
//!
//! - [`funclib`]: parametric Hermite–Biehler functions, inner functions and
//!   analytic self-maps of the upper half-plane, with growth estimators.
//! - [`kernels`]: reproducing kernels of `H²(ℂ₊)`, `H(χ)` and `H(E)` and Gram
//!   matrix assembly.
//! - [`numerics`]: quadrature on the real line, sector grids, real root
//!   finding and dense Hermitian eigensolvers.
//! - [`criteria`]: boundedness and compactness tests, norm bounds, regularity
//!   and symbol classification, each reported with the evidence it used.

pub mod criteria;
mod error;
pub mod funclib;
pub mod kernels;
pub mod numerics;
pub mod serde_c64;

pub use error::{Error, Result};
pub use num_complex::Complex64;
