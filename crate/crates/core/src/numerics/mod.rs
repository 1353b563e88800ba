//! Shared numerical services: quadrature over the real line, sector grids,
//! real root bracketing, and dense Hermitian eigenproblems.

mod grid;
mod linalg;
mod quad;
mod roots;

pub use grid::{sector_points, SectorGrid};
pub use linalg::{cholesky, gen_eig_max, gen_eig_max_detailed, herm_eig, psd_check, CMatrix, EigenResult, GenEig, PsdVerdict, MAX_DIM};
pub use quad::{integrate_line, Quadrature, QuadratureSpec};
pub use roots::real_roots;
