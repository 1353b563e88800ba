//! Boundedness and compactness tests for composition operators, evaluated
//! on finite grids.
//!
//! A grid can never prove that a supremum is finite, so every test returns
//! the evidence it used (suprema per decade of height, growth factors,
//! arguments of the supremum) next to its verdict.

mod debranges;
mod model;
mod norm;
mod report;

pub use debranges::{
    classify_symbol, compactness_probe_db, db_necessary, db_sufficient, mt_membership_checks, norm_upper_bound_affine,
    real_line_samples, regularity_check, Classification, DbSufficient, Membership, RegularityReport, SymbolClass,
};
pub use model::{
    angular_derivative, compactness_probe_model, jc_quantities, model_boundedness, CompactnessProbe,
    CompactnessVerdict, JcQuantities, ModelBoundedness,
};
pub use norm::{norm_lower_bound, spread_points, NormEstimate};
pub use report::{CriterionReport, DivergenceRule, Verdict, DEFAULT_CAP};
