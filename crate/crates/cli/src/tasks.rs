//! Dispatch of configured tasks onto the core criteria.

use num_complex::Complex64;
use oplab_core::criteria::{
    classify_symbol, compactness_probe_db, compactness_probe_model, db_necessary, db_sufficient, jc_quantities,
    model_boundedness, norm_lower_bound, norm_upper_bound_affine, regularity_check, spread_points,
};
use oplab_core::funclib::{exponential_type, validate_hb, GrowthLadder, HermiteBiehlerFn, InnerFn};
use oplab_core::numerics::sector_points;
use oplab_core::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Setup, Task};

fn need_e(s: &Setup) -> Result<&HermiteBiehlerFn> {
    s.e.as_ref().ok_or_else(|| Error::Precondition("task needs space.E".into()))
}

fn need_chi(s: &Setup) -> Result<&InnerFn> {
    s.chi.as_ref().ok_or_else(|| Error::Precondition("task needs space.chi".into()))
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(format!("report serialisation: {e}")))
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Run one task. Errors are returned, never panicked.
pub fn run_task(task: Task, s: &Setup) -> Result<Value> {
    let o = &s.options;
    match task {
        Task::ValidateHb => {
            let v = validate_hb(need_e(s)?, &sector_points(&s.grid))?;
            Ok(json!({"worst_ratio": v.worst_ratio, "witness": pair(v.witness), "pass": v.pass}))
        }
        Task::ExponentialType => to_value(&exponential_type(need_e(s)?, &GrowthLadder::default())?),
        Task::JcQuantities => to_value(&jc_quantities(&s.phi, &s.grid)?),
        Task::ModelBoundedness => to_value(&model_boundedness(need_chi(s)?, &s.phi, &s.grid, &s.rule)?),
        Task::DbSufficient => to_value(&db_sufficient(need_e(s)?, &s.phi, &s.grid, o.real_samples, &s.rule)?),
        Task::DbNecessary => to_value(&db_necessary(need_e(s)?, &s.phi, &s.grid, &s.rule)?),
        Task::NormLowerBound => {
            let pts = spread_points(o.points, o.points_y_min, o.points_y_max, o.points_kappa)?;
            to_value(&norm_lower_bound(&s.kind, &s.phi, &pts)?)
        }
        Task::NormUpperBound => {
            let (a, b) = s
                .phi
                .as_affine()
                .ok_or_else(|| Error::Precondition("the upper bound needs an affine symbol".into()))?;
            let bound = norm_upper_bound_affine(need_e(s)?, a, b, o.real_samples, &GrowthLadder::default())?;
            Ok(json!({ "upper_bound": bound }))
        }
        Task::CompactnessModel => to_value(&compactness_probe_model(need_chi(s)?, &s.phi, &s.grid, o.compactness_d)?),
        Task::CompactnessDb => {
            let [lo, hi] = o.root_interval;
            to_value(&compactness_probe_db(need_e(s)?, &s.phi, (lo, hi), o.root_resolution, o.compactness_d)?)
        }
        Task::Regularity => to_value(&regularity_check(need_e(s)?, &s.quadrature)?),
        Task::ClassifySymbol => {
            let coeffs: Vec<Complex64> = match &o.polynomial {
                Some(p) => p.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
                None => {
                    let (a, b) = s.phi.as_affine().ok_or_else(|| {
                        Error::Precondition("classify_symbol needs options.polynomial or an affine symbol".into())
                    })?;
                    vec![b, Complex64::new(a, 0.0)]
                }
            };
            to_value(&classify_symbol(&coeffs, need_e(s)?)?)
        }
    }
}

/// Stable snake_case name of a core error variant.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Range { .. } => "range",
        Error::Domain(_) => "domain",
        Error::Argument(_) => "argument",
        Error::NonFinite { .. } => "non_finite",
        Error::Undefined(_) => "undefined",
        Error::NotHermitian { .. } => "not_hermitian",
        Error::Conditioning { .. } => "conditioning",
        Error::SelfMap(_) => "self_map",
        Error::Precondition(_) => "precondition",
        Error::FormulaInconsistency { .. } => "formula_inconsistency",
        Error::Internal(_) => "internal",
    }
}

/// True if any `"verdict": "violated"` occurs in the value, or a boundedness
/// verdict came back negative.
pub fn has_violation(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.iter().any(|(k, x)| {
            (k == "verdict" && (x == "violated" || x == &Value::Bool(false)))
                || (k == "combined_verdict" && x == "unbounded")
                || has_violation(x)
        }),
        Value::Array(a) => a.iter().any(has_violation),
        _ => false,
    }
}
