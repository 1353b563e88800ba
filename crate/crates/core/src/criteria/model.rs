use num_complex::Complex64;
use serde::Serialize;

use super::report::{CriterionReport, DivergenceRule, Verdict};
use crate::funclib::{InnerFn, SymbolMap};
use crate::numerics::{sector_points, SectorGrid};
use crate::{Error, Result};

/// Julia–Carathéodory data of a symbol at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JcQuantities {
    /// `sup Im z / Im φ(z)` over the grid.
    pub sup_ratio: f64,
    #[serde(with = "crate::serde_c64")]
    pub arg_sup: Complex64,
    /// Same supremum restricted to the top decade of heights.
    pub limsup_ratio: f64,
    /// `lim |z / φ(z)|` along `iy`; `+inf` when it visibly diverges.
    pub angular_derivative: f64,
}

fn ratio_samples(phi: &SymbolMap, points: &[Complex64]) -> Result<Vec<(Complex64, f64)>> {
    points.iter().map(|&z| Ok((z, z.im / phi.eval_upper(z)?.im))).collect()
}

/// Limit of `|iy / φ(iy)|` from the heights `y_max`, `y_max/10`, `y_max/100`.
///
/// A log-log slope above `0.1` over the last two decades is reported as
/// `+inf`; otherwise the values are extrapolated quadratically in `1/y`.
pub fn angular_derivative(phi: &SymbolMap, y_max: f64) -> Result<f64> {
    let hs = [y_max / 100.0, y_max / 10.0, y_max];
    let mut v = [0.0; 3];
    for (k, &y) in hs.iter().enumerate() {
        let z = Complex64::new(0.0, y);
        phi.eval_upper(z)?;
        v[k] = (z / phi.eval(z)?).norm();
    }
    let slope = (v[2] / v[0]).log10() / 2.0;
    if slope > 0.1 {
        return Ok(f64::INFINITY);
    }
    let h: Vec<f64> = hs.iter().map(|y| 1.0 / y).collect();
    // Lagrange interpolation at h = 0
    let mut limit = 0.0;
    for i in 0..3 {
        let mut w = 1.0;
        for j in 0..3 {
            if i != j {
                w *= h[j] / (h[j] - h[i]);
            }
        }
        limit += w * v[i];
    }
    Ok(limit)
}

pub fn jc_quantities(phi: &SymbolMap, grid: &SectorGrid) -> Result<JcQuantities> {
    grid.validate()?;
    let pts = sector_points(grid);
    let samples = ratio_samples(phi, &pts)?;
    let report = CriterionReport::bounded_sup("Q1", &samples, &DivergenceRule::default());
    Ok(JcQuantities {
        sup_ratio: report.sup_estimate,
        arg_sup: report.arg_sup,
        limsup_ratio: report.limsup_estimate,
        angular_derivative: angular_derivative(phi, grid.y_max)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelBoundedness {
    /// `Q₂ = (Im z / Im φ(z)) (1 - |χ(φ(z))|²)`.
    pub necessary: CriterionReport,
    /// `Q₁ = Im z / Im φ(z)`.
    pub sufficient: CriterionReport,
    pub sup_chi_phi: f64,
    /// `bounded`, `unbounded`, `bounded-iff-Q1` or `indeterminate`.
    pub combined_verdict: String,
}

pub(crate) fn q2_samples(chi: &InnerFn, phi: &SymbolMap, points: &[Complex64]) -> Result<Vec<(Complex64, f64)>> {
    points
        .iter()
        .map(|&z| {
            let w = phi.eval_upper(z)?;
            Ok((z, z.im / w.im * chi.one_minus_mod_sq(w)?))
        })
        .collect()
}

/// Boundedness of `C_φ : H(χ) → H²`.
pub fn model_boundedness(chi: &InnerFn, phi: &SymbolMap, grid: &SectorGrid, rule: &DivergenceRule) -> Result<ModelBoundedness> {
    grid.validate()?;
    let pts = sector_points(grid);
    let q1 = ratio_samples(phi, &pts)?;
    let q2 = q2_samples(chi, phi, &pts)?;
    let mut sup_chi_phi: f64 = 0.0;
    for &z in &pts {
        sup_chi_phi = sup_chi_phi.max(chi.ln_abs(phi.eval_upper(z)?)?.exp());
    }
    let necessary = CriterionReport::bounded_sup("Q2", &q2, rule);
    let sufficient = CriterionReport::bounded_sup("Q1", &q1, rule);
    let combined_verdict = if sufficient.verdict == Verdict::Satisfied {
        "bounded"
    } else if necessary.verdict == Verdict::Violated {
        "unbounded"
    } else if !pts.is_empty() && sup_chi_phi < 1.0 - 1e-6 {
        "bounded-iff-Q1"
    } else {
        "indeterminate"
    };
    Ok(ModelBoundedness { necessary, sufficient, sup_chi_phi, combined_verdict: combined_verdict.to_string() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactnessVerdict {
    NotCompact,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessProbe {
    pub sequence_values: Vec<f64>,
    pub limsup_estimate: f64,
    pub lower_constant_d: f64,
    pub verdict: CompactnessVerdict,
    /// Points (or real nodes `t_n`) behind `sequence_values`.
    #[serde(with = "crate::serde_c64::vec")]
    pub nodes: Vec<Complex64>,
    /// Second evaluation of the sequence, where one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternate_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_discrepancy: Option<f64>,
}

impl CompactnessProbe {
    pub(crate) fn from_values(nodes: Vec<Complex64>, values: Vec<f64>, limsup: f64, d: f64) -> Self {
        let verdict = if d > 0.0 && limsup >= d { CompactnessVerdict::NotCompact } else { CompactnessVerdict::Inconclusive };
        CompactnessProbe {
            sequence_values: values,
            limsup_estimate: limsup,
            lower_constant_d: d,
            verdict,
            nodes,
            alternate_values: None,
            max_discrepancy: None,
        }
    }
}

/// Non-compactness probe for `C_φ : H(χ) → H²` along the top decade of the grid.
pub fn compactness_probe_model(chi: &InnerFn, phi: &SymbolMap, grid: &SectorGrid, d: f64) -> Result<CompactnessProbe> {
    let bounded = model_boundedness(chi, phi, grid, &DivergenceRule::default())?;
    if bounded.combined_verdict != "bounded" {
        return Err(Error::Precondition(format!(
            "probe needs a bounded operator, boundedness verdict is {}",
            bounded.combined_verdict
        )));
    }
    let tail: Vec<Complex64> = sector_points(grid).into_iter().filter(|z| z.im >= grid.y_max / 10.0).collect();
    let samples = q2_samples(chi, phi, &tail)?;
    let values: Vec<f64> = samples.iter().map(|(_, v)| *v).collect();
    let limsup = values.iter().copied().fold(0.0, f64::max);
    Ok(CompactnessProbe::from_values(tail, values, limsup, d))
}
