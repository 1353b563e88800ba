use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::model::CompactnessProbe;
use super::report::{CriterionReport, DivergenceRule, Verdict};
use crate::funclib::{
    companion_a, exponential_type, inner_from_hb, mean_type_by, Analytic, GrowthLadder, HermiteBiehlerFn, Star,
    SymbolMap,
};
use crate::kernels::{ln_kernel_norm_sq, KernelKind};
use crate::numerics::{integrate_line, real_roots, sector_points, QuadratureSpec, SectorGrid};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `Λ = {z : |E(φ(z))| >= 1e-300}`.
const LAMBDA_LN_FLOOR: f64 = -690.775_527_898_213_7;

/// `n` nodes `tan θ_k` with `θ_k` the midpoints of a uniform split of `(-π/2, π/2)`.
pub fn real_line_samples(n: usize) -> Vec<f64> {
    (0..n).map(|k| (-FRAC_PI_2 + PI * (k as f64 + 0.5) / n as f64).tan()).collect()
}

fn require_entire(phi: &SymbolMap, what: &str) -> Result<(f64, Complex64)> {
    phi.as_affine().ok_or_else(|| {
        Error::Precondition(format!("{what} needs an entire symbol (affine); {phi:?} is not entire"))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DbSufficient {
    /// `sup |E(φ(z)) / E(z)|` over the grid and the real samples.
    pub ratio_sup: f64,
    pub ratio_min: f64,
    #[serde(with = "crate::serde_c64")]
    pub ratio_arg_sup: Complex64,
    pub q1_sup: f64,
    pub ratio: CriterionReport,
    pub q1: CriterionReport,
    /// Both suprema look finite.
    pub verdict: bool,
}

/// Sufficient condition for `C_φ` bounded on `H(E)`: `E∘φ/E ∈ H∞` and `Q₁` bounded.
pub fn db_sufficient(
    e: &HermiteBiehlerFn,
    phi: &SymbolMap,
    grid: &SectorGrid,
    real_samples: usize,
    rule: &DivergenceRule,
) -> Result<DbSufficient> {
    require_entire(phi, "the H∞ ratio test")?;
    grid.validate()?;
    let pts = sector_points(grid);
    let ratio_at = |z: Complex64| -> Result<f64> { Ok((e.ln_abs(phi.eval(z)?)? - e.ln_abs(z)?).exp()) };

    let mut grid_ratio = Vec::with_capacity(pts.len());
    let mut q1 = Vec::with_capacity(pts.len());
    for &z in &pts {
        grid_ratio.push((z, ratio_at(z)?));
        q1.push((z, z.im / phi.eval_upper(z)?.im));
    }
    let mut all = grid_ratio.clone();
    for t in real_line_samples(real_samples) {
        let z = Complex64::new(t, 0.0);
        all.push((z, ratio_at(z)?));
    }
    if all.is_empty() {
        return Err(Error::Argument("no samples: empty grid and no real samples".into()));
    }
    let (mut arg, mut sup, mut min) = (all[0].0, all[0].1, all[0].1);
    for &(z, v) in &all {
        if v > sup {
            sup = v;
            arg = z;
        }
        min = min.min(v);
    }
    let ratio = CriterionReport::bounded_sup("E(phi)/E", &grid_ratio, rule);
    let q1 = CriterionReport::bounded_sup("Q1", &q1, rule);
    let verdict = sup < rule.cap && !ratio.divergent && q1.verdict == Verdict::Satisfied;
    Ok(DbSufficient { ratio_sup: sup, ratio_min: min, ratio_arg_sup: arg, q1_sup: q1.sup_estimate, ratio, q1, verdict })
}

/// Necessary condition: `Q₃ = (Im z/Im φ) |E(φ)/E|² (1 - |χ(φ)|²)/(1 - |χ|²)`
/// bounded on `Λ`, `χ = E#/E`.
pub fn db_necessary(e: &HermiteBiehlerFn, phi: &SymbolMap, grid: &SectorGrid, rule: &DivergenceRule) -> Result<CriterionReport> {
    grid.validate()?;
    let chi = inner_from_hb(e);
    let mut samples = Vec::new();
    for z in sector_points(grid) {
        let w = phi.eval_upper(z)?;
        let ln_ew = e.ln_abs(w)?;
        if ln_ew < LAMBDA_LN_FLOOR {
            continue;
        }
        let ln_q = (z.im / w.im).ln() + 2.0 * (ln_ew - e.ln_abs(z)?) + chi.one_minus_mod_sq(w)?.ln()
            - chi.one_minus_mod_sq(z)?.ln();
        samples.push((z, ln_q.exp()));
    }
    Ok(CriterionReport::bounded_sup("Q3", &samples, rule))
}

/// Non-compactness probe on `H(E)` at the real zeros `t_n` of `A = (E + E#)/2`.
///
/// Each `r_n = K(φ(t_n), φ(t_n)) / K(t_n, t_n)` is computed from the kernel
/// diagonal and again from the closed-form branch expressions in `E` and `E'`;
/// the two must agree to `1e-9` relative.
pub fn compactness_probe_db(
    e: &HermiteBiehlerFn,
    phi: &SymbolMap,
    interval: (f64, f64),
    resolution: f64,
    d: f64,
) -> Result<CompactnessProbe> {
    require_entire(phi, "the compactness probe")?;
    let a = companion_a(e);
    let roots = real_roots(|t| a.eval_real(t), interval.0, interval.1, resolution)?;
    if roots.len() < 5 {
        return Err(Error::Precondition(format!(
            "need at least 5 real zeros of A in [{}, {}], found {}",
            interval.0,
            interval.1,
            roots.len()
        )));
    }
    let kind = KernelKind::DeBranges(e.clone());
    let mut direct = Vec::with_capacity(roots.len());
    let mut branch = Vec::with_capacity(roots.len());
    let mut worst: f64 = 0.0;
    for &t in &roots {
        let tc = Complex64::new(t, 0.0);
        let w = phi.eval(tc)?;
        let r = (ln_kernel_norm_sq(&kind, w)? - ln_kernel_norm_sq(&kind, tc)?).exp();

        let den_t = e.eval(tc)? * e.derivative(tc)?.re;
        let b = if w.im > 1e-12 {
            let num = e.eval(w)?.norm_sqr() - e.eval(w.conj())?.norm_sqr();
            num / (-4.0 * I * w.im * den_t)
        } else {
            let ew = e.eval(w)?;
            -I * (e.derivative(w)? * ew.conj()).im / den_t
        };
        if b.im.abs() > 1e-9 * b.norm() || (b.re - r).abs() > 1e-9 * r.abs() {
            return Err(Error::FormulaInconsistency { direct: r, branch_re: b.re, branch_im: b.im });
        }
        worst = worst.max((b.re - r).abs() / r.abs());
        direct.push(r);
        branch.push(b.re);
    }
    let tail = &direct[direct.len() / 2..];
    let limsup = tail.iter().copied().fold(0.0, f64::max);
    let mut probe = CompactnessProbe::from_values(roots.iter().map(|t| Complex64::new(*t, 0.0)).collect(), direct, limsup, d);
    probe.alternate_values = Some(branch);
    probe.max_discrepancy = Some(worst);
    Ok(probe)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityReport {
    pub integral_value: f64,
    pub converged: bool,
    pub regular: bool,
}

/// `H(E)` is regular iff `∫ dt / (|E(t)|² 4π² (1 + t²))` is finite.
pub fn regularity_check(e: &HermiteBiehlerFn, spec: &QuadratureSpec) -> Result<RegularityReport> {
    let integrand = |t: f64| -> f64 {
        match e.ln_abs(Complex64::new(t, 0.0)) {
            Ok(l) => (-2.0 * l).exp() / (4.0 * PI * PI * (1.0 + t * t)),
            Err(_) => f64::INFINITY,
        }
    };
    match integrate_line(integrand, spec) {
        Ok(q) => Ok(RegularityReport {
            integral_value: q.value,
            converged: q.converged,
            regular: q.converged && q.value.is_finite(),
        }),
        Err(Error::NonFinite { .. }) => {
            Ok(RegularityReport { integral_value: f64::INFINITY, converged: false, regular: false })
        }
        Err(err) => Err(err),
    }
}

/// `(α/√a) e^{σ Im b}` with `α = sup_ℝ |E(at + b)/E(t)|` and `σ` the exponential type of `E`.
pub fn norm_upper_bound_affine(
    e: &HermiteBiehlerFn,
    a: f64,
    b: Complex64,
    real_samples: usize,
    ladder: &GrowthLadder,
) -> Result<f64> {
    if !(a > 0.0 && a <= 1.0) || b.im < 0.0 {
        return Err(Error::Argument(format!("need 0 < a <= 1 and Im b >= 0, got a = {a}, b = {b}")));
    }
    if real_samples == 0 {
        return Err(Error::Argument("need at least one real sample".into()));
    }
    let mut ln_alpha = f64::NEG_INFINITY;
    for t in real_line_samples(real_samples) {
        let tc = Complex64::new(t, 0.0);
        ln_alpha = ln_alpha.max(e.ln_abs(a * tc + b)? - e.ln_abs(tc)?);
    }
    let sigma = exponential_type(e, ladder)?.value;
    let bound = (ln_alpha + sigma * b.im).exp() / a.sqrt();
    if !bound.is_finite() {
        return Err(Error::Range { modulus: bound });
    }
    Ok(bound)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolClass {
    AffineAdmissible,
    NonaffineRejected,
    ConstantDegenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: SymbolClass,
    pub detail: String,
    #[serde(skip)]
    pub symbol: Option<SymbolMap>,
}

/// Classify a polynomial symbol `φ(z) = Σ c_k z^k` (coefficients in
/// ascending order) for composition on a regular `H(E)`.
pub fn classify_symbol(coeffs: &[Complex64], e: &HermiteBiehlerFn) -> Result<Classification> {
    let reg = regularity_check(e, &QuadratureSpec::default())?;
    if !reg.regular {
        return Err(Error::Precondition("classification needs a regular de Branges space".into()));
    }
    let degree = coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0));
    match degree {
        None | Some(0) => Ok(Classification {
            verdict: SymbolClass::ConstantDegenerate,
            detail: "constant symbol".into(),
            symbol: None,
        }),
        Some(1) => {
            let (b, a) = (coeffs[0], coeffs[1]);
            if a.im != 0.0 || !(a.re > 0.0) || b.im < 0.0 {
                return Err(Error::SelfMap(format!(
                    "{a} z + {b} needs a real positive slope and Im b >= 0"
                )));
            }
            let symbol = SymbolMap::affine(a.re, b)?;
            Ok(Classification {
                verdict: SymbolClass::AffineAdmissible,
                detail: format!("affine with a = {}, b = {b}; boundedness decided by the H-infinity ratio test", a.re),
                symbol: Some(symbol),
            })
        }
        Some(n) => Ok(Classification {
            verdict: SymbolClass::NonaffineRejected,
            detail: format!("degree {n} polynomial; only affine symbols can act boundedly on a regular space"),
            symbol: None,
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub mt_f_over_e: f64,
    pub mt_fstar_over_e: f64,
    pub l2_norm_sq: f64,
    pub converged: bool,
    pub member: bool,
}

fn mt_or_vanishing(r: Result<f64>) -> Result<f64> {
    match r {
        Err(Error::Undefined(_)) => Ok(f64::NEG_INFINITY),
        other => other,
    }
}

/// Membership of `f` in `H(E)`: `f/E`, `f#/E` of non-positive mean type and
/// `∫ |f/E|² < ∞`.
pub fn mt_membership_checks(
    e: &HermiteBiehlerFn,
    f: &dyn Analytic,
    ladder: &GrowthLadder,
    spec: &QuadratureSpec,
) -> Result<Membership> {
    let over_e = |g: &dyn Analytic| {
        mean_type_by(
            |y| {
                let z = Complex64::new(0.0, y);
                Ok(g.ln_abs(z)? - e.ln_abs(z)?)
            },
            ladder,
        )
    };
    let mt_f_over_e = mt_or_vanishing(over_e(f))?;
    let mt_fstar_over_e = mt_or_vanishing(over_e(&Star(f)))?;
    let integrand = |t: f64| -> f64 {
        let z = Complex64::new(t, 0.0);
        match (f.ln_abs(z), e.ln_abs(z)) {
            (Ok(lf), Ok(le)) => (2.0 * (lf - le)).exp(),
            _ => f64::NAN,
        }
    };
    let (l2_norm_sq, converged) = match integrate_line(integrand, spec) {
        Ok(q) => (q.value, q.converged),
        Err(Error::NonFinite { .. }) => (f64::INFINITY, false),
        Err(err) => return Err(err),
    };
    let member = mt_f_over_e <= 1e-3 && mt_fstar_over_e <= 1e-3 && converged;
    Ok(Membership { mt_f_over_e, mt_fstar_over_e, l2_norm_sq, converged, member })
}
