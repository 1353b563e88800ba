use num_complex::Complex64;
use serde::Serialize;

use crate::funclib::SymbolMap;
use crate::kernels::{check_distinct, ln_kernel_norm_sq, scaled_gram, KernelKind};
use crate::numerics::gen_eig_max_detailed;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub lower_bound: f64,
    pub upper_bound: Option<f64>,
    pub points_used: usize,
    /// Relative gain from half of the points to all of them is below `1e-3`.
    pub converged: bool,
    /// Lower bound from the even-indexed half of the points.
    pub half_bound: f64,
    /// Diagonal regularisation the Cholesky step needed, relative to `trace/n`.
    pub jitter: f64,
}

/// `n` deterministic points in the sector `|x| <= κ y`, heights log-spaced
/// over `[y_lo, y_hi]`, real parts spread by a golden-ratio sequence.
pub fn spread_points(n: usize, y_lo: f64, y_hi: f64, kappa: f64) -> Result<Vec<Complex64>> {
    if n < 2 || !(y_lo > 0.0 && y_hi > y_lo) || !(kappa >= 0.0) {
        return Err(Error::Argument(format!("bad spread: n = {n}, heights [{y_lo}, {y_hi}], kappa = {kappa}")));
    }
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    Ok((0..n)
        .map(|k| {
            let y = y_lo * (y_hi / y_lo).powf(k as f64 / (n - 1) as f64);
            let s = 2.0 * ((k as f64 * golden).fract()) - 1.0;
            Complex64::new(kappa * y * s, y)
        })
        .collect())
}

/// `sqrt` of the largest `λ` with `M c = λ G c`, both Grams scaled by the
/// same diagonal congruence `diag(G_ii^{-1/2})`.
fn restricted_norm(kind: &KernelKind, images: &[Complex64], points: &[Complex64]) -> Result<(f64, f64)> {
    let (source, target) = match kind {
        KernelKind::Model(_) => (kind.clone(), KernelKind::Hardy),
        _ => (kind.clone(), kind.clone()),
    };
    let shift = points.iter().map(|&z| ln_kernel_norm_sq(&target, z)).collect::<Result<Vec<_>>>()?;
    if shift.iter().any(|s| !s.is_finite()) {
        return Err(Error::Undefined("a target kernel vanishes at one of the points".into()));
    }
    let g = scaled_gram(&target, points, &shift)?;
    let m = scaled_gram(&source, images, &shift)?;
    let r = gen_eig_max_detailed(&m, &g, 0.0)?;
    Ok((r.value.max(0.0).sqrt(), r.jitter))
}

/// Lower bound for `‖C_φ‖` from the restriction of `C_φ*` to the span of
/// kernels at `points`.
///
/// For [`KernelKind::Model`] the operator is `H(χ) → H²`: `G` is the Hardy
/// Gram at the points and `M` the model Gram at their images. For the other
/// kinds the operator is an endomorphism and both Grams use the same kernel.
pub fn norm_lower_bound(kind: &KernelKind, phi: &SymbolMap, points: &[Complex64]) -> Result<NormEstimate> {
    if points.len() < 2 {
        return Err(Error::Argument("need at least two points".into()));
    }
    check_distinct(points)?;
    let needs_upper = !matches!(kind, KernelKind::DeBranges(_));
    if let KernelKind::DeBranges(_) = kind {
        if !phi.is_entire() {
            return Err(Error::Precondition("composition on H(E) needs an entire symbol".into()));
        }
    }
    let images = points
        .iter()
        .map(|&z| if needs_upper { phi.eval_upper(z) } else { phi.eval(z) })
        .collect::<Result<Vec<_>>>()?;
    let images_distinct = check_distinct(&images).is_ok();

    let (lower, jitter) = restricted_norm(kind, &images, points)?;
    let half_idx: Vec<usize> = (0..points.len()).step_by(2).collect();
    let half_pts: Vec<Complex64> = half_idx.iter().map(|&i| points[i]).collect();
    let half_img: Vec<Complex64> = half_idx.iter().map(|&i| images[i]).collect();
    let (half, _) = restricted_norm(kind, &half_img, &half_pts)?;
    let gain = (lower - half) / lower;
    let converged = images_distinct && lower > 0.0 && (-1e-9..1e-3).contains(&gain);
    Ok(NormEstimate { lower_bound: lower, upper_bound: None, points_used: points.len(), converged, half_bound: half, jitter })
}
