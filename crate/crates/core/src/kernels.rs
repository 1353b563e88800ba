//! Reproducing kernels of `H²(ℂ₊)`, the model spaces `H(χ)` and de Branges
//! spaces `H(E)`, with Gram matrix assembly.
//!
//! Kernels are written `K(z, w) = K_w(z)`, so a Gram matrix has entries
//! `G[i][j] = K(z_i, z_j)` and `‖Σ c_j K_{z_j}‖² = c^H G c`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::funclib::{ensure_finite, Analytic, HermiteBiehlerFn, InnerFn, SymbolMap, LN_MAX};
use crate::numerics::{herm_eig, psd_check, CMatrix, EigenResult, PsdVerdict};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this `|z - w̄|` the de Branges kernel switches to its diagonal limit.
pub const DIAGONAL_RADIUS: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum KernelKind {
    Hardy,
    Model(InnerFn),
    DeBranges(HermiteBiehlerFn),
}

impl KernelKind {
    pub fn name(&self) -> &'static str {
        match self {
            KernelKind::Hardy => "hardy",
            KernelKind::Model(_) => "model",
            KernelKind::DeBranges(_) => "debranges",
        }
    }
}

/// A kernel value held as `mantissa · exp(ln_scale)` so that de Branges
/// kernels stay representable far up the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub ln_scale: f64,
    pub mantissa: Complex64,
}

impl Scaled {
    fn plain(v: Complex64) -> Self {
        Scaled { ln_scale: 0.0, mantissa: v }
    }

    pub fn value(&self) -> Result<Complex64> {
        if self.mantissa == Complex64::new(0.0, 0.0) {
            return Ok(self.mantissa);
        }
        let ln = self.ln_scale + self.mantissa.norm().ln();
        if ln > LN_MAX {
            return Err(Error::Range { modulus: ln.exp() });
        }
        Ok(self.mantissa * self.ln_scale.exp())
    }

    /// `ln |value|`.
    pub fn ln_abs(&self) -> f64 {
        self.ln_scale + self.mantissa.norm().ln()
    }

    /// `value · exp(-shift)`, computed without forming `value`.
    pub fn shifted(&self, shift: f64) -> Complex64 {
        self.mantissa * (self.ln_scale - shift).exp()
    }
}

/// `e^u - 1` without cancellation for small `u`.
fn exp_m1(u: Complex64) -> Complex64 {
    let half = (0.5 * u.im).sin();
    Complex64::new(u.re.exp_m1() * u.im.cos() - 2.0 * half * half, u.re.exp() * u.im.sin())
}

fn upper(z: Complex64) -> Result<()> {
    ensure_finite(z)?;
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("{z} is not in the upper half-plane")));
    }
    Ok(())
}

fn rho(z: Complex64, w: Complex64) -> Result<Complex64> {
    let gap = z - w.conj();
    if gap == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain(format!("kernel singular at z = conj(w) = {z}")));
    }
    Ok(-2.0 * PI * I * gap)
}

/// `1 / (-2πi (z - w̄))`.
pub fn hardy_kernel(z: Complex64, w: Complex64) -> Result<Complex64> {
    upper(z)?;
    upper(w)?;
    Ok(rho(z, w)?.inv())
}

/// `(1 - conj χ(w) · χ(z)) / (-2πi (z - w̄))`.
pub fn model_kernel(chi: &InnerFn, z: Complex64, w: Complex64) -> Result<Complex64> {
    upper(z)?;
    upper(w)?;
    let den = rho(z, w)?;
    let num = if z == w {
        Complex64::new(chi.one_minus_mod_sq(z)?, 0.0)
    } else {
        match (chi.ln_value(z)?, chi.ln_value(w)?) {
            (Some(a), Some(b)) => -exp_m1(a + b.conj()),
            _ => Complex64::new(1.0, 0.0),
        }
    };
    Ok(num / den)
}

/// de Branges kernel in scaled form.
pub fn db_kernel_scaled(e: &HermiteBiehlerFn, z: Complex64, w: Complex64) -> Result<Scaled> {
    ensure_finite(z)?;
    ensure_finite(w)?;
    let wb = w.conj();
    let gap = z - wb;
    let l_wb = e.ln_value(wb)?;
    let l_w = e.ln_value(w)?;

    if gap.norm() < DIAGONAL_RADIUS {
        // (E'(w̄) conj E(w) - conj E'(w) E(w̄)) / (-2πi)
        if let (Some(a), Some(b), Some(da), Some(db)) = (l_wb, l_w, e.log_derivative(wb)?, e.log_derivative(w)?) {
            let s = a + b.conj();
            let mant = Complex64::from_polar(1.0, s.im) * (da - db.conj()) / (-2.0 * PI * I);
            return Ok(Scaled { ln_scale: s.re, mantissa: mant });
        }
        let num = e.derivative(wb)? * e.eval(w)?.conj() - e.derivative(w)?.conj() * e.eval(wb)?;
        return Ok(Scaled::plain(num / (-2.0 * PI * I)));
    }

    let den = -2.0 * PI * I * gap;
    let l_z = e.ln_value(z)?;
    let l_zb = e.ln_value(z.conj())?;
    if let (Some(lz), Some(lw), Some(lzb), Some(lwb)) = (l_z, l_w, l_zb, l_wb) {
        // E(z) conj E(w) - E#(z) conj E#(w) = e^{s1} - e^{s2}
        let s1 = lz + lw.conj();
        let s2 = lzb.conj() + lwb;
        let (hi, lo, sign) = if s1.re >= s2.re { (s1, s2, 1.0) } else { (s2, s1, -1.0) };
        let num = -sign * Complex64::from_polar(1.0, hi.im) * exp_m1(lo - hi);
        return Ok(Scaled { ln_scale: hi.re, mantissa: num / den });
    }
    let num = e.eval(z)? * e.eval(w)?.conj() - e.eval_star(z)? * e.eval_star(w)?.conj();
    Ok(Scaled::plain(num / den))
}

/// `(E(z) conj E(w) - E#(z) conj E#(w)) / (-2πi (z - w̄))`, with the
/// L'Hôpital limit when `|z - w̄| < 1e-10`.
pub fn db_kernel(e: &HermiteBiehlerFn, z: Complex64, w: Complex64) -> Result<Complex64> {
    db_kernel_scaled(e, z, w)?.value()
}

pub fn kernel_scaled(kind: &KernelKind, z: Complex64, w: Complex64) -> Result<Scaled> {
    match kind {
        KernelKind::Hardy => hardy_kernel(z, w).map(Scaled::plain),
        KernelKind::Model(chi) => model_kernel(chi, z, w).map(Scaled::plain),
        KernelKind::DeBranges(e) => db_kernel_scaled(e, z, w),
    }
}

pub fn kernel(kind: &KernelKind, z: Complex64, w: Complex64) -> Result<Complex64> {
    kernel_scaled(kind, z, w)?.value()
}

fn diagonal_scaled(kind: &KernelKind, z: Complex64) -> Result<Scaled> {
    let k = kernel_scaled(kind, z, z)?;
    let m = k.mantissa;
    if m.im.abs() > 1e-10 * m.norm() + 1e-300 {
        return Err(Error::Internal(format!("kernel diagonal at {z} has imaginary part {}", m.im)));
    }
    if m.re < -1e-10 * m.norm() {
        return Err(Error::Internal(format!("kernel diagonal at {z} is negative ({})", m.re)));
    }
    Ok(Scaled { ln_scale: k.ln_scale, mantissa: Complex64::new(m.re.max(0.0), 0.0) })
}

/// `K(z, z) = ‖K_z‖²`.
pub fn kernel_norm_sq(kind: &KernelKind, z: Complex64) -> Result<f64> {
    Ok(diagonal_scaled(kind, z)?.value()?.re)
}

/// `ln K(z, z)`; `-inf` for a vanishing kernel.
pub fn ln_kernel_norm_sq(kind: &KernelKind, z: Complex64) -> Result<f64> {
    Ok(diagonal_scaled(kind, z)?.ln_abs())
}

/// Gram matrix over a point set.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    pub points: Vec<Complex64>,
    pub entries: CMatrix,
}

impl KernelMatrix {
    pub fn eig(&self) -> Result<EigenResult> {
        herm_eig(&self.entries)
    }

    pub fn psd_check(&self, tol_scale: f64) -> Result<PsdVerdict> {
        psd_check(&self.entries, tol_scale)
    }
}

pub(crate) fn check_distinct(points: &[Complex64]) -> Result<()> {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let tol = 1e-12 * (1.0 + points[i].norm().max(points[j].norm()));
            if (points[i] - points[j]).norm() <= tol {
                return Err(Error::Argument(format!(
                    "points {i} and {j} coincide ({} and {})",
                    points[i], points[j]
                )));
            }
        }
    }
    Ok(())
}

fn assemble(points: &[Complex64], k: impl Fn(Complex64, Complex64) -> Result<Complex64>) -> Result<CMatrix> {
    let n = points.len();
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = k(points[i], points[j])?;
        }
    }
    Ok(m.hermitized())
}

pub fn gram(kind: &KernelKind, points: &[Complex64]) -> Result<KernelMatrix> {
    if points.is_empty() {
        return Err(Error::Argument("no points".into()));
    }
    check_distinct(points)?;
    let entries = assemble(points, |z, w| kernel(kind, z, w))?;
    Ok(KernelMatrix { points: points.to_vec(), entries })
}

/// Gram matrix congruence-scaled by `D = diag(exp(-shift_i / 2))`:
/// entry `(i, j)` is `K(z_i, z_j) · exp(-(shift_i + shift_j)/2)`.
pub(crate) fn scaled_gram(kind: &KernelKind, points: &[Complex64], shift: &[f64]) -> Result<CMatrix> {
    let n = points.len();
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let k = kernel_scaled(kind, points[i], points[j])?;
            let v = k.shifted(0.5 * (shift[i] + shift[j]));
            if !v.is_finite() {
                return Err(Error::Range { modulus: points[i].norm().max(points[j].norm()) });
            }
            m[(i, j)] = v;
        }
    }
    Ok(m.hermitized())
}

/// `λ K^{H²}(z, w) - K^{χ}(φ(z), φ(w))`.
pub fn positivity_kernel_l(chi: &InnerFn, phi: &SymbolMap, lambda: f64, z: Complex64, w: Complex64) -> Result<Complex64> {
    if !(lambda > 0.0) {
        return Err(Error::Argument(format!("lambda must be positive, got {lambda}")));
    }
    let h = hardy_kernel(z, w)?;
    let m = model_kernel(chi, phi.eval_upper(z)?, phi.eval_upper(w)?)?;
    Ok(lambda * h - m)
}

pub fn l_gram(chi: &InnerFn, phi: &SymbolMap, lambda: f64, points: &[Complex64]) -> Result<KernelMatrix> {
    if points.is_empty() {
        return Err(Error::Argument("no points".into()));
    }
    check_distinct(points)?;
    let entries = assemble(points, |z, w| positivity_kernel_l(chi, phi, lambda, z, w))?;
    Ok(KernelMatrix { points: points.to_vec(), entries })
}

/// The kernel function `z ↦ K_E(z, w)` as an element of `H(E)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSection {
    pub e: HermiteBiehlerFn,
    pub w: Complex64,
}

impl Analytic for KernelSection {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        db_kernel(&self.e, z, self.w)
    }
    fn ln_abs(&self, z: Complex64) -> Result<f64> {
        Ok(db_kernel_scaled(&self.e, z, self.w)?.ln_abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funclib::inner_from_hb;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pw() -> HermiteBiehlerFn {
        HermiteBiehlerFn::paley_wiener(1.0).unwrap()
    }

    fn rand_upper(rng: &mut impl Rng) -> Complex64 {
        c(rng.gen_range(-3.0..3.0), rng.gen_range(0.1..3.0))
    }

    #[test]
    fn hardy_examples() {
        assert!((hardy_kernel(I, I).unwrap() - 1.0 / (4.0 * PI)).norm() < 1e-15);
        assert!((hardy_kernel(2.0 * I, I).unwrap() - 1.0 / (6.0 * PI)).norm() < 1e-15);
        assert!(hardy_kernel(c(1.0, 0.0), I).is_err());
    }

    #[test]
    fn hermitian_symmetry_all_kinds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let kinds = [KernelKind::Hardy, KernelKind::Model(inner_from_hb(&pw())), KernelKind::DeBranges(pw())];
        for kind in &kinds {
            for _ in 0..10 {
                let (z, w) = (rand_upper(&mut rng), rand_upper(&mut rng));
                let a = kernel(kind, z, w).unwrap();
                let b = kernel(kind, w, z).unwrap().conj();
                assert!((a - b).norm() <= 1e-12 * a.norm(), "{}", kind.name());
            }
        }
    }

    #[test]
    fn model_examples() {
        let chi = inner_from_hb(&pw());
        let v = model_kernel(&chi, I, I).unwrap();
        assert!((v.re - (1.0 - (-4.0f64).exp()) / (4.0 * PI)).abs() < 1e-15);
        let flat = InnerFn::parametric(0.0, vec![], c(0.0, 1.0)).unwrap();
        assert!(model_kernel(&flat, I, c(1.0, 2.0)).unwrap().norm() < 1e-16);
    }

    #[test]
    fn model_diagonal_formula() {
        let chi = InnerFn::parametric(1.5, vec![c(0.5, 1.0)], c(0.0, 1.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let z = rand_upper(&mut rng);
            let expect = (1.0 - chi.eval(z).unwrap().norm_sqr()) / (4.0 * PI * z.im);
            let got = kernel_norm_sq(&KernelKind::Model(chi.clone()), z).unwrap();
            assert!((got - expect).abs() <= 1e-12 * expect);
        }
    }

    #[test]
    fn paley_wiener_sinc() {
        let e = pw();
        assert!((db_kernel(&e, c(0.0, 0.0), c(0.0, 0.0)).unwrap() - 1.0 / PI).norm() < 1e-15);
        assert!(db_kernel(&e, c(PI, 0.0), c(0.0, 0.0)).unwrap().norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let z = c(rng.gen_range(-4.0..4.0), rng.gen_range(-2.0..2.0));
            let w = c(rng.gen_range(-4.0..4.0), rng.gen_range(-2.0..2.0));
            let u = z - w.conj();
            let expect = u.sin() / (PI * u);
            let got = db_kernel(&e, z, w).unwrap();
            assert!((got - expect).norm() <= 1e-10 * expect.norm());
        }
    }

    #[test]
    fn real_diagonal_matches_derivative_form() {
        let e = HermiteBiehlerFn::product(vec![
            HermiteBiehlerFn::exponential(c(1.0, 0.0), c(0.7, 0.3)).unwrap(),
            HermiteBiehlerFn::polynomial(c(2.0, 0.0), vec![c(0.4, -1.0), c(-1.0, -0.5)]).unwrap(),
        ])
        .unwrap();
        for k in 0..10 {
            let t = c(-2.0 + 0.45 * k as f64, 0.0);
            let direct = -(e.derivative(t).unwrap() * e.eval(t).unwrap().conj()).im / PI;
            let got = kernel_norm_sq(&KernelKind::DeBranges(e.clone()), t).unwrap();
            assert!(got > 0.0);
            assert!((got - direct).abs() <= 1e-12 * direct);
        }
    }

    #[test]
    fn diagonal_limit_consistency() {
        let e = HermiteBiehlerFn::exponential(c(1.0, 0.5), c(1.0, 1.0)).unwrap();
        let w = c(0.3, 0.8);
        let limit = db_kernel(&e, w.conj(), w).unwrap();
        let near = db_kernel(&e, w.conj() + c(1e-6, 0.0), w).unwrap();
        assert!((limit - near).norm() <= 1e-5 * limit.norm());
    }

    #[test]
    fn unitary_correspondence() {
        let e = HermiteBiehlerFn::product(vec![
            HermiteBiehlerFn::paley_wiener(1.3).unwrap(),
            HermiteBiehlerFn::polynomial(c(1.0, 0.0), vec![c(0.0, -1.0)]).unwrap(),
        ])
        .unwrap();
        let chi = inner_from_hb(&e);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let (z, w) = (rand_upper(&mut rng), rand_upper(&mut rng));
            let lhs = db_kernel(&e, z, w).unwrap();
            let rhs = e.eval(z).unwrap() * model_kernel(&chi, z, w).unwrap() * e.eval(w).unwrap().conj();
            assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm());
        }
    }

    #[test]
    fn gram_examples() {
        let g = gram(&KernelKind::Hardy, &[I, 2.0 * I]).unwrap();
        let e = &g.entries;
        assert!((e[(0, 0)].re - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((e[(0, 1)].re - 1.0 / (6.0 * PI)).abs() < 1e-15);
        assert!((e[(1, 1)].re - 1.0 / (8.0 * PI)).abs() < 1e-15);
        let one = gram(&KernelKind::DeBranges(pw()), &[c(0.0, 0.0)]).unwrap();
        assert!((one.entries[(0, 0)].re - 1.0 / PI).abs() < 1e-15);
        assert!(matches!(gram(&KernelKind::Hardy, &[I, I]), Err(Error::Argument(_))));
    }

    #[test]
    fn grams_are_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let kinds = [KernelKind::Hardy, KernelKind::Model(inner_from_hb(&pw())), KernelKind::DeBranges(pw())];
        for kind in &kinds {
            let pts: Vec<_> = (0..12).map(|_| rand_upper(&mut rng)).collect();
            let v = gram(kind, &pts).unwrap().psd_check(1e-9).unwrap();
            assert!(v.pass, "{} min eig {}", kind.name(), v.min_eigenvalue);
        }
    }

    #[test]
    fn l_kernel_identity_diagonal() {
        let chi = inner_from_hb(&pw());
        let v = positivity_kernel_l(&chi, &SymbolMap::identity(), 1.0, I, I).unwrap();
        assert!((v.re - (-4.0f64).exp() / (4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn scaled_kernel_far_up_the_axis() {
        let e = pw();
        let z = c(0.0, 2000.0);
        assert!(db_kernel(&e, z, z).is_err());
        let ln = ln_kernel_norm_sq(&KernelKind::DeBranges(e), z).unwrap();
        let expect = 4000.0 - (4.0 * PI * 2000.0f64).ln();
        assert!((ln - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn section_ln_abs_matches_value() {
        let f = KernelSection { e: pw(), w: c(0.0, 0.0) };
        let z = c(0.3, 2.0);
        assert!((f.ln_abs(z).unwrap() - f.eval(z).unwrap().norm().ln()).abs() < 1e-13);
    }
}
