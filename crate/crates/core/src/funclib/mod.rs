//! Parametric analytic functions on the upper half-plane.
//!
//! Everything here is immutable after construction and `Send + Sync`, so
//! evaluators can be shared freely between worker threads.

mod growth;
mod hb;
mod inner;
mod symbol;

pub use growth::{exponential_type, mean_type, mean_type_by, ExponentialType, GrowthLadder};
pub use hb::{companion_a, validate_hb, CompanionA, HbValidation, HermiteBiehlerFn};
pub use inner::{inner_from_hb, InnerFn};
pub use symbol::SymbolMap;

use crate::{Error, Result};
use num_complex::Complex64;

/// A point of the complex plane. Evaluators reject non-finite components.
pub type ComplexPoint = Complex64;

/// `ln(f64::MAX)`; log-magnitudes above this overflow on exponentiation.
pub const LN_MAX: f64 = 709.782_712_893_384;

pub(crate) fn ensure_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite point {z}")))
    }
}

/// Exponentiate a complex logarithm, signalling overflow instead of returning `inf`.
pub(crate) fn exp_checked(ln: Complex64, z: Complex64) -> Result<Complex64> {
    if ln.re > LN_MAX {
        return Err(Error::Range { modulus: z.norm() });
    }
    Ok(ln.exp())
}

/// An analytic function that can be evaluated pointwise.
///
/// `ln_abs` and `derivative` have default implementations; families that can
/// do better (no overflow, exact derivative) override them.
pub trait Analytic: Send + Sync {
    fn eval(&self, z: Complex64) -> Result<Complex64>;

    /// `ln |f(z)|`, `-inf` where `f` vanishes.
    fn ln_abs(&self, z: Complex64) -> Result<f64> {
        let v = self.eval(z)?;
        let l = v.norm().ln();
        if l.is_nan() || l == f64::INFINITY {
            return Err(Error::Range { modulus: z.norm() });
        }
        Ok(l)
    }

    /// Exact derivative when the family knows it.
    fn derivative(&self, _z: Complex64) -> Option<Result<Complex64>> {
        None
    }
}

impl<T: Analytic + ?Sized> Analytic for &T {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        (**self).eval(z)
    }
    fn ln_abs(&self, z: Complex64) -> Result<f64> {
        (**self).ln_abs(z)
    }
    fn derivative(&self, z: Complex64) -> Option<Result<Complex64>> {
        (**self).derivative(z)
    }
}

type CFn = Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Closure-backed evaluator, optionally carrying an exact derivative.
pub struct Func {
    f: CFn,
    df: Option<CFn>,
}

impl Func {
    pub fn new(f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        Func { f: Box::new(f), df: None }
    }

    pub fn with_derivative(
        f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        df: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Func { f: Box::new(f), df: Some(Box::new(df)) }
    }
}

impl Analytic for Func {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        ensure_finite(z)?;
        Ok((self.f)(z))
    }

    fn derivative(&self, z: Complex64) -> Option<Result<Complex64>> {
        self.df.as_ref().map(|df| {
            ensure_finite(z)?;
            Ok(df(z))
        })
    }
}

/// The star conjugate `f#(z) = conj(f(conj z))`.
pub struct Star<F>(pub F);

impl<F: Analytic> Analytic for Star<F> {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.0.eval(z.conj())?.conj())
    }
    fn ln_abs(&self, z: Complex64) -> Result<f64> {
        self.0.ln_abs(z.conj())
    }
    fn derivative(&self, z: Complex64) -> Option<Result<Complex64>> {
        self.0.derivative(z.conj()).map(|r| r.map(|d| d.conj()))
    }
}

/// `f#(z) = conj(f(conj z))`.
pub fn eval_star(f: &dyn Analytic, z: ComplexPoint) -> Result<Complex64> {
    Ok(f.eval(z.conj())?.conj())
}

/// Derivative of `f` at `z`: exact when available, otherwise a five-point
/// central difference with step `1e-5 (1 + |z|)`.
pub fn derivative(f: &dyn Analytic, z: ComplexPoint) -> Result<Complex64> {
    if let Some(d) = f.derivative(z) {
        return d;
    }
    let h = 1e-5 * (1.0 + z.norm());
    let h = Complex64::new(h, 0.0);
    let fp1 = f.eval(z + h)?;
    let fm1 = f.eval(z - h)?;
    let fp2 = f.eval(z + 2.0 * h)?;
    let fm2 = f.eval(z - 2.0 * h)?;
    Ok((8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h))
}

/// Value of the generalised backward shift `(R_{z0} f)(ξ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackwardShift {
    pub value: Complex64,
    /// The derivative branch was used.
    pub on_diagonal: bool,
    /// `ξ ≠ z0` but closer than `1e-9`, so the derivative was substituted.
    pub near_diagonal: bool,
}

pub fn backward_shift(f: &dyn Analytic, z0: ComplexPoint, xi: ComplexPoint) -> Result<BackwardShift> {
    ensure_finite(z0)?;
    ensure_finite(xi)?;
    let gap = (xi - z0).norm();
    if gap < 1e-9 {
        return Ok(BackwardShift {
            value: derivative(f, z0)?,
            on_diagonal: true,
            near_diagonal: gap > 0.0,
        });
    }
    Ok(BackwardShift {
        value: (f.eval(xi)? - f.eval(z0)?) / (xi - z0),
        on_diagonal: false,
        near_diagonal: false,
    })
}
