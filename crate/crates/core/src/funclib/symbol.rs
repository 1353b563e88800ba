use num_complex::Complex64;

use super::{ensure_finite, ComplexPoint};
use crate::{Error, Result};

/// Analytic self-map of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymbolMap {
    /// `a z + b`, `a > 0`, `Im b >= 0`.
    Affine { a: f64, b: Complex64 },
    /// `(a z + b)/(c z + d)` with real coefficients and `ad - bc > 0`.
    Moebius { a: f64, b: f64, c: f64, d: f64 },
    /// Principal square root. Not entire; only model-space criteria accept it.
    SqrtBranch,
}

impl SymbolMap {
    pub fn affine(a: f64, b: Complex64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::SelfMap(format!("affine map needs finite a > 0, got a = {a}")));
        }
        if b.im < 0.0 {
            return Err(Error::SelfMap(format!("affine map needs Im b >= 0, got b = {b}")));
        }
        Ok(SymbolMap::Affine { a, b })
    }

    pub fn identity() -> Self {
        SymbolMap::Affine { a: 1.0, b: Complex64::new(0.0, 0.0) }
    }

    pub fn moebius(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::SelfMap(format!("Moebius map needs ad - bc > 0, got {det}")));
        }
        Ok(SymbolMap::Moebius { a, b, c, d })
    }

    /// Polynomial symbols in the entire sense (affine, or Moebius with `c = 0`).
    pub fn is_entire(&self) -> bool {
        self.as_affine().is_some()
    }

    /// `(a, b)` when the map is `a z + b`.
    pub fn as_affine(&self) -> Option<(f64, Complex64)> {
        match *self {
            SymbolMap::Affine { a, b } => Some((a, b)),
            SymbolMap::Moebius { a, b, c, d } if c == 0.0 => Some((a / d, Complex64::new(b / d, 0.0))),
            _ => None,
        }
    }

    pub fn eval(&self, z: ComplexPoint) -> Result<Complex64> {
        ensure_finite(z)?;
        match *self {
            SymbolMap::Affine { a, b } => Ok(a * z + b),
            SymbolMap::Moebius { a, b, c, d } => {
                let den = c * z + d;
                if den == Complex64::new(0.0, 0.0) {
                    return Err(Error::Domain(format!("{z} is the pole of the Moebius map")));
                }
                Ok((a * z + b) / den)
            }
            SymbolMap::SqrtBranch => {
                if !(z.im > 0.0) {
                    return Err(Error::Domain(format!("square root branch needs Im z > 0, got {z}")));
                }
                Ok(z.sqrt())
            }
        }
    }

    /// Evaluate and insist the image lies in `ℂ₊`.
    pub fn eval_upper(&self, z: ComplexPoint) -> Result<Complex64> {
        let w = self.eval(z)?;
        if !(w.im > 0.0) {
            return Err(Error::SelfMap(format!("Im φ({z}) = {} is not positive", w.im)));
        }
        Ok(w)
    }
}
