use num_complex::Complex64;

use super::{ensure_finite, exp_checked, Analytic, ComplexPoint, HermiteBiehlerFn};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Inner function on the upper half-plane.
#[derive(Debug, Clone, PartialEq)]
pub enum InnerFn {
    /// `c · Π (z - a_k)/(z - ā_k) · exp(i α z)`, finitely many zeros.
    Parametric { alpha_exp: f64, blaschke_zeros: Vec<Complex64>, unimodular: Complex64 },
    /// `E#/E` for a Hermite–Biehler `E`.
    Quotient(HermiteBiehlerFn),
}

impl InnerFn {
    pub fn parametric(alpha_exp: f64, blaschke_zeros: Vec<Complex64>, unimodular: Complex64) -> Result<Self> {
        if !(alpha_exp >= 0.0) || !alpha_exp.is_finite() {
            return Err(Error::Argument(format!("exponent must be finite and >= 0, got {alpha_exp}")));
        }
        if let Some(a) = blaschke_zeros.iter().find(|a| !(a.im > 0.0) || !a.is_finite()) {
            return Err(Error::Argument(format!("Blaschke zero {a} is not in the upper half-plane")));
        }
        if (unimodular.norm() - 1.0).abs() > 1e-14 {
            return Err(Error::Argument(format!("constant {unimodular} is not unimodular")));
        }
        Ok(InnerFn::Parametric { alpha_exp, blaschke_zeros, unimodular })
    }

    /// `exp(i α z)`.
    pub fn singular_exp(alpha_exp: f64) -> Result<Self> {
        Self::parametric(alpha_exp, vec![], Complex64::new(1.0, 0.0))
    }

    /// Complex logarithm of `χ(z)`, `None` at zeros.
    pub fn ln_value(&self, z: ComplexPoint) -> Result<Option<Complex64>> {
        ensure_finite(z)?;
        match self {
            InnerFn::Parametric { alpha_exp, blaschke_zeros, unimodular } => {
                let mut acc = unimodular.ln() + I * *alpha_exp * z;
                for a in blaschke_zeros {
                    let den = z - a.conj();
                    if den == Complex64::new(0.0, 0.0) {
                        return Err(Error::Domain(format!("{z} is a pole of the Blaschke factor")));
                    }
                    let num = z - a;
                    if num == Complex64::new(0.0, 0.0) {
                        return Ok(None);
                    }
                    acc += num.ln() - den.ln();
                }
                Ok(Some(acc))
            }
            InnerFn::Quotient(e) => {
                let den = e
                    .ln_value(z)?
                    .ok_or_else(|| Error::Domain(format!("E vanishes at {z}, quotient undefined")))?;
                Ok(e.ln_value(z.conj())?.map(|num| num.conj() - den))
            }
        }
    }

    pub fn eval(&self, z: ComplexPoint) -> Result<Complex64> {
        match self.ln_value(z)? {
            None => Ok(Complex64::new(0.0, 0.0)),
            Some(l) => exp_checked(l, z),
        }
    }

    pub fn ln_abs(&self, z: ComplexPoint) -> Result<f64> {
        Ok(self.ln_value(z)?.map_or(f64::NEG_INFINITY, |l| l.re))
    }

    /// `1 - |χ(z)|²`, accurate when `|χ|` is tiny or close to 1.
    pub fn one_minus_mod_sq(&self, z: ComplexPoint) -> Result<f64> {
        let l = self.ln_abs(z)?;
        Ok(-(2.0 * l).exp_m1())
    }
}

impl Analytic for InnerFn {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        InnerFn::eval(self, z)
    }
    fn ln_abs(&self, z: Complex64) -> Result<f64> {
        InnerFn::ln_abs(self, z)
    }
}

/// `χ = E#/E`.
pub fn inner_from_hb(e: &HermiteBiehlerFn) -> InnerFn {
    InnerFn::Quotient(e.clone())
}
