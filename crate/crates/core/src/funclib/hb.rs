use num_complex::Complex64;

use super::{ensure_finite, exp_checked, Analytic, ComplexPoint};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Entire function of Hermite–Biehler class, `|E(z̄)| < |E(z)|` on `ℂ₊`.
///
/// Values are carried internally as complex logarithms so that exponential
/// factors can be probed at heights far beyond `f64` range.
#[derive(Debug, Clone, PartialEq)]
pub enum HermiteBiehlerFn {
    /// `e0 · exp(-i d z)` with `Re d > 0`.
    Exponential { e0: Complex64, d: Complex64 },
    /// `leading · Π (z - r_k)` with every root in the open lower half-plane.
    Polynomial { leading: Complex64, roots: Vec<Complex64> },
    Product(Vec<HermiteBiehlerFn>),
}

impl HermiteBiehlerFn {
    pub fn exponential(e0: Complex64, d: Complex64) -> Result<Self> {
        if e0 == Complex64::new(0.0, 0.0) || !e0.is_finite() || !d.is_finite() {
            return Err(Error::Argument("exponential factor needs finite nonzero e0 and finite d".into()));
        }
        if d.re <= 0.0 {
            return Err(Error::Argument(format!("exponential rate needs Re(d) > 0, got {d}")));
        }
        Ok(HermiteBiehlerFn::Exponential { e0, d })
    }

    /// `exp(-i d z)` with real `d > 0`: the Paley–Wiener generator.
    pub fn paley_wiener(d: f64) -> Result<Self> {
        Self::exponential(Complex64::new(1.0, 0.0), Complex64::new(d, 0.0))
    }

    pub fn polynomial(leading: Complex64, roots: Vec<Complex64>) -> Result<Self> {
        if let Some(r) = roots.iter().find(|r| !(r.im < 0.0) || !r.is_finite()) {
            return Err(Error::Argument(format!("root {r} is not in the open lower half-plane")));
        }
        Self::polynomial_unchecked(leading, roots)
    }

    /// Skips the root-location check; `validate_hb` will flag violations.
    pub fn polynomial_unchecked(leading: Complex64, roots: Vec<Complex64>) -> Result<Self> {
        if leading == Complex64::new(0.0, 0.0) || !leading.is_finite() {
            return Err(Error::Argument("polynomial needs a finite nonzero leading coefficient".into()));
        }
        Ok(HermiteBiehlerFn::Polynomial { leading, roots })
    }

    pub fn product(factors: Vec<HermiteBiehlerFn>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Argument("empty product".into()));
        }
        Ok(HermiteBiehlerFn::Product(factors))
    }

    /// Complex logarithm of `E(z)` on some branch, `None` where `E(z) = 0`.
    pub fn ln_value(&self, z: ComplexPoint) -> Result<Option<Complex64>> {
        ensure_finite(z)?;
        Ok(self.ln_value_inner(z))
    }

    fn ln_value_inner(&self, z: Complex64) -> Option<Complex64> {
        match self {
            HermiteBiehlerFn::Exponential { e0, d } => Some(e0.ln() - I * d * z),
            HermiteBiehlerFn::Polynomial { leading, roots } => {
                let mut acc = leading.ln();
                for r in roots {
                    let f = z - r;
                    if f == Complex64::new(0.0, 0.0) {
                        return None;
                    }
                    acc += f.ln();
                }
                Some(acc)
            }
            HermiteBiehlerFn::Product(factors) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for f in factors {
                    acc += f.ln_value_inner(z)?;
                }
                Some(acc)
            }
        }
    }

    pub fn eval(&self, z: ComplexPoint) -> Result<Complex64> {
        match self.ln_value(z)? {
            None => Ok(Complex64::new(0.0, 0.0)),
            Some(l) => exp_checked(l, z),
        }
    }

    /// `E#(z) = conj(E(conj z))`.
    pub fn eval_star(&self, z: ComplexPoint) -> Result<Complex64> {
        Ok(self.eval(z.conj())?.conj())
    }

    /// `ln|E(z)|`, `-inf` at zeros.
    pub fn ln_abs(&self, z: ComplexPoint) -> Result<f64> {
        Ok(self.ln_value(z)?.map_or(f64::NEG_INFINITY, |l| l.re))
    }

    /// Logarithmic derivative `E'(z)/E(z)`; `None` at zeros of `E`.
    pub fn log_derivative(&self, z: ComplexPoint) -> Result<Option<Complex64>> {
        ensure_finite(z)?;
        Ok(self.log_derivative_inner(z))
    }

    fn log_derivative_inner(&self, z: Complex64) -> Option<Complex64> {
        match self {
            HermiteBiehlerFn::Exponential { d, .. } => Some(-I * d),
            HermiteBiehlerFn::Polynomial { roots, .. } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in roots {
                    let f = z - r;
                    if f == Complex64::new(0.0, 0.0) {
                        return None;
                    }
                    acc += f.inv();
                }
                Some(acc)
            }
            HermiteBiehlerFn::Product(factors) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for f in factors {
                    acc += f.log_derivative_inner(z)?;
                }
                Some(acc)
            }
        }
    }

    /// `E'(z)` from the parametric form.
    pub fn derivative(&self, z: ComplexPoint) -> Result<Complex64> {
        ensure_finite(z)?;
        match self {
            HermiteBiehlerFn::Exponential { d, .. } => Ok(-I * d * self.eval(z)?),
            HermiteBiehlerFn::Polynomial { leading, roots } => {
                // product rule, no division, so roots are safe
                let mut sum = Complex64::new(0.0, 0.0);
                for k in 0..roots.len() {
                    let mut term = *leading;
                    for (j, r) in roots.iter().enumerate() {
                        if j != k {
                            term *= z - r;
                        }
                    }
                    sum += term;
                }
                if !sum.is_finite() {
                    return Err(Error::Range { modulus: z.norm() });
                }
                Ok(sum)
            }
            HermiteBiehlerFn::Product(factors) => {
                let values = factors.iter().map(|f| f.eval(z)).collect::<Result<Vec<_>>>()?;
                let mut sum = Complex64::new(0.0, 0.0);
                for (k, f) in factors.iter().enumerate() {
                    let mut term = f.derivative(z)?;
                    for (j, v) in values.iter().enumerate() {
                        if j != k {
                            term *= v;
                        }
                    }
                    sum += term;
                }
                if !sum.is_finite() {
                    return Err(Error::Range { modulus: z.norm() });
                }
                Ok(sum)
            }
        }
    }
}

impl Analytic for HermiteBiehlerFn {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        HermiteBiehlerFn::eval(self, z)
    }
    fn ln_abs(&self, z: Complex64) -> Result<f64> {
        HermiteBiehlerFn::ln_abs(self, z)
    }
    fn derivative(&self, z: Complex64) -> Option<Result<Complex64>> {
        Some(HermiteBiehlerFn::derivative(self, z))
    }
}

/// Outcome of sampling the Hermite–Biehler inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbValidation {
    /// Largest observed `|E(z̄)| / |E(z)|`.
    pub worst_ratio: f64,
    pub witness: Complex64,
    pub pass: bool,
}

pub fn validate_hb(e: &HermiteBiehlerFn, grid: &[ComplexPoint]) -> Result<HbValidation> {
    if grid.is_empty() {
        return Err(Error::Argument("validation grid is empty".into()));
    }
    let mut worst = f64::NEG_INFINITY;
    let mut witness = grid[0];
    for &z in grid {
        if !(z.im > 0.0) {
            return Err(Error::Argument(format!("grid point {z} is not in the upper half-plane")));
        }
        let upper = e.ln_abs(z)?;
        let lower = e.ln_abs(z.conj())?;
        let ratio = if upper == f64::NEG_INFINITY {
            if lower == f64::NEG_INFINITY { 1.0 } else { f64::INFINITY }
        } else {
            (lower - upper).exp()
        };
        if ratio > worst {
            worst = ratio;
            witness = z;
        }
    }
    Ok(HbValidation { worst_ratio: worst, witness, pass: worst < 1.0 })
}

/// `A(z) = (E(z) + E#(z)) / 2`, real on the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct CompanionA {
    e: HermiteBiehlerFn,
}

pub fn companion_a(e: &HermiteBiehlerFn) -> CompanionA {
    CompanionA { e: e.clone() }
}

impl CompanionA {
    /// `ln A(z)` computed by factoring out the larger of the two terms.
    pub fn ln_value(&self, z: Complex64) -> Result<Option<Complex64>> {
        let a = self.e.ln_value(z)?;
        let b = self.e.ln_value(z.conj())?.map(|l| l.conj());
        let (hi, lo) = match (a, b) {
            (None, None) => return Ok(None),
            (Some(x), None) | (None, Some(x)) => return Ok(Some(x - std::f64::consts::LN_2)),
            (Some(x), Some(y)) => if x.re >= y.re { (x, y) } else { (y, x) },
        };
        let s = Complex64::new(1.0, 0.0) + (lo - hi).exp();
        if s == Complex64::new(0.0, 0.0) {
            return Ok(None);
        }
        Ok(Some(hi + s.ln() - std::f64::consts::LN_2))
    }

    /// Value on the real line as a real number.
    pub fn eval_real(&self, t: f64) -> Result<f64> {
        let z = Complex64::new(t, 0.0);
        Ok(0.5 * (self.e.eval(z)? + self.e.eval_star(z)?).re)
    }
}

impl Analytic for CompanionA {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self.ln_value(z)? {
            None => Ok(Complex64::new(0.0, 0.0)),
            Some(l) => exp_checked(l, z),
        }
    }
    fn ln_abs(&self, z: Complex64) -> Result<f64> {
        Ok(self.ln_value(z)?.map_or(f64::NEG_INFINITY, |l| l.re))
    }
    fn derivative(&self, z: Complex64) -> Option<Result<Complex64>> {
        let d = || -> Result<Complex64> {
            let de = self.e.derivative(z)?;
            let ds = self.e.derivative(z.conj())?.conj();
            Ok(0.5 * (de + ds))
        };
        Some(d())
    }
}
