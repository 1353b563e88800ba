use num_complex::Complex64;
use serde::Serialize;

use super::{Analytic, Star};
use crate::{Error, Result};

/// Heights `y` at which `f(iy)` is probed, and how many of the top ones
/// enter the limsup estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthLadder {
    heights: Vec<f64>,
    window: usize,
}

impl GrowthLadder {
    pub fn new(heights: Vec<f64>, window: usize) -> Result<Self> {
        if window < 2 || window > heights.len() {
            return Err(Error::Argument(format!(
                "window {window} must be >= 2 and at most the number of heights ({})",
                heights.len()
            )));
        }
        if heights.iter().any(|y| !(*y > 0.0) || !y.is_finite()) {
            return Err(Error::Argument("ladder heights must be positive and finite".into()));
        }
        if heights.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument("ladder heights must be strictly ascending".into()));
        }
        Ok(GrowthLadder { heights, window })
    }

    /// Log-spaced heights from `lo` to `hi`, `per_decade` per decade.
    pub fn log_spaced(lo: f64, hi: f64, per_decade: usize, window: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) || per_decade == 0 {
            return Err(Error::Argument(format!("bad ladder range [{lo}, {hi}]")));
        }
        let n = ((hi / lo).log10() * per_decade as f64).ceil() as usize;
        let step = (hi / lo).ln() / n as f64;
        let heights = (0..=n).map(|k| if k == n { hi } else { lo * (step * k as f64).exp() }).collect();
        Self::new(heights, window)
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn window(&self) -> usize {
        self.window
    }

    fn top(&self) -> &[f64] {
        &self.heights[self.heights.len() - self.window..]
    }
}

impl Default for GrowthLadder {
    /// `1 ..= 1e6`, four heights per decade, top three in the window.
    fn default() -> Self {
        Self::log_spaced(1.0, 1e6, 4, 3).expect("static ladder")
    }
}

/// Mean type from a log-modulus oracle `y ↦ ln|f(iy)|`.
///
/// Heights where `f` vanishes are skipped.
pub fn mean_type_by(ln_abs_at: impl Fn(f64) -> Result<f64>, ladder: &GrowthLadder) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    let mut seen = false;
    for &y in ladder.top() {
        let l = ln_abs_at(y)?;
        if l == f64::NEG_INFINITY {
            continue;
        }
        if !l.is_finite() {
            return Err(Error::Range { modulus: y });
        }
        seen = true;
        best = best.max(l / y);
    }
    if !seen {
        return Err(Error::Undefined("function vanishes at every probe height".into()));
    }
    Ok(best)
}

/// `limsup (1/y) ln|f(iy)|`, estimated as the maximum over the ladder's top window.
pub fn mean_type(f: &dyn Analytic, ladder: &GrowthLadder) -> Result<f64> {
    mean_type_by(|y| f.ln_abs(Complex64::new(0.0, y)), ladder)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialType {
    pub value: f64,
    /// Mean type of `f` in the upper half-plane.
    pub mt_plus: f64,
    /// Mean type of `f#` in the upper half-plane.
    pub mt_minus: f64,
    /// `mt₊ + mt₋ >= -tolerance`.
    pub sum_nonnegative: bool,
}

/// `max(mt(f), mt(f#))`.
pub fn exponential_type(f: &dyn Analytic, ladder: &GrowthLadder) -> Result<ExponentialType> {
    let mt_plus = mean_type(f, ladder)?;
    let mt_minus = mean_type(&Star(f), ladder)?;
    Ok(ExponentialType {
        value: mt_plus.max(mt_minus),
        mt_plus,
        mt_minus,
        sum_nonnegative: mt_plus + mt_minus >= -2e-3,
    })
}
