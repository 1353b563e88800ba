use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Nontangential sampling region `{ |x| <= κ y, y_min <= y <= y_max }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorGrid {
    pub kappa: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub points_per_decade: usize,
    pub x_samples: usize,
}

impl SectorGrid {
    /// `y_min == y_max` is accepted and yields an empty grid.
    pub fn new(kappa: f64, y_min: f64, y_max: f64, points_per_decade: usize, x_samples: usize) -> Result<Self> {
        let g = SectorGrid { kappa, y_min, y_max, points_per_decade, x_samples };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::Argument(format!("aperture must be positive, got {}", self.kappa)));
        }
        if !(self.y_min > 0.0) || !self.y_max.is_finite() || self.y_max < self.y_min {
            return Err(Error::Argument(format!("bad height range [{}, {}]", self.y_min, self.y_max)));
        }
        if self.points_per_decade < 4 {
            return Err(Error::Argument("points_per_decade must be >= 4".into()));
        }
        if self.x_samples < 3 {
            return Err(Error::Argument("x_samples must be >= 3".into()));
        }
        Ok(())
    }

    /// Log-spaced heights, both endpoints included.
    pub fn heights(&self) -> Vec<f64> {
        if self.y_max <= self.y_min {
            return vec![];
        }
        let decades = (self.y_max / self.y_min).log10();
        let n = (decades * self.points_per_decade as f64 - 1e-9).ceil().max(1.0) as usize;
        let step = (self.y_max / self.y_min).ln() / n as f64;
        (0..=n)
            .map(|k| if k == n { self.y_max } else { self.y_min * (step * k as f64).exp() })
            .collect()
    }
}

/// Grid points ordered by height, then by real part.
pub fn sector_points(grid: &SectorGrid) -> Vec<Complex64> {
    let m = grid.x_samples;
    let mut out = Vec::with_capacity(grid.heights().len() * m);
    for y in grid.heights() {
        let half = grid.kappa * y;
        for j in 0..m {
            let x = -half + 2.0 * half * j as f64 / (m - 1) as f64;
            out.push(Complex64::new(x, y));
        }
    }
    out
}
