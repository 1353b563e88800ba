use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Grid sizes of `10⁶` and beyond are treated as divergent.
pub const DEFAULT_CAP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Satisfied,
    Violated,
    Indeterminate,
}

/// How a finite grid decides that a supremum is infinite.
///
/// Divergent means: the grid supremum reaches `cap`, or the per-decade
/// supremum grew by at least `min_decade_growth` across each of the last two
/// decades of heights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceRule {
    pub cap: f64,
    pub min_decade_growth: f64,
}

impl Default for DivergenceRule {
    fn default() -> Self {
        DivergenceRule { cap: DEFAULT_CAP, min_decade_growth: 10f64.powf(0.25) }
    }
}

impl DivergenceRule {
    pub fn with_cap(cap: f64) -> Self {
        DivergenceRule { cap, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub quantity_name: String,
    pub sup_estimate: f64,
    #[serde(with = "crate::serde_c64")]
    pub arg_sup: Complex64,
    /// Supremum over the top decade of heights.
    pub limsup_estimate: f64,
    pub verdict: Verdict,
    pub samples_used: usize,
    /// Supremum per decade of heights, lowest decade first.
    pub decade_sups: Vec<f64>,
    /// Ratios of consecutive entries of `decade_sups`.
    pub decade_growth: Vec<f64>,
    pub divergent: bool,
}

impl CriterionReport {
    /// Report for a quantity required to be bounded.
    pub fn bounded_sup(name: &str, samples: &[(Complex64, f64)], rule: &DivergenceRule) -> Self {
        let finite: Vec<(Complex64, f64)> = samples.iter().copied().filter(|(_, v)| !v.is_nan()).collect();
        if finite.is_empty() {
            return CriterionReport {
                quantity_name: name.to_string(),
                sup_estimate: 0.0,
                arg_sup: Complex64::new(0.0, 0.0),
                limsup_estimate: 0.0,
                verdict: Verdict::Indeterminate,
                samples_used: 0,
                decade_sups: vec![],
                decade_growth: vec![],
                divergent: false,
            };
        }
        let (mut arg_sup, mut sup) = finite[0];
        for &(z, v) in &finite[1..] {
            if v > sup {
                sup = v;
                arg_sup = z;
            }
        }
        let y_max = finite.iter().map(|(z, _)| z.im).fold(f64::NEG_INFINITY, f64::max);
        // decade k holds heights in (y_max 10^{-k-1}, y_max 10^{-k}]
        let bucket = |y: f64| -> usize { ((y_max / y).log10() + 1e-9).floor().max(0.0) as usize };
        let n_buckets = finite.iter().map(|(z, _)| bucket(z.im)).max().unwrap_or(0) + 1;
        let mut by_decade = vec![f64::NEG_INFINITY; n_buckets];
        for &(z, v) in &finite {
            let b = bucket(z.im);
            by_decade[b] = by_decade[b].max(v);
        }
        let limsup = by_decade[0];
        let decade_sups: Vec<f64> = by_decade.into_iter().rev().filter(|v| *v > f64::NEG_INFINITY).collect();
        let decade_growth: Vec<f64> = decade_sups.windows(2).map(|w| w[1] / w[0]).collect();
        let growing = decade_growth.len() >= 2
            && decade_growth[decade_growth.len() - 2..].iter().all(|g| *g >= rule.min_decade_growth);
        let divergent = sup >= rule.cap || growing;
        CriterionReport {
            quantity_name: name.to_string(),
            sup_estimate: sup,
            arg_sup,
            limsup_estimate: limsup,
            verdict: if divergent { Verdict::Violated } else { Verdict::Satisfied },
            samples_used: finite.len(),
            decade_sups,
            decade_growth,
            divergent,
        }
    }

    /// Growth factor across the last decade, if there are two decades.
    pub fn last_decade_growth(&self) -> Option<f64> {
        self.decade_growth.last().copied()
    }
}
