//! JSON analysis configuration. Unknown fields are rejected everywhere.

use num_complex::Complex64;
use oplab_core::criteria::DivergenceRule;
use oplab_core::funclib::{inner_from_hb, HermiteBiehlerFn, InnerFn, SymbolMap};
use oplab_core::kernels::KernelKind;
use oplab_core::numerics::{QuadratureSpec, SectorGrid};
use serde::{Deserialize, Serialize};

use crate::CliError;

fn c([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

fn one() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Hardy,
    Model,
    Debranges,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase", deny_unknown_fields)]
pub enum HbConfig {
    Exponential {
        #[serde(default = "one")]
        e0: [f64; 2],
        d: [f64; 2],
    },
    Polynomial {
        #[serde(default = "one")]
        leading: [f64; 2],
        roots: Vec<[f64; 2]>,
    },
    Product {
        factors: Vec<HbConfig>,
    },
}

impl HbConfig {
    pub fn build(&self) -> oplab_core::Result<HermiteBiehlerFn> {
        match self {
            HbConfig::Exponential { e0, d } => HermiteBiehlerFn::exponential(c(*e0), c(*d)),
            HbConfig::Polynomial { leading, roots } => {
                HermiteBiehlerFn::polynomial(c(*leading), roots.iter().copied().map(c).collect())
            }
            HbConfig::Product { factors } => {
                HermiteBiehlerFn::product(factors.iter().map(|f| f.build()).collect::<Result<_, _>>()?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FromE {
    #[serde(rename = "from_E")]
    pub from_e: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParametricChi {
    #[serde(default)]
    pub alpha_exp: f64,
    #[serde(default)]
    pub zeros: Vec<[f64; 2]>,
    #[serde(default = "one")]
    pub unimodular: [f64; 2],
}

/// Either `{"from_E": true}` or `{alpha_exp, zeros, unimodular}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChiConfig {
    FromE(FromE),
    Parametric(ParametricChi),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub kind: SpaceKind,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<HbConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<ChiConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase", deny_unknown_fields)]
pub enum SymbolConfig {
    Affine {
        a: f64,
        #[serde(default)]
        b: [f64; 2],
    },
    Moebius {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    Sqrt,
}

impl SymbolConfig {
    pub fn build(&self) -> oplab_core::Result<SymbolMap> {
        match *self {
            SymbolConfig::Affine { a, b } => SymbolMap::affine(a, c(b)),
            SymbolConfig::Moebius { a, b, c, d } => SymbolMap::moebius(a, b, c, d),
            SymbolConfig::Sqrt => Ok(SymbolMap::SqrtBranch),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub kappa: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub per_decade: usize,
    pub x_samples: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { kappa: 1.0, y_min: 1.0, y_max: 1e6, per_decade: 4, x_samples: 5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        let d = QuadratureSpec::default();
        QuadConfig { abs_tol: d.abs_tol, rel_tol: d.rel_tol }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    ValidateHb,
    ExponentialType,
    JcQuantities,
    ModelBoundedness,
    DbSufficient,
    DbNecessary,
    NormLowerBound,
    NormUpperBound,
    CompactnessModel,
    CompactnessDb,
    Regularity,
    ClassifySymbol,
}

impl Task {
    pub fn name(&self) -> String {
        serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
    }
}

/// Tuning knobs for individual tasks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    /// Number of kernel points for `norm_lower_bound`.
    pub points: usize,
    pub points_y_min: f64,
    pub points_y_max: f64,
    pub points_kappa: f64,
    pub real_samples: usize,
    pub root_interval: [f64; 2],
    pub root_resolution: f64,
    pub compactness_d: f64,
    /// `λ` of the positivity kernel for `L_mineig` grid export.
    pub lambda: f64,
    /// Ascending coefficients for `classify_symbol`; defaults to the affine symbol.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<Vec<[f64; 2]>>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            points: 64,
            points_y_min: 1.0,
            points_y_max: 300.0,
            points_kappa: 1.0,
            real_samples: 2001,
            root_interval: [0.0, 20.0],
            root_resolution: 0.05,
            compactness_d: 1e-6,
            lambda: 1.0,
            polynomial: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub space: SpaceConfig,
    pub symbol: SymbolConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub quadrature: QuadConfig,
    #[serde(default)]
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub options: Options,
}

/// Validated runtime objects built from a config.
#[derive(Debug, Clone)]
pub struct Setup {
    pub kind: KernelKind,
    pub e: Option<HermiteBiehlerFn>,
    pub chi: Option<InnerFn>,
    pub phi: SymbolMap,
    pub grid: SectorGrid,
    pub quadrature: QuadratureSpec,
    pub options: Options,
    pub rule: DivergenceRule,
}

impl AnalysisConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: AnalysisConfig = serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        let mut seen = std::collections::BTreeSet::new();
        for t in &cfg.tasks {
            if !seen.insert(*t) {
                return Err(CliError::Config(format!("task {} listed twice", t.name())));
            }
        }
        Ok(cfg)
    }

    pub fn setup(&self, cap: f64) -> Result<Setup, CliError> {
        let field = |name: &'static str| move |e: oplab_core::Error| CliError::Config(format!("{name}: {e}"));
        let e = self.space.e.as_ref().map(|e| e.build()).transpose().map_err(field("space.E"))?;
        let chi = match &self.space.chi {
            None => None,
            Some(ChiConfig::FromE(FromE { from_e: true })) => match &e {
                Some(e) => Some(inner_from_hb(e)),
                None => return Err(CliError::Config("space.chi: from_E needs space.E".into())),
            },
            Some(ChiConfig::FromE(FromE { from_e: false })) => None,
            Some(ChiConfig::Parametric(ParametricChi { alpha_exp, zeros, unimodular })) => Some(
                InnerFn::parametric(*alpha_exp, zeros.iter().copied().map(c).collect(), c(*unimodular))
                    .map_err(field("space.chi"))?,
            ),
        };
        let kind = match self.space.kind {
            SpaceKind::Hardy => KernelKind::Hardy,
            SpaceKind::Model => KernelKind::Model(
                chi.clone().ok_or_else(|| CliError::Config("space.chi is required for kind \"model\"".into()))?,
            ),
            SpaceKind::Debranges => KernelKind::DeBranges(
                e.clone().ok_or_else(|| CliError::Config("space.E is required for kind \"debranges\"".into()))?,
            ),
        };
        let phi = self.symbol.build().map_err(field("symbol"))?;
        let g = self.grid;
        let grid = SectorGrid::new(g.kappa, g.y_min, g.y_max, g.per_decade, g.x_samples).map_err(field("grid"))?;
        let quadrature = QuadratureSpec::with_tolerances(self.quadrature.abs_tol, self.quadrature.rel_tol);
        if !(quadrature.abs_tol > 0.0 && quadrature.rel_tol > 0.0) {
            return Err(CliError::Config("quadrature: tolerances must be positive".into()));
        }
        Ok(Setup { kind, e, chi, phi, grid, quadrature, options: self.options.clone(), rule: DivergenceRule::with_cap(cap) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "space": {"kind": "debranges", "E": {"variant": "exponential", "d": [1, 0]}, "chi": {"from_E": true}},
        "symbol": {"variant": "affine", "a": 0.5, "b": [0, 1]},
        "grid": {"kappa": 1, "y_min": 1, "y_max": 1000, "per_decade": 4, "x_samples": 3},
        "tasks": ["db_sufficient", "compactness_db"]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = AnalysisConfig::parse(SAMPLE).unwrap();
        assert_eq!(cfg.tasks, vec![Task::DbSufficient, Task::CompactnessDb]);
        let echo = serde_json::to_string(&cfg).unwrap();
        assert_eq!(AnalysisConfig::parse(&echo).unwrap(), cfg);
        let s = cfg.setup(1e6).unwrap();
        assert!(s.chi.is_some());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = SAMPLE.replace("\"x_samples\": 3", "\"x_samples\": 3, \"extra\": 1");
        assert!(matches!(AnalysisConfig::parse(&bad), Err(CliError::Config(_))));
        let bad = SAMPLE.replace("\"a\": 0.5", "\"a\": 0.5, \"c\": 2");
        assert!(AnalysisConfig::parse(&bad).is_err());
    }

    #[test]
    fn invalid_values_are_config_errors() {
        let bad = SAMPLE.replace("\"d\": [1, 0]", "\"d\": [-1, 0]");
        let cfg = AnalysisConfig::parse(&bad).unwrap();
        assert!(matches!(cfg.setup(1e6), Err(CliError::Config(m)) if m.starts_with("space.E")));
    }

    #[test]
    fn chi_forms() {
        let p = SAMPLE.replace("{\"from_E\": true}", "{\"alpha_exp\": 2}");
        let cfg = AnalysisConfig::parse(&p).unwrap();
        assert!(matches!(cfg.space.chi, Some(ChiConfig::Parametric(_))));
        let bad = SAMPLE.replace("{\"from_E\": true}", "{\"alpha\": 2}");
        assert!(AnalysisConfig::parse(&bad).is_err());
    }

    #[test]
    fn duplicate_tasks_are_rejected() {
        let bad = SAMPLE.replace("\"compactness_db\"", "\"db_sufficient\"");
        assert!(AnalysisConfig::parse(&bad).is_err());
    }

    #[test]
    fn task_names() {
        assert_eq!(Task::CompactnessDb.name(), "compactness_db");
        assert_eq!(Task::JcQuantities.name(), "jc_quantities");
    }
}
