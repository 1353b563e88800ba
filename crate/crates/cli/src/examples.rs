//! Canned reproductions with closed-form constants to compare against.

use std::f64::consts::E;
use std::fmt::Write as _;

use num_complex::Complex64;
use oplab_core::criteria::{
    compactness_probe_db, compactness_probe_model, db_sufficient, jc_quantities, model_boundedness, CompactnessProbe,
    CompactnessVerdict,
};
use oplab_core::funclib::SymbolMap;

use crate::config::{AnalysisConfig, Setup};
use crate::CliError;

pub const NAMES: [&str; 3] = ["3.6", "3.7", "model-translation"];

pub const CONFIG_3_6: &str = include_str!("../configs/example_3_6.json");
pub const CONFIG_3_7: &str = include_str!("../configs/example_3_7.json");
pub const CONFIG_MODEL_TRANSLATION: &str = include_str!("../configs/model_translation.json");

const EXPLAIN_3_6: &str = "\
E(z) = exp(-i d z) with d = d1 + i d2 = 1 + i, phi(z) = z + b with b = b1 + i b2 = 1 + i.
E(phi(z))/E(z) = exp(-i d b) is constant, |exp(-i d b)| = exp(2) for these parameters.
r_n = K(phi(t_n), phi(t_n)) / K(t_n, t_n) at the real zeros t_n of A = (E + E#)/2.
Case 1 (b2 > 0), adopted grouping:
    exp(2 d2 b1) * (exp(2 d1 b2) - exp(-2 d1 b2)) / (4 d1 b2) = e^2 (e^2 - e^-2) / 4
Case 2 (b2 = 0, here b = 1): exp(2 d2 b1) = e^2.
Each r_n is computed from the kernel diagonal and from the branch formulas in E and E';
the non-real branch carries the factor 1/(-4i Im phi(t_n) E(t_n) Re E'(t_n)), which is real
because E(t_n) is purely imaginary at zeros of A. Both computations must agree to 1e-9.
";

const EXPLAIN_3_7: &str = "\
E(z) = exp(-i d z) with d = 1 (Paley-Wiener), phi(z) = a z + b with a = 1/2, b = i.
Im z / Im phi(z) = y / (a y + b2) increases to 1/a = 2.
|E(phi(z)) / E(z)| = exp(d Im b + d (a - 1) y) <= exp(d b2) = e, and <= 1 when b = 0.
Case 1 (b2 > 0): r_n = (exp(2 d b2) - exp(-2 d b2)) / (4 d b2) = (e^2 - e^-2) / 4, independent of a.
Case 2 (b real, here b = 1): r_n = 1.
";

const EXPLAIN_MODEL_TRANSLATION: &str = "\
chi(z) = exp(2 i z) (alpha = 2, no Blaschke zeros), phi(z) = z + i on H(chi) -> H^2.
|chi(phi(z))| = exp(-2 (y + 1)) <= exp(-2) < 1, so the sufficient condition
sup Im z / Im phi(z) = 1 decides boundedness: bounded.
Q2(z) = (y / (y + 1)) (1 - exp(-4 (y + 1))) tends to 1, so its limsup is positive and
the operator is not compact.
";

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub quantity: String,
    pub computed: String,
    pub expected: String,
    pub tolerance: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleReport {
    pub name: &'static str,
    pub rows: Vec<Row>,
    pub explain: &'static str,
}

impl ExampleReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn table(&self) -> String {
        let head = ["quantity", "computed", "closed form", "tolerance", "status"];
        let cells: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.quantity.clone(),
                    r.computed.clone(),
                    r.expected.clone(),
                    r.tolerance.clone(),
                    if r.pass { "PASS".into() } else { "FAIL".into() },
                ]
            })
            .collect();
        let mut w = head.map(|h| h.chars().count());
        for c in &cells {
            for (k, s) in c.iter().enumerate() {
                w[k] = w[k].max(s.chars().count());
            }
        }
        let mut out = format!("example {}\n", self.name);
        let line = |out: &mut String, c: &[String; 5]| {
            let padded: Vec<String> = c.iter().zip(w).map(|(s, n)| format!("{s:<n$}")).collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&mut out, &head.map(String::from));
        line(&mut out, &w.map(|n| "-".repeat(n)));
        for c in &cells {
            line(&mut out, c);
        }
        out
    }
}

fn rel_row(quantity: &str, computed: f64, expected: f64, expected_text: &str, rel: f64) -> Row {
    Row {
        quantity: quantity.into(),
        computed: format!("{computed:.10}"),
        expected: format!("{expected_text} = {expected:.10}"),
        tolerance: format!("rel {rel:e}"),
        pass: ((computed - expected) / expected).abs() <= rel,
    }
}

fn le_row(quantity: &str, computed: f64, bound: f64, bound_text: &str) -> Row {
    Row {
        quantity: quantity.into(),
        computed: format!("{computed:.10}"),
        expected: format!("<= {bound_text} = {bound:.10}"),
        tolerance: "rel 1e-9".into(),
        pass: computed <= bound * (1.0 + 1e-9),
    }
}

/// Every `r_n` within `abs` of `expected`.
fn probe_row(quantity: &str, probe: &CompactnessProbe, expected: f64, expected_text: &str, abs: f64) -> Row {
    let worst = probe.sequence_values.iter().map(|r| (r - expected).abs()).fold(0.0, f64::max);
    Row {
        quantity: format!("{quantity} ({} zeros)", probe.sequence_values.len()),
        computed: format!("{:.10}", probe.limsup_estimate),
        expected: format!("{expected_text} = {expected:.10}"),
        tolerance: format!("abs {abs:e}, worst {worst:.1e}"),
        pass: probe.sequence_values.len() >= 5 && worst <= abs,
    }
}

fn agreement_row(quantity: &str, probe: &CompactnessProbe) -> Row {
    let d = probe.max_discrepancy.unwrap_or(f64::NAN);
    Row {
        quantity: quantity.into(),
        computed: format!("{d:.2e}"),
        expected: "0".into(),
        tolerance: "rel 1e-9".into(),
        pass: d <= 1e-9,
    }
}

fn text_row(quantity: &str, computed: &str, expected: &str) -> Row {
    Row {
        quantity: quantity.into(),
        computed: computed.into(),
        expected: expected.into(),
        tolerance: "exact".into(),
        pass: computed == expected,
    }
}

fn setup(text: &str) -> Result<Setup, ExampleError> {
    Ok(AnalysisConfig::parse(text)?.setup(oplab_core::criteria::DEFAULT_CAP)?)
}

#[derive(Debug, thiserror::Error)]
pub enum ExampleError {
    #[error("{0}")]
    Cli(#[from] CliError),
    #[error("{0}")]
    Numerical(#[from] oplab_core::Error),
}

fn with_b(s: &Setup, b: Complex64) -> Result<SymbolMap, ExampleError> {
    let (a, _) = s.phi.as_affine().expect("canned symbols are affine");
    Ok(SymbolMap::affine(a, b)?)
}

fn probe(s: &Setup, phi: &SymbolMap) -> Result<CompactnessProbe, ExampleError> {
    let e = s.e.as_ref().expect("canned de Branges configs carry E");
    let [lo, hi] = s.options.root_interval;
    Ok(compactness_probe_db(e, phi, (lo, hi), s.options.root_resolution, s.options.compactness_d)?)
}

fn example_3_6() -> Result<ExampleReport, ExampleError> {
    let s = setup(CONFIG_3_6)?;
    let e = s.e.as_ref().expect("E");
    let suff = db_sufficient(e, &s.phi, &s.grid, s.options.real_samples, &s.rule)?;
    let mut rows = vec![
        rel_row("sup |E(phi)/E|", suff.ratio_sup, E * E, "|exp(-idb)| = e^2", 1e-9),
        rel_row("inf |E(phi)/E|", suff.ratio_min, E * E, "|exp(-idb)| = e^2", 1e-9),
    ];
    let p1 = probe(&s, &s.phi)?;
    let case1 = E * E * (E * E - (-2f64).exp()) / 4.0;
    let mean = p1.sequence_values.iter().sum::<f64>() / p1.sequence_values.len() as f64;
    let var = p1.sequence_values.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / p1.sequence_values.len() as f64;
    rows.push(rel_row(
        &format!("r_n Case 1, b = 1+i ({} zeros)", p1.sequence_values.len()),
        mean,
        case1,
        "e^2 (e^2 - e^-2)/4",
        1e-6,
    ));
    rows.push(Row {
        quantity: "r_n relative variance".into(),
        computed: format!("{:.2e}", var / (mean * mean)),
        expected: "0".into(),
        tolerance: "< 1e-10".into(),
        pass: var / (mean * mean) < 1e-10,
    });
    rows.push(agreement_row("r_n branch vs kernel ratio, Case 1", &p1));
    let p2 = probe(&s, &with_b(&s, Complex64::new(1.0, 0.0))?)?;
    let mean2 = p2.sequence_values.iter().sum::<f64>() / p2.sequence_values.len() as f64;
    rows.push(rel_row(
        &format!("r_n Case 2, b = 1 ({} zeros)", p2.sequence_values.len()),
        mean2,
        E * E,
        "exp(2 d2 b1) = e^2",
        1e-6,
    ));
    rows.push(agreement_row("r_n branch vs kernel ratio, Case 2", &p2));
    Ok(ExampleReport { name: "3.6", rows, explain: EXPLAIN_3_6 })
}

fn example_3_7() -> Result<ExampleReport, ExampleError> {
    let s = setup(CONFIG_3_7)?;
    let e = s.e.as_ref().expect("E");
    let jc = jc_quantities(&s.phi, &s.grid)?;
    let mut rows = vec![
        rel_row("sup Im z / Im phi", jc.sup_ratio, 2.0, "1/a", 1e-2),
        rel_row("angular derivative", jc.angular_derivative, 2.0, "1/a", 1e-2),
    ];
    let suff = db_sufficient(e, &s.phi, &s.grid, s.options.real_samples, &s.rule)?;
    rows.push(le_row("sup |E(phi)/E|, b = i", suff.ratio_sup, E, "e"));
    let phi0 = with_b(&s, Complex64::new(0.0, 0.0))?;
    let suff0 = db_sufficient(e, &phi0, &s.grid, s.options.real_samples, &s.rule)?;
    rows.push(le_row("sup |E(phi)/E|, b = 0", suff0.ratio_sup, 1.0, "1"));
    let p1 = probe(&s, &s.phi)?;
    let case1 = (E * E - (-2f64).exp()) / 4.0;
    rows.push(probe_row("r_n Case 1, b = i", &p1, case1, "(e^2 - e^-2)/4", 1e-8));
    rows.push(agreement_row("r_n branch vs kernel ratio, Case 1", &p1));
    let p2 = probe(&s, &with_b(&s, Complex64::new(1.0, 0.0))?)?;
    rows.push(probe_row("r_n Case 2, b = 1", &p2, 1.0, "1", 1e-8));
    rows.push(agreement_row("r_n branch vs kernel ratio, Case 2", &p2));
    Ok(ExampleReport { name: "3.7", rows, explain: EXPLAIN_3_7 })
}

fn example_model_translation() -> Result<ExampleReport, ExampleError> {
    let s = setup(CONFIG_MODEL_TRANSLATION)?;
    let chi = s.chi.as_ref().expect("chi");
    let mb = model_boundedness(chi, &s.phi, &s.grid, &s.rule)?;
    let mut rows = vec![
        le_row("sup |chi(phi)|", mb.sup_chi_phi, (-2f64).exp(), "e^-2"),
        rel_row("sup Im z / Im phi", mb.sufficient.sup_estimate, 1.0, "1", 1e-3),
        text_row("bounded", &(mb.combined_verdict == "bounded").to_string(), "true"),
    ];
    let p = compactness_probe_model(chi, &s.phi, &s.grid, s.options.compactness_d)?;
    rows.push(rel_row("limsup Q2", p.limsup_estimate, 1.0, "1", 1e-3));
    rows.push(text_row("compact", &(p.verdict != CompactnessVerdict::NotCompact).to_string(), "false"));
    Ok(ExampleReport { name: "model-translation", rows, explain: EXPLAIN_MODEL_TRANSLATION })
}

/// Run a canned example by name.
pub fn run_example(name: &str) -> Result<ExampleReport, ExampleError> {
    match name {
        "3.6" => example_3_6(),
        "3.7" => example_3_7(),
        "model-translation" => example_model_translation(),
        _ => Err(CliError::Config(format!("unknown example {name:?}; available: {}", NAMES.join(", "))).into()),
    }
}
