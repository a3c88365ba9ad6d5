use std::path::Path;

use metaconverse_core::lossy::{
    excess_distortion, kostina_budget, kostina_relaxation, lsc_test_budget, theorem3_exact, DistortionSpec, LossyCode,
};
use metaconverse_core::{FiniteMeasure, TOL};
use serde::{Deserialize, Serialize};

use crate::{read_json, CliError, Outcome};

/// Source distribution, distortion matrix (rows by source symbol),
/// threshold `D`, codebook, and an optional auxiliary `qv` (uniform when
/// omitted).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossyInstance {
    pub source: Vec<f64>,
    pub distortion: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    pub threshold: f64,
    pub codebook: Vec<usize>,
    #[serde(default)]
    pub qv: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
struct LossyReport {
    m: usize,
    excess_distortion: f64,
    theorem3_exact: f64,
    kostina_relaxation: f64,
    kostina_budget: f64,
    lsc_budget: f64,
    qv: Vec<f64>,
    exact_equality: bool,
    relaxation_dominated: bool,
    relaxation_equality: bool,
}

pub fn cmd_lossy_demo(path: &Path) -> Result<Outcome, CliError> {
    let instance: LossyInstance = read_json(path)?;
    lossy_demo(&instance)
}

pub fn lossy_demo(instance: &LossyInstance) -> Result<Outcome, CliError> {
    let pv = FiniteMeasure::probability(instance.source.clone())?;
    let spec = DistortionSpec::from_rows(&instance.distortion, instance.threshold)?;
    let code = LossyCode::new(instance.codebook.clone())?;
    let qv = match &instance.qv {
        Some(w) => FiniteMeasure::probability(w.clone())?,
        None => FiniteMeasure::uniform(spec.source_size())?,
    };
    let m = code.len();

    let excess = excess_distortion(&pv, &spec, &code)?;
    let exact = theorem3_exact(&pv, &spec, &code)?;
    let relaxed = kostina_relaxation(&pv, &spec, m, &qv)?;
    let report = LossyReport {
        m,
        excess_distortion: excess,
        theorem3_exact: exact,
        kostina_relaxation: relaxed,
        kostina_budget: kostina_budget(&qv, &spec, m)?,
        lsc_budget: lsc_test_budget(&qv, &spec, &code)?,
        qv: qv.weights().to_vec(),
        exact_equality: (exact - excess).abs() <= TOL,
        relaxation_dominated: relaxed <= excess + TOL,
        relaxation_equality: (relaxed - excess).abs() <= TOL,
    };

    let mut failures = Vec::new();
    if !report.exact_equality {
        failures.push("exact_equality".to_string());
    }
    if !report.relaxation_dominated {
        failures.push("relaxation_dominated".to_string());
    }
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    Ok(Outcome { text, failures })
}
