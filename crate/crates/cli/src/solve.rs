use std::path::Path;

use clap::ValueEnum;
use metaconverse_core::converse::{bank_of_tests, poor_verdu_sweep, tight_poor_verdu, verdu_han, wolfowitz, BankOfTests};
use metaconverse_core::mary::{
    corollary1_q, decoder_error, map_solve, max_metric_decoder, remark1_counting, theorem1_spectrum_sweep,
    theorem1_test, theorem2_alpha_form, theorem2_spectrum_form,
};
use metaconverse_core::measures::{marginals, JointFile};
use metaconverse_core::{Error, FiniteMeasure, GammaSweep, JointDistribution, MetricMatrix, TOL};
use serde::{Deserialize, Serialize};

use crate::{read_json, CliError, Outcome};

/// Which output distribution to evaluate the bounds at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QyChoice {
    /// The maximizer `Q*_Y` derived from the MAP decoder.
    Pstar,
    /// The output marginal `P_Y`.
    Py,
    /// The `qy` field of the instance file.
    File,
}

/// A joint distribution with optional extras: an output measure `qy`, a
/// decoding metric (rows by hypothesis) and an auxiliary joint `qvy`.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct SolveInstance {
    #[serde(flatten)]
    pub joint: JointFile,
    #[serde(default)]
    pub qy: Option<Vec<f64>>,
    #[serde(default)]
    pub metric: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub qvy: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Serialize)]
struct SweepValue {
    value: f64,
    gamma: f64,
}

impl From<&GammaSweep> for SweepValue {
    fn from(s: &GammaSweep) -> Self {
        Self { value: s.best_value, gamma: s.best_gamma }
    }
}

#[derive(Debug, Serialize)]
struct PoorVerduValue {
    value: f64,
    gamma: f64,
    admissible_points: usize,
}

#[derive(Debug, Serialize)]
struct Bounds {
    verdu_han: SweepValue,
    wolfowitz: Option<SweepValue>,
    poor_verdu: PoorVerduValue,
    tight_poor_verdu: SweepValue,
    bank_of_tests: Option<BankOfTests>,
    counting_measure: f64,
}

#[derive(Debug, Serialize)]
struct OutputForms {
    alpha_form: f64,
    spectrum_form: f64,
    spectrum_gamma: f64,
}

#[derive(Debug, Serialize)]
struct Report {
    hypotheses: usize,
    observations: usize,
    exact: f64,
    mu: f64,
    qy_star: Vec<f64>,
    tie_sets: Vec<Vec<usize>>,
    gamma_np: f64,
    p: f64,
    beta_np: f64,
    spectrum_qstar: SweepValue,
    qy_choice: QyChoice,
    qy: Vec<f64>,
    at_qy: OutputForms,
    bounds: Bounds,
    #[serde(skip_serializing_if = "Option::is_none")]
    decoder_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theorem2_alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theorem2_eps1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theorem2_spectrum: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metric_auxiliary_alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metric_auxiliary_mu: Option<f64>,
    checks: Vec<Check>,
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
}

fn check(checks: &mut Vec<Check>, name: &'static str, pass: bool) {
    checks.push(Check { name, pass });
}

fn tight(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}

/// Reads an instance file and reports the exact error, both output-measure
/// forms, every classical bound and the tightness checks as JSON.
pub fn cmd_solve(path: &Path, choice: QyChoice) -> Result<Outcome, CliError> {
    let instance: SolveInstance = read_json(path)?;
    solve(&instance, choice)
}

pub fn solve(instance: &SolveInstance, choice: QyChoice) -> Result<Outcome, CliError> {
    let joint = instance.joint.to_joint()?;
    let map = map_solve(&joint)?;
    let (prior, py) = marginals(&joint)?;
    let eps = map.error;

    let qy = match choice {
        QyChoice::Pstar => map.qy_star.clone(),
        QyChoice::Py => py.clone(),
        QyChoice::File => {
            let weights = instance
                .qy
                .clone()
                .ok_or_else(|| CliError::Usage("--qy file needs a `qy` field in the instance".into()))?;
            FiniteMeasure::probability(weights)?
        }
    };

    let mut checks = Vec::new();
    let np = theorem1_test(&joint, &map.qy_star)?;
    let spectrum_qstar = theorem1_spectrum_sweep(&joint, &map.qy_star)?;
    check(&mut checks, "alpha_form_tight_at_qstar", tight(np.alpha, eps));
    check(&mut checks, "spectrum_form_tight_at_qstar", tight(spectrum_qstar.best_value, eps));

    let np_qy = theorem1_test(&joint, &qy)?;
    let spectrum_qy = theorem1_spectrum_sweep(&joint, &qy)?;
    let at_qy = OutputForms {
        alpha_form: np_qy.alpha,
        spectrum_form: spectrum_qy.best_value,
        spectrum_gamma: spectrum_qy.best_gamma,
    };
    check(&mut checks, "output_forms_below_exact", at_qy.alpha_form <= eps + TOL && at_qy.spectrum_form <= eps + TOL);

    let full_prior = prior.weights().iter().all(|&w| w > 0.0);
    let vh = verdu_han(&joint, Some(&qy))?;
    let wolf = if full_prior { Some(wolfowitz(&joint, &qy)?) } else { None };
    let pv = poor_verdu_sweep(&joint, &qy)?;
    let tpv = tight_poor_verdu(&joint)?;
    let bank = if full_prior { Some(bank_of_tests(&joint, &qy)?) } else { None };
    let counting = remark1_counting(&joint)?;

    let below = vh.best_value <= eps + TOL
        && wolf.as_ref().is_none_or(|w| w.best_value <= eps + TOL)
        && pv.sweep.best_value <= eps + TOL
        && bank.as_ref().is_none_or(|b| b.value <= eps + TOL);
    check(&mut checks, "bounds_below_exact", below);
    check(&mut checks, "tight_poor_verdu_equals_exact", tight(tpv.best_value, eps));
    check(&mut checks, "counting_measure_equals_exact", tight(counting, eps));
    if full_prior {
        let bank_star = bank_of_tests(&joint, &map.qy_star)?;
        check(&mut checks, "bank_of_tests_equals_exact_at_qstar", tight(bank_star.value, eps));
    }

    let mut report = Report {
        hypotheses: joint.num_hypotheses(),
        observations: joint.num_observations(),
        exact: eps,
        mu: map.mu,
        qy_star: map.qy_star.weights().to_vec(),
        tie_sets: map.tie_sets.clone(),
        gamma_np: np.gamma,
        p: np.p,
        beta_np: np.beta,
        spectrum_qstar: SweepValue::from(&spectrum_qstar),
        qy_choice: choice,
        qy: qy.weights().to_vec(),
        at_qy,
        bounds: Bounds {
            verdu_han: SweepValue::from(&vh),
            wolfowitz: wolf.as_ref().map(SweepValue::from),
            poor_verdu: PoorVerduValue {
                value: pv.sweep.best_value,
                gamma: pv.sweep.best_gamma,
                admissible_points: pv.condition_ok.iter().filter(|&&ok| ok).count(),
            },
            tight_poor_verdu: SweepValue::from(&tpv),
            bank_of_tests: bank,
            counting_measure: counting,
        },
        decoder_error: None,
        theorem2_alpha: None,
        theorem2_eps1: None,
        theorem2_spectrum: None,
        metric_auxiliary_alpha: None,
        metric_auxiliary_mu: None,
        checks: Vec::new(),
    };

    if instance.metric.is_some() || instance.qvy.is_some() {
        decoder_section(instance, &joint, &mut report, &mut checks)?;
    }

    let failures = checks.iter().filter(|c| !c.pass).map(|c| c.name.to_string()).collect();
    report.checks = checks;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    Ok(Outcome { text, failures })
}

/// Decoder named by `metric` (MAP when absent), evaluated against the file's
/// `qvy` and, for a metric, against the auxiliary that makes it optimal.
fn decoder_section(
    instance: &SolveInstance,
    joint: &JointDistribution,
    report: &mut Report,
    checks: &mut Vec<Check>,
) -> Result<(), CliError> {
    let metric = match &instance.metric {
        Some(rows) => MetricMatrix::from_rows(rows)?,
        None => MetricMatrix::from_joint(joint),
    };
    if metric.num_hypotheses() != joint.num_hypotheses() || metric.num_observations() != joint.num_observations() {
        return Err(Error::SizeMismatch {
            expected: joint.num_hypotheses() * joint.num_observations(),
            found: metric.num_hypotheses() * metric.num_observations(),
        }
        .into());
    }
    let decoder = max_metric_decoder(&metric);
    let err = decoder_error(joint, &decoder)?;
    report.decoder_error = Some(err);

    let (at_truth, _) = theorem2_alpha_form(joint, joint, &decoder)?;
    check(checks, "decoder_form_tight_at_true_joint", tight(at_truth, err));

    if instance.metric.is_some() {
        let (q, mu_prime) = corollary1_q(joint, &metric)?;
        let (alpha, _) = theorem2_alpha_form(joint, &q, &decoder)?;
        report.metric_auxiliary_alpha = Some(alpha);
        report.metric_auxiliary_mu = Some(mu_prime);
        check(checks, "metric_auxiliary_tight", tight(alpha, err));
        if instance.qvy.is_none() {
            let (spectrum, _) = theorem2_spectrum_form(joint, &q, &decoder)?;
            let eps1 = theorem2_alpha_form(joint, &q, &decoder)?.1;
            report.theorem2_alpha = Some(alpha);
            report.theorem2_eps1 = Some(eps1);
            report.theorem2_spectrum = Some(spectrum);
        }
    }
    if let Some(rows) = &instance.qvy {
        let qvy = JointDistribution::from_rows(rows)?;
        let (alpha, eps1) = theorem2_alpha_form(joint, &qvy, &decoder)?;
        let (spectrum, _) = theorem2_spectrum_form(joint, &qvy, &decoder)?;
        report.theorem2_alpha = Some(alpha);
        report.theorem2_eps1 = Some(eps1);
        report.theorem2_spectrum = Some(spectrum);
        check(checks, "decoder_forms_below_decoder_error", alpha <= err + TOL && spectrum <= err + TOL);
    }
    Ok(())
}
