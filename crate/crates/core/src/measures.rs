//! Finite measures, joint distributions and randomized kernels.
//!
//! Everything is dense and row-major. A [`JointDistribution`] over `V x Y`
//! stores entry `(v, y)` at flat index `v * |Y| + y`, so the flattened mass is
//! itself a [`FiniteMeasure`] over the product alphabet and can be handed to
//! the binary-test routines directly.
//!
//! Unnormalized measures are first-class: the `normalized` flag says whether
//! a value claims to be a probability distribution, and only then is the
//! unit-sum invariant enforced.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

/// Absolute tolerance for sums and equality checks on probabilities.
pub const TOL: f64 = 1e-9;

/// First broken invariant found by a validation pass.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("empty alphabet")]
    Empty,
    #[error("non-finite weight at index {index}")]
    NonFinite { index: usize },
    #[error("negative weight at index {index}")]
    NegativeWeight { index: usize, value: f64 },
    #[error("sum={sum}")]
    Sum { sum: f64 },
    #[error("expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("row {row} sums to {sum}")]
    RowSum { row: usize, sum: f64 },
}

/// Checks a weight vector against the [`FiniteMeasure`] invariants.
pub fn validate_weights(weights: &[f64], normalized: bool) -> std::result::Result<(), Violation> {
    if weights.is_empty() {
        return Err(Violation::Empty);
    }
    for (index, &w) in weights.iter().enumerate() {
        if !w.is_finite() {
            return Err(Violation::NonFinite { index });
        }
        if w < 0.0 {
            return Err(Violation::NegativeWeight { index, value: w });
        }
    }
    if normalized {
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > TOL {
            return Err(Violation::Sum { sum });
        }
    }
    Ok(())
}

/// Checks a row-major `rows x cols` matrix against the joint-distribution
/// invariants.
pub fn validate_joint(
    rows: usize,
    cols: usize,
    mass: &[f64],
    normalized: bool,
) -> std::result::Result<(), Violation> {
    if rows == 0 || cols == 0 {
        return Err(Violation::Empty);
    }
    if mass.len() != rows * cols {
        return Err(Violation::Shape { expected: rows * cols, found: mass.len() });
    }
    validate_weights(mass, normalized)
}

/// Checks a row-major `inputs x outputs` matrix against the kernel invariants:
/// every entry in `[0, 1]` and every row summing to one.
pub fn validate_kernel(
    inputs: usize,
    outputs: usize,
    rows: &[f64],
) -> std::result::Result<(), Violation> {
    validate_joint(inputs, outputs, rows, false)?;
    for (row, chunk) in rows.chunks(outputs).enumerate() {
        let sum: f64 = chunk.iter().sum();
        if (sum - 1.0).abs() > TOL {
            return Err(Violation::RowSum { row, sum });
        }
    }
    Ok(())
}

/// Nonnegative weights over `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMeasure {
    weights: Vec<f64>,
    normalized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl FiniteMeasure {
    pub fn new(weights: Vec<f64>, normalized: bool) -> Result<Self> {
        validate_weights(&weights, normalized)?;
        Ok(Self { weights, normalized, labels: None })
    }

    /// A probability distribution; the weights must sum to one.
    pub fn probability(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights, true)
    }

    /// An arbitrary nonnegative measure.
    pub fn measure(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights, false)
    }

    /// Rescales nonnegative weights to unit mass.
    pub fn normalize(weights: Vec<f64>) -> Result<Self> {
        validate_weights(&weights, false)?;
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Violation::Sum { sum: total }.into());
        }
        Self::probability(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Violation::Empty.into());
        }
        Ok(Self { weights: vec![1.0 / n as f64; n], normalized: true, labels: None })
    }

    /// Weight one on every symbol.
    pub fn counting(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Violation::Empty.into());
        }
        Ok(Self { weights: vec![1.0; n], normalized: false, labels: None })
    }

    /// String labels are carried as metadata only.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.weights.len() {
            return Err(Error::SizeMismatch { expected: self.weights.len(), found: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, index: usize) -> f64 {
        self.weights[index]
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        validate_weights(&self.weights, self.normalized)
    }

    pub(crate) fn require_probability(&self) -> Result<()> {
        if !self.normalized {
            let sum = self.total();
            if (sum - 1.0).abs() > TOL {
                return Err(Error::NotNormalized { sum });
            }
        }
        Ok(())
    }

    pub(crate) fn require_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::SizeMismatch { expected, found: self.len() });
        }
        Ok(())
    }
}

/// A (possibly unnormalized) measure on `V x Y`, stored row-major by `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    hypotheses: usize,
    observations: usize,
    mass: FiniteMeasure,
}

impl JointDistribution {
    /// A probability distribution over `hypotheses x observations`.
    pub fn new(hypotheses: usize, observations: usize, mass: Vec<f64>) -> Result<Self> {
        validate_joint(hypotheses, observations, &mass, true)?;
        Ok(Self { hypotheses, observations, mass: FiniteMeasure::probability(mass)? })
    }

    /// A nonnegative measure over `hypotheses x observations`.
    pub fn measure(hypotheses: usize, observations: usize, mass: Vec<f64>) -> Result<Self> {
        validate_joint(hypotheses, observations, &mass, false)?;
        Ok(Self { hypotheses, observations, mass: FiniteMeasure::measure(mass)? })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let (m, n, flat) = flatten_rows(rows)?;
        Self::new(m, n, flat)
    }

    /// `P(v, y) = prior(v) * likelihood[v][y]`.
    pub fn from_prior_likelihood(prior: &[f64], likelihood: &[Vec<f64>]) -> Result<Self> {
        let prior_measure = FiniteMeasure::probability(prior.to_vec())?;
        let (m, n, flat) = flatten_rows(likelihood)?;
        if m != prior_measure.len() {
            return Err(Error::SizeMismatch { expected: prior_measure.len(), found: m });
        }
        validate_kernel(m, n, &flat)?;
        let mass = flat
            .chunks(n)
            .zip(prior)
            .flat_map(|(row, &pv)| row.iter().map(move |w| pv * w))
            .collect();
        Self::new(m, n, mass)
    }

    pub fn num_hypotheses(&self) -> usize {
        self.hypotheses
    }

    pub fn num_observations(&self) -> usize {
        self.observations
    }

    pub fn get(&self, v: usize, y: usize) -> f64 {
        self.mass.weights[v * self.observations + y]
    }

    pub fn row(&self, v: usize) -> &[f64] {
        let start = v * self.observations;
        &self.mass.weights[start..start + self.observations]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.mass.weights.chunks(self.observations)
    }

    /// The mass as a measure over the flattened alphabet `V x Y`.
    pub fn flat(&self) -> &FiniteMeasure {
        &self.mass
    }

    pub fn is_normalized(&self) -> bool {
        self.mass.normalized
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        validate_joint(self.hypotheses, self.observations, &self.mass.weights, self.mass.normalized)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub(crate) fn require_probability(&self) -> Result<()> {
        self.mass.require_probability()
    }

    pub(crate) fn require_shape(&self, hypotheses: usize, observations: usize) -> Result<()> {
        if self.hypotheses != hypotheses {
            return Err(Error::SizeMismatch { expected: hypotheses, found: self.hypotheses });
        }
        if self.observations != observations {
            return Err(Error::SizeMismatch { expected: observations, found: self.observations });
        }
        Ok(())
    }
}

fn flatten_rows(rows: &[Vec<f64>]) -> Result<(usize, usize, Vec<f64>)> {
    let m = rows.len();
    if m == 0 {
        return Err(Violation::Empty.into());
    }
    let n = rows[0].len();
    let mut flat = Vec::with_capacity(m * n);
    for row in rows {
        if row.len() != n {
            return Err(Error::SizeMismatch { expected: n, found: row.len() });
        }
        flat.extend_from_slice(row);
    }
    Ok((m, n, flat))
}

/// Returns `(P_V, P_Y)`, the row and column sums of a joint distribution.
pub fn marginals(joint: &JointDistribution) -> Result<(FiniteMeasure, FiniteMeasure)> {
    joint.require_probability()?;
    let prior: Vec<f64> = joint.rows().map(|r| r.iter().sum()).collect();
    let mut output = vec![0.0; joint.observations];
    for row in joint.rows() {
        for (acc, w) in output.iter_mut().zip(row) {
            *acc += w;
        }
    }
    Ok((FiniteMeasure::probability(prior)?, FiniteMeasure::probability(output)?))
}

/// Product measure `Q_V x Q_Y`; normalized only if both factors are.
pub fn product(qv: &FiniteMeasure, qy: &FiniteMeasure) -> JointDistribution {
    let mass: Vec<f64> = qv
        .weights
        .iter()
        .flat_map(|&a| qy.weights.iter().map(move |&b| a * b))
        .collect();
    JointDistribution {
        hypotheses: qv.len(),
        observations: qy.len(),
        mass: FiniteMeasure { weights: mass, normalized: qv.normalized && qy.normalized, labels: None },
    }
}

/// Row-stochastic map from `inputs` to `outputs`; row `x` holds `K(. | x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomizedKernel {
    inputs: usize,
    outputs: usize,
    rows: Vec<f64>,
}

impl RandomizedKernel {
    pub fn new(inputs: usize, outputs: usize, rows: Vec<f64>) -> Result<Self> {
        validate_kernel(inputs, outputs, &rows)?;
        if let Some(index) = rows.iter().position(|&w| w > 1.0 + TOL) {
            return Err(Violation::RowSum { row: index / outputs, sum: rows[index] }.into());
        }
        Ok(Self { inputs, outputs, rows })
    }

    /// Puts all mass of row `x` on output `choice[x]`.
    pub fn deterministic(outputs: usize, choice: &[usize]) -> Result<Self> {
        let mut rows = vec![0.0; choice.len() * outputs];
        for (x, &c) in choice.iter().enumerate() {
            if c >= outputs {
                return Err(Error::SizeMismatch { expected: outputs, found: c + 1 });
            }
            rows[x * outputs + c] = 1.0;
        }
        Self::new(choice.len(), outputs, rows)
    }

    pub fn uniform(inputs: usize, outputs: usize) -> Result<Self> {
        if outputs == 0 {
            return Err(Violation::Empty.into());
        }
        Self::new(inputs, outputs, vec![1.0 / outputs as f64; inputs * outputs])
    }

    /// Splits each row uniformly over the given set of outputs.
    pub(crate) fn uniform_over_sets(outputs: usize, sets: &[Vec<usize>]) -> Self {
        let mut rows = vec![0.0; sets.len() * outputs];
        for (x, set) in sets.iter().enumerate() {
            let share = 1.0 / set.len() as f64;
            for &o in set {
                rows[x * outputs + o] = share;
            }
        }
        Self { inputs: sets.len(), outputs, rows }
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs
    }

    pub fn get(&self, input: usize, output: usize) -> f64 {
        self.rows[input * self.outputs + output]
    }

    pub fn row(&self, input: usize) -> &[f64] {
        &self.rows[input * self.outputs..(input + 1) * self.outputs]
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        validate_kernel(self.inputs, self.outputs, &self.rows)
    }
}

/// On-disk form of a joint distribution. Either `V`/`Y`/`pvy` or
/// `prior`/`likelihood` (rows indexed by hypothesis) must be present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct JointFile {
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    pub hypotheses: Option<usize>,
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    pub observations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pvy: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub likelihood: Option<Vec<Vec<f64>>>,
}

impl JointFile {
    pub fn to_joint(&self) -> Result<JointDistribution> {
        match (&self.pvy, &self.prior, &self.likelihood) {
            (Some(rows), None, None) => {
                let joint = JointDistribution::from_rows(rows)?;
                if let Some(v) = self.hypotheses {
                    if v != joint.num_hypotheses() {
                        return Err(Error::SizeMismatch { expected: v, found: joint.num_hypotheses() });
                    }
                }
                if let Some(y) = self.observations {
                    if y != joint.num_observations() {
                        return Err(Error::SizeMismatch { expected: y, found: joint.num_observations() });
                    }
                }
                Ok(joint)
            }
            (None, Some(prior), Some(likelihood)) => {
                JointDistribution::from_prior_likelihood(prior, likelihood)
            }
            _ => Err(Violation::Empty.into()),
        }
    }
}

impl From<&JointDistribution> for JointFile {
    fn from(joint: &JointDistribution) -> Self {
        Self {
            hypotheses: Some(joint.num_hypotheses()),
            observations: Some(joint.num_observations()),
            pvy: Some(joint.to_rows()),
            prior: None,
            likelihood: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::ternary_example;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOL
    }

    #[test]
    fn uniform_three_point_is_valid() {
        assert_eq!(validate_weights(&[1.0 / 3.0; 3], true), Ok(()));
    }

    #[test]
    fn overfull_normalized_weights_report_sum() {
        let err = validate_weights(&[0.5, 0.6], true).unwrap_err();
        assert_eq!(err.to_string(), "sum=1.1");
    }

    #[test]
    fn negative_weight_reported_with_index() {
        let err = validate_weights(&[0.5, -0.1, 0.6], true).unwrap_err();
        assert_eq!(err.to_string(), "negative weight at index 1");
    }

    #[test]
    fn empty_and_nonfinite_rejected() {
        assert_eq!(validate_weights(&[], false), Err(Violation::Empty));
        assert_eq!(validate_weights(&[0.2, f64::NAN], false), Err(Violation::NonFinite { index: 1 }));
    }

    #[test]
    fn ternary_marginals() {
        let joint = ternary_example();
        let (pv, py) = marginals(&joint).unwrap();
        for v in 0..3 {
            assert!(close(pv.get(v), 1.0 / 3.0));
        }
        let expected = [1.0 / 3.0, 0.94 / 3.0, 1.06 / 3.0];
        for (y, e) in expected.iter().enumerate() {
            assert!(close(py.get(y), *e), "P_Y({y}) = {}", py.get(y));
        }
    }

    #[test]
    fn identity_channel_uniform_output() {
        let joint = JointDistribution::from_prior_likelihood(
            &[0.25; 4],
            &(0..4).map(|v| (0..4).map(|y| if v == y { 1.0 } else { 0.0 }).collect()).collect::<Vec<_>>(),
        )
        .unwrap();
        let (_, py) = marginals(&joint).unwrap();
        assert!(py.weights().iter().all(|&w| close(w, 0.25)));
    }

    #[test]
    fn product_of_uniforms() {
        let q = product(&FiniteMeasure::uniform(3).unwrap(), &FiniteMeasure::uniform(3).unwrap());
        assert!(q.is_normalized());
        assert!(q.flat().weights().iter().all(|&w| close(w, 1.0 / 9.0)));
    }

    #[test]
    fn counting_measure_product_repeats_rows() {
        let qy = FiniteMeasure::probability(vec![0.2, 0.5, 0.3]).unwrap();
        let q = product(&FiniteMeasure::counting(4).unwrap(), &qy);
        assert!(!q.is_normalized());
        for row in q.rows() {
            assert_eq!(row, qy.weights());
        }
        assert!(close(q.flat().total(), 4.0));
    }

    #[test]
    fn degenerate_prior_product() {
        let q = product(
            &FiniteMeasure::probability(vec![1.0, 0.0]).unwrap(),
            &FiniteMeasure::probability(vec![0.3, 0.7]).unwrap(),
        );
        assert_eq!(q.to_rows(), vec![vec![0.3, 0.7], vec![0.0, 0.0]]);
    }

    #[test]
    fn kernel_rows_must_sum_to_one() {
        assert!(RandomizedKernel::new(2, 2, vec![0.5, 0.5, 0.7, 0.2]).is_err());
        assert!(RandomizedKernel::new(2, 2, vec![0.5, 0.5, 0.0, 1.0]).is_ok());
        assert!(RandomizedKernel::new(1, 2, vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn json_round_trip_both_forms() {
        let explicit: JointFile =
            serde_json::from_str(r#"{"V": 2, "Y": 2, "pvy": [[0.45, 0.05], [0.05, 0.45]]}"#).unwrap();
        let factored: JointFile =
            serde_json::from_str(r#"{"prior": [0.5, 0.5], "likelihood": [[0.9, 0.1], [0.1, 0.9]]}"#).unwrap();
        let a = explicit.to_joint().unwrap();
        let b = factored.to_joint().unwrap();
        for (x, y) in a.flat().weights().iter().zip(b.flat().weights()) {
            assert!(close(*x, *y));
        }
        let emitted = serde_json::to_value(JointFile::from(&a)).unwrap();
        assert_eq!(emitted["V"], 2);
        assert_eq!(emitted["pvy"][1][1], 0.45);
    }

    #[test]
    fn json_shape_mismatch_rejected() {
        let file: JointFile = serde_json::from_str(r#"{"V": 3, "Y": 2, "pvy": [[0.5, 0.0], [0.0, 0.5]]}"#).unwrap();
        assert!(matches!(file.to_joint(), Err(Error::SizeMismatch { .. })));
        let empty: JointFile = serde_json::from_str("{}").unwrap();
        assert!(empty.to_joint().is_err());
    }
}
