//! Bayesian M-ary hypothesis testing.
//!
//! The minimum error `ε̄ = 1 - Σ_y max_v P(v, y)` is computed directly by MAP
//! decoding and, equivalently, as
//!
//! * the type-0 error `α_{1/M}(P_VY, U_V x Q_Y)` of a binary test against a
//!   product measure with uniform `U_V`, and
//! * the spectrum supremum `sup_γ { P[P_VY(V,Y) / Q_Y(Y) <= γ] - γ }`,
//!
//! both of which lower-bound `ε̄` for every `Q_Y` and reach it at
//! `Q*_Y(y) = max_v P(v, y) / μ`. For an arbitrary decoder the same
//! construction works with a joint auxiliary `Q_VY` and the decoder's own
//! type-1 budget.

use serde::Serialize;

use crate::binary::{alpha_beta, NpSolution};
use crate::error::{Error, Result};
use crate::measures::{product, FiniteMeasure, JointDistribution, RandomizedKernel};
use crate::spectrum::{GammaSweep, Spectrum, RATIO_TOL};

/// MAP decoding of a joint distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSolution {
    pub error: f64,
    /// `Σ_y max_v P(v, y)`, equal to `1 - error`.
    pub mu: f64,
    pub qy_star: FiniteMeasure,
    /// Uniform over the tie set `S(y)` of each observation.
    pub decoder: RandomizedKernel,
    pub tie_sets: Vec<Vec<usize>>,
}

/// Decoding scores `q(v, y)`, stored row-major by hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricMatrix {
    hypotheses: usize,
    observations: usize,
    values: Vec<f64>,
}

impl MetricMatrix {
    pub fn new(hypotheses: usize, observations: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != hypotheses * observations {
            return Err(Error::SizeMismatch { expected: hypotheses * observations, found: values.len() });
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::OutOfRange { name: "metric", value: bad });
        }
        Ok(Self { hypotheses, observations, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::SizeMismatch { expected: n, found: rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0) });
        }
        Self::new(m, n, rows.concat())
    }

    /// The MAP metric `q(v, y) = P(v, y)`.
    pub fn from_joint(joint: &JointDistribution) -> Self {
        Self {
            hypotheses: joint.num_hypotheses(),
            observations: joint.num_observations(),
            values: joint.flat().weights().to_vec(),
        }
    }

    pub fn get(&self, v: usize, y: usize) -> f64 {
        self.values[v * self.observations + y]
    }

    pub fn num_hypotheses(&self) -> usize {
        self.hypotheses
    }

    pub fn num_observations(&self) -> usize {
        self.observations
    }

    fn column_max(&self, y: usize) -> f64 {
        (0..self.hypotheses).map(|v| self.get(v, y)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Hypotheses within a relative 1e-9 of the column maximum.
    fn argmax_set(&self, y: usize) -> Vec<usize> {
        let best = self.column_max(y);
        (0..self.hypotheses)
            .filter(|&v| best - self.get(v, y) <= RATIO_TOL * best.abs())
            .collect()
    }
}

pub fn map_solve(joint: &JointDistribution) -> Result<MapSolution> {
    joint.require_probability()?;
    let metric = MetricMatrix::from_joint(joint);
    let m = joint.num_hypotheses();
    let mut column_max = Vec::with_capacity(joint.num_observations());
    let mut tie_sets = Vec::with_capacity(joint.num_observations());
    for y in 0..joint.num_observations() {
        let best = metric.column_max(y);
        column_max.push(best);
        // a zero column is never observed; every hypothesis ties there
        tie_sets.push(if best > 0.0 { metric.argmax_set(y) } else { (0..m).collect() });
    }
    let mu: f64 = column_max.iter().sum();
    let qy_star = FiniteMeasure::probability(column_max.iter().map(|w| w / mu).collect())?;
    let decoder = RandomizedKernel::uniform_over_sets(m, &tie_sets);
    Ok(MapSolution { error: 1.0 - mu, mu, qy_star, decoder, tie_sets })
}

fn check_decoder(joint: &JointDistribution, decoder: &RandomizedKernel) -> Result<()> {
    if decoder.num_inputs() != joint.num_observations() {
        return Err(Error::SizeMismatch { expected: joint.num_observations(), found: decoder.num_inputs() });
    }
    if decoder.num_outputs() != joint.num_hypotheses() {
        return Err(Error::SizeMismatch { expected: joint.num_hypotheses(), found: decoder.num_outputs() });
    }
    Ok(())
}

/// `Σ_{v,y} Q(v, y) K(v | y)`: the mass a decoder assigns to the correct
/// hypothesis under `Q`.
fn decoder_hit_mass(q: &JointDistribution, decoder: &RandomizedKernel) -> f64 {
    (0..q.num_hypotheses())
        .flat_map(|v| (0..q.num_observations()).map(move |y| (v, y)))
        .map(|(v, y)| q.get(v, y) * decoder.get(y, v))
        .sum()
}

/// `Pr[V̂ != V]` for the given decoder.
pub fn decoder_error(joint: &JointDistribution, decoder: &RandomizedKernel) -> Result<f64> {
    check_decoder(joint, decoder)?;
    Ok(1.0 - decoder_hit_mass(joint, decoder))
}

fn check_output_measure(joint: &JointDistribution, qy: &FiniteMeasure) -> Result<()> {
    joint.require_probability()?;
    qy.require_len(joint.num_observations())?;
    qy.validate()?;
    Ok(())
}

/// The Neyman-Pearson test behind [`theorem1_alpha_form`].
pub fn theorem1_test(joint: &JointDistribution, qy: &FiniteMeasure) -> Result<NpSolution> {
    check_output_measure(joint, qy)?;
    let m = joint.num_hypotheses();
    let auxiliary = product(&FiniteMeasure::uniform(m)?, qy);
    alpha_beta(joint.flat(), auxiliary.flat(), 1.0 / m as f64)
}

/// `α_{1/M}(P_VY, U_V x Q_Y)`; at most `ε̄`, with equality at `Q*_Y`.
pub fn theorem1_alpha_form(joint: &JointDistribution, qy: &FiniteMeasure) -> Result<f64> {
    Ok(theorem1_test(joint, qy)?.alpha)
}

/// Ratios `P_VY(v, y) / Q_Y(y)` over the flattened alphabet.
pub(crate) fn output_spectrum(joint: &JointDistribution, qy: &FiniteMeasure) -> Spectrum {
    let denominators: Vec<f64> = (0..joint.num_hypotheses()).flat_map(|_| qy.weights().iter().copied()).collect();
    Spectrum::new(joint.flat().weights(), &denominators)
}

/// `P[P_VY(V, Y) / Q_Y(Y) <= γ]` under `P_VY`.
pub fn spectrum_tail(joint: &JointDistribution, qy: &FiniteMeasure, gamma: f64) -> Result<f64> {
    check_output_measure(joint, qy)?;
    Ok(output_spectrum(joint, qy).tail(gamma))
}

/// Full sweep of `P[P_VY / Q_Y <= γ] - γ` over its jump points.
pub fn theorem1_spectrum_sweep(joint: &JointDistribution, qy: &FiniteMeasure) -> Result<GammaSweep> {
    check_output_measure(joint, qy)?;
    Ok(output_spectrum(joint, qy).sweep(|gamma, tail| tail - gamma))
}

/// `sup_γ { P[P_VY / Q_Y <= γ] - γ }` and the smallest maximizing γ.
pub fn theorem1_spectrum_form(joint: &JointDistribution, qy: &FiniteMeasure) -> Result<(f64, f64)> {
    let sweep = theorem1_spectrum_sweep(joint, qy)?;
    Ok((sweep.best_value, sweep.best_gamma))
}

fn check_auxiliary(joint: &JointDistribution, qvy: &JointDistribution, decoder: &RandomizedKernel) -> Result<()> {
    joint.require_probability()?;
    qvy.require_probability()?;
    qvy.require_shape(joint.num_hypotheses(), joint.num_observations())?;
    check_decoder(joint, decoder)
}

/// `(α_{ε₁}(P_VY, Q_VY), ε₁)` with `ε₁ = Σ Q_VY(v, y) K(v|y)`; the first
/// entry lower-bounds the decoder's error and equals it at `Q_VY = P_VY`.
pub fn theorem2_alpha_form(
    joint: &JointDistribution,
    qvy: &JointDistribution,
    decoder: &RandomizedKernel,
) -> Result<(f64, f64)> {
    check_auxiliary(joint, qvy, decoder)?;
    let eps1 = decoder_hit_mass(qvy, decoder);
    let solution = alpha_beta(joint.flat(), qvy.flat(), eps1)?;
    Ok((solution.alpha, eps1))
}

/// `sup_γ { P[P_VY / Q_VY <= γ] - γ ε₁ }` and the smallest maximizing γ.
pub fn theorem2_spectrum_form(
    joint: &JointDistribution,
    qvy: &JointDistribution,
    decoder: &RandomizedKernel,
) -> Result<(f64, f64)> {
    check_auxiliary(joint, qvy, decoder)?;
    let eps1 = decoder_hit_mass(qvy, decoder);
    let sweep = Spectrum::new(joint.flat().weights(), qvy.flat().weights()).sweep(|gamma, tail| tail - gamma * eps1);
    Ok((sweep.best_value, sweep.best_gamma))
}

/// Decides for the largest `q(v, y)`, splitting ties uniformly.
pub fn max_metric_decoder(metric: &MetricMatrix) -> RandomizedKernel {
    let sets: Vec<Vec<usize>> = (0..metric.observations).map(|y| metric.argmax_set(y)).collect();
    RandomizedKernel::uniform_over_sets(metric.hypotheses, &sets)
}

/// The auxiliary `Q(v, y) ∝ P(v, y) max_v' q(v', y) / q(v, y)` under which the
/// maximum-metric decoder is Neyman-Pearson optimal, with its normalizer `μ'`.
///
/// Entries with `P(v, y) = 0` get zero mass regardless of `q`.
pub fn corollary1_q(joint: &JointDistribution, metric: &MetricMatrix) -> Result<(JointDistribution, f64)> {
    joint.require_probability()?;
    if metric.hypotheses != joint.num_hypotheses() || metric.observations != joint.num_observations() {
        return Err(Error::SizeMismatch {
            expected: joint.num_hypotheses() * joint.num_observations(),
            found: metric.values.len(),
        });
    }
    let n = joint.num_observations();
    let column_max: Vec<f64> = (0..n).map(|y| metric.column_max(y)).collect();
    let mut weights = Vec::with_capacity(metric.values.len());
    for v in 0..joint.num_hypotheses() {
        for y in 0..n {
            let p = joint.get(v, y);
            if p == 0.0 {
                weights.push(0.0);
                continue;
            }
            let q = metric.get(v, y);
            if !(q > 0.0) {
                return Err(Error::NonPositiveMetric { hypothesis: v, observation: y, value: q });
            }
            weights.push(p * column_max[y] / q);
        }
    }
    let mu_prime: f64 = weights.iter().sum();
    let mass = weights.into_iter().map(|w| w / mu_prime).collect();
    Ok((JointDistribution::new(joint.num_hypotheses(), n, mass)?, mu_prime))
}

/// `α_1(P_VY, C_V x Q*_Y)` with `C_V` the counting measure; equals `ε̄`.
pub fn remark1_counting(joint: &JointDistribution) -> Result<f64> {
    let map = map_solve(joint)?;
    let auxiliary = product(&FiniteMeasure::counting(joint.num_hypotheses())?, &map.qy_star);
    Ok(alpha_beta(joint.flat(), auxiliary.flat(), 1.0)?.alpha)
}
