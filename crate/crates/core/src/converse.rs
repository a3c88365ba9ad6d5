//! Classical converse bounds on the M-ary error probability, each a
//! weakening of the exact characterizations in [`crate::mary`].
//!
//! All γ-optimizations are exact sweeps over the jump points of the relevant
//! likelihood ratio; no grid is involved.

use serde::Serialize;

use crate::binary::{alpha_beta, poor_verdu_lemma_bound, ConditionalBound};
use crate::error::{Error, Result};
use crate::mary::{map_solve, output_spectrum, theorem1_spectrum_sweep};
use crate::measures::{marginals, product, FiniteMeasure, JointDistribution};
use crate::spectrum::{GammaSweep, Spectrum};

/// Verdú-Han bound `sup_γ { P[P_VY / Q_Y <= γ] - γ }`. `None` selects the
/// output marginal `P_Y`.
pub fn verdu_han(joint: &JointDistribution, qy: Option<&FiniteMeasure>) -> Result<GammaSweep> {
    match qy {
        Some(qy) => theorem1_spectrum_sweep(joint, qy),
        None => {
            let (_, py) = marginals(joint)?;
            theorem1_spectrum_sweep(joint, &py)
        }
    }
}

fn positive_prior(joint: &JointDistribution) -> Result<FiniteMeasure> {
    let (prior, _) = marginals(joint)?;
    if let Some(v) = prior.weights().iter().position(|&w| w <= 0.0) {
        return Err(Error::ZeroPrior { hypothesis: v });
    }
    Ok(prior)
}

/// Wolfowitz bound `sup_γ min_v { P[P_VY(v, Y) / Q_Y(Y) <= γ | V = v] - γ }`.
pub fn wolfowitz(joint: &JointDistribution, qy: &FiniteMeasure) -> Result<GammaSweep> {
    let prior = positive_prior(joint)?;
    qy.require_len(joint.num_observations())?;
    qy.validate()?;

    // conditional spectra of the joint ratio P_VY(v, y) / Q_Y(y) under P_{Y|V=v}
    let conditional: Vec<Spectrum> = (0..joint.num_hypotheses())
        .map(|v| {
            let pv = prior.get(v);
            let cond: Vec<f64> = joint.row(v).iter().map(|w| w / pv).collect();
            let scaled_q: Vec<f64> = qy.weights().iter().map(|w| w / pv).collect();
            Spectrum::new(&cond, &scaled_q)
        })
        .collect();

    let global = output_spectrum(joint, qy);
    let mut gammas = vec![0.0];
    gammas.extend_from_slice(global.jumps());
    let values = gammas
        .iter()
        .map(|&g| conditional.iter().map(|s| s.tail(g)).fold(f64::INFINITY, f64::min) - g)
        .collect();
    Ok(GammaSweep::from_points(gammas, values, None))
}

/// Poor-Verdú bound `(1 - γ) P[P_VY / Q_Y <= γ]` with its side condition
/// `Σ P_VY 1{ratio > γ} <= Σ Q_Y 1{ratio > γ}`.
pub fn poor_verdu(joint: &JointDistribution, qy: &FiniteMeasure, gamma: f64) -> Result<ConditionalBound> {
    joint.require_probability()?;
    qy.require_len(joint.num_observations())?;
    let m = joint.num_hypotheses();
    let auxiliary = product(&FiniteMeasure::uniform(m)?, qy);
    poor_verdu_lemma_bound(joint.flat(), auxiliary.flat(), 1.0 / m as f64, gamma * m as f64)
}

/// Poor-Verdú values at every jump point; `sweep.best_*` ranges over the
/// points whose side condition holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoorVerduSweep {
    pub sweep: GammaSweep,
    pub condition_ok: Vec<bool>,
}

pub fn poor_verdu_sweep(joint: &JointDistribution, qy: &FiniteMeasure) -> Result<PoorVerduSweep> {
    joint.require_probability()?;
    qy.require_len(joint.num_observations())?;
    let mut gammas = vec![0.0];
    gammas.extend_from_slice(output_spectrum(joint, qy).jumps());
    let bounds: Vec<ConditionalBound> = gammas.iter().map(|&g| poor_verdu(joint, qy, g)).collect::<Result<_>>()?;
    let condition_ok: Vec<bool> = bounds.iter().map(|b| b.condition_ok).collect();
    let values = bounds.iter().map(|b| b.value).collect();
    let sweep = GammaSweep::from_points(gammas, values, Some(&condition_ok));
    Ok(PoorVerduSweep { sweep, condition_ok })
}

/// `max_γ (1 - γ) P[P_VY / Q*_Y <= γ]`, which equals `ε̄`.
pub fn tight_poor_verdu(joint: &JointDistribution) -> Result<GammaSweep> {
    let map = map_solve(joint)?;
    Ok(output_spectrum(joint, &map.qy_star).sweep(|gamma, tail| (1.0 - gamma) * tail))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BankOfTests {
    pub value: f64,
    /// `Q_V̂(v) = Σ_y Q_Y(y) P_MAP(v | y)`.
    pub budgets: Vec<f64>,
    /// `α_{Q_V̂(v)}(P_{Y|V=v}, Q_Y)` per hypothesis.
    pub alphas: Vec<f64>,
}

/// `Σ_v P_V(v) α_{Q_V̂(v)}(P_{Y|V=v}, Q_Y)`, one binary test per hypothesis
/// with budgets induced by the MAP decoder.
///
/// MAP ties are split uniformly. On the tie set of `y` every tied hypothesis
/// has the same ratio `P_{Y|V}(y|v) / Q*_Y(y) = μ / P_V(v)`, so any other
/// tie-break moves budget inside one ratio group and the value at `Q*_Y` is
/// unchanged.
pub fn bank_of_tests(joint: &JointDistribution, qy: &FiniteMeasure) -> Result<BankOfTests> {
    let prior = positive_prior(joint)?;
    qy.require_len(joint.num_observations())?;
    qy.validate()?;
    let map = map_solve(joint)?;

    let mut budgets = Vec::with_capacity(joint.num_hypotheses());
    let mut alphas = Vec::with_capacity(joint.num_hypotheses());
    let mut value = 0.0;
    for v in 0..joint.num_hypotheses() {
        let budget: f64 = qy.weights().iter().enumerate().map(|(y, w)| w * map.decoder.get(y, v)).sum();
        let pv = prior.get(v);
        let conditional = FiniteMeasure::probability(joint.row(v).iter().map(|w| w / pv).collect())?;
        let alpha = alpha_beta(&conditional, qy, budget)?.alpha;
        value += pv * alpha;
        budgets.push(budget);
        alphas.push(alpha);
    }
    Ok(BankOfTests { value, budgets, alphas })
}
