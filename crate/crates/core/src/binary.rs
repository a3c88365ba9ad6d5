//! Binary hypothesis testing: error probabilities of a test, the Bayes
//! error, the exact Neyman-Pearson trade-off `α_β(P, Q)` and the two
//! threshold relaxations of it.
//!
//! A binary test is given by its acceptance vector `t(y) = T(0|y)`, the
//! probability of deciding for `P` after observing `y`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{FiniteMeasure, TOL};
use crate::spectrum::{at_most, ratio, ratios_tie};

/// A Neyman-Pearson test together with the errors it achieves.
///
/// `acceptance[y]` is 1 above the threshold ratio `gamma`, `p` on the tie
/// group at `gamma`, and 0 below. Symbols with an infinite ratio
/// (`Q(y) = 0 < P(y)`) are always accepted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NpSolution {
    pub gamma: f64,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub acceptance: Vec<f64>,
}

/// A bound that is valid only when its side condition holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalBound {
    pub value: f64,
    pub condition_ok: bool,
}

fn check_acceptance(len: usize, acceptance: &[f64]) -> Result<()> {
    if acceptance.len() != len {
        return Err(Error::SizeMismatch { expected: len, found: acceptance.len() });
    }
    if let Some(&bad) = acceptance.iter().find(|&&t| !(0.0..=1.0).contains(&t)) {
        return Err(Error::OutOfRange { name: "acceptance", value: bad });
    }
    Ok(())
}

/// `Σ_y P(y) (1 - t(y))`: probability of rejecting `P` when it is true.
pub fn type0_error(p: &FiniteMeasure, acceptance: &[f64]) -> Result<f64> {
    check_acceptance(p.len(), acceptance)?;
    Ok(p.weights().iter().zip(acceptance).map(|(w, t)| w * (1.0 - t)).sum())
}

/// `Σ_y Q(y) t(y)`. For an unnormalized `Q` this is a measure and may exceed 1.
pub fn type1_error(q: &FiniteMeasure, acceptance: &[f64]) -> Result<f64> {
    check_acceptance(q.len(), acceptance)?;
    Ok(q.weights().iter().zip(acceptance).map(|(w, t)| w * t).sum())
}

/// Smallest `π ε₀ + (1-π) ε₁` over all tests, i.e. `Σ_y min(π P(y), (1-π) Q(y))`.
pub fn bayes_binary_error(p: &FiniteMeasure, q: &FiniteMeasure, prior0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&prior0) {
        return Err(Error::OutOfRange { name: "prior0", value: prior0 });
    }
    p.require_probability()?;
    q.require_probability()?;
    q.require_len(p.len())?;
    Ok(p.weights()
        .iter()
        .zip(q.weights())
        .map(|(a, b)| (prior0 * a).min((1.0 - prior0) * b))
        .sum())
}

/// Acceptance vector of the likelihood-ratio test with threshold `gamma` and
/// tie randomization `tie_p`.
pub fn np_test(p: &FiniteMeasure, q: &FiniteMeasure, gamma: f64, tie_p: f64) -> Result<Vec<f64>> {
    q.require_len(p.len())?;
    if !(0.0..=1.0).contains(&tie_p) {
        return Err(Error::OutOfRange { name: "p", value: tie_p });
    }
    Ok(p.weights()
        .iter()
        .zip(q.weights())
        .map(|(&a, &b)| {
            if a == 0.0 && b == 0.0 {
                return 0.0;
            }
            let r = if a == 0.0 { 0.0 } else { ratio(a, b) };
            if ratios_tie(r, gamma) {
                tie_p
            } else if r > gamma {
                1.0
            } else {
                0.0
            }
        })
        .collect())
}

struct RatioGroup {
    ratio: f64,
    members: Vec<usize>,
    q_mass: f64,
}

/// Finite-ratio symbols grouped by tied ratio, largest ratio first; the
/// representative ratio of a group is its largest member.
fn groups_descending(p: &[f64], q: &[f64]) -> (Vec<usize>, Vec<RatioGroup>) {
    let mut infinite = Vec::new();
    let mut finite: Vec<(f64, usize)> = Vec::new();
    for (y, (&a, &b)) in p.iter().zip(q).enumerate() {
        match (a > 0.0, b > 0.0) {
            (false, false) => {}
            (true, false) => infinite.push(y),
            _ => finite.push((a / b, y)),
        }
    }
    finite.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));

    let mut groups: Vec<RatioGroup> = Vec::new();
    for (r, y) in finite {
        match groups.last_mut() {
            Some(g) if ratios_tie(g.ratio, r) => {
                g.members.push(y);
                g.q_mass += q[y];
            }
            _ => groups.push(RatioGroup { ratio: r, members: vec![y], q_mass: q[y] }),
        }
    }
    (infinite, groups)
}

/// `α_β(P, Q)`: the smallest type-0 error among tests whose type-1 error is
/// at most `beta`, with a Neyman-Pearson test attaining it.
///
/// Ratio groups are accepted in decreasing order until the next one would
/// overrun the budget; that group is accepted with probability
/// `(β - spent) / Q(group)`. When the budget is exhausted exactly (within
/// 1e-9) by a whole group, the test reports `p = 1` at that group's ratio.
/// `Q` may be any finite measure; `P` must be a probability.
pub fn alpha_beta(p: &FiniteMeasure, q: &FiniteMeasure, beta: f64) -> Result<NpSolution> {
    if !(beta >= 0.0) {
        return Err(Error::OutOfRange { name: "beta", value: beta });
    }
    p.require_probability()?;
    q.require_len(p.len())?;

    let (infinite, groups) = groups_descending(p.weights(), q.weights());
    let mut acceptance = vec![0.0; p.len()];
    for &y in &infinite {
        acceptance[y] = 1.0;
    }

    let slack = TOL * beta.max(1.0);
    let mut spent = 0.0;
    let mut threshold: Option<(f64, f64)> = None;
    for g in &groups {
        let remaining = beta - spent;
        if g.q_mass <= remaining + slack {
            for &y in &g.members {
                acceptance[y] = 1.0;
            }
            spent += g.q_mass;
            if beta - spent <= slack {
                threshold = Some((g.ratio, 1.0));
                break;
            }
        } else {
            let tie_p = (remaining / g.q_mass).clamp(0.0, 1.0);
            for &y in &g.members {
                acceptance[y] = tie_p;
            }
            threshold = Some((g.ratio, tie_p));
            break;
        }
    }

    let (gamma, tie_p) = match threshold {
        Some(t) => t,
        None => {
            // the whole alphabet fits in the budget
            acceptance.iter_mut().for_each(|t| *t = 1.0);
            (groups.last().map_or(0.0, |g| g.ratio), 1.0)
        }
    };

    let alpha = type0_error(p, &acceptance)?;
    let beta = type1_error(q, &acceptance)?;
    Ok(NpSolution { gamma, p: tie_p, alpha, beta, acceptance })
}

/// `P[P/Q <= γ'] - γ' β`, a lower bound on `α_β(P, Q)` for every `γ' >= 0`.
pub fn relaxation_bound(p: &FiniteMeasure, q: &FiniteMeasure, beta: f64, gamma_p: f64) -> Result<f64> {
    if !(gamma_p >= 0.0) {
        return Err(Error::OutOfRange { name: "gamma'", value: gamma_p });
    }
    q.require_len(p.len())?;
    let tail: f64 = p
        .weights()
        .iter()
        .zip(q.weights())
        .filter(|(&a, &b)| a > 0.0 && at_most(ratio(a, b), gamma_p))
        .map(|(a, _)| a)
        .sum();
    Ok(tail - gamma_p * beta)
}

/// `(1 - γ' β) P[P/Q <= γ']`, a lower bound on `α_β(P, Q)` provided
/// `β P[P/Q > γ'] <= Q[P/Q > γ']`.
///
/// The side condition is checked in cross-multiplied form so that an empty
/// upper tail is handled without dividing by zero. The value is returned
/// whether or not the condition holds.
pub fn poor_verdu_lemma_bound(
    p: &FiniteMeasure,
    q: &FiniteMeasure,
    beta: f64,
    gamma_p: f64,
) -> Result<ConditionalBound> {
    if !(gamma_p >= 0.0) {
        return Err(Error::OutOfRange { name: "gamma'", value: gamma_p });
    }
    q.require_len(p.len())?;
    let (mut p_low, mut p_high, mut q_high) = (0.0, 0.0, 0.0);
    for (&a, &b) in p.weights().iter().zip(q.weights()) {
        if a == 0.0 {
            continue;
        }
        if at_most(ratio(a, b), gamma_p) {
            p_low += a;
        } else {
            p_high += a;
            q_high += b;
        }
    }
    let condition_ok = beta >= 0.0 && beta * p_high <= q_high + TOL * q_high.max(1.0);
    Ok(ConditionalBound { value: (1.0 - gamma_p * beta) * p_low, condition_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::ternary_example;
    use crate::measures::product;

    fn prob(w: &[f64]) -> FiniteMeasure {
        FiniteMeasure::probability(w.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOL
    }

    fn ternary_pair() -> (FiniteMeasure, FiniteMeasure) {
        let p = ternary_example().flat().clone();
        let q = FiniteMeasure::probability(vec![1.0 / 9.0; 9]).unwrap();
        (p, q)
    }

    #[test]
    fn accept_all_and_reject_all() {
        let p = prob(&[0.2, 0.3, 0.5]);
        let q = FiniteMeasure::measure(vec![0.5, 1.0, 2.0]).unwrap();
        assert_eq!(type0_error(&p, &[1.0; 3]).unwrap(), 0.0);
        assert!(close(type1_error(&q, &[1.0; 3]).unwrap(), 3.5));
        assert!(close(type0_error(&p, &[0.0; 3]).unwrap(), 1.0));
        assert_eq!(type1_error(&q, &[0.0; 3]).unwrap(), 0.0);
    }

    #[test]
    fn acceptance_checked() {
        let p = prob(&[0.5, 0.5]);
        assert!(type0_error(&p, &[1.0]).is_err());
        assert!(type0_error(&p, &[1.2, 0.0]).is_err());
    }

    #[test]
    fn ternary_type0_of_threshold_test() {
        let (p, _) = ternary_pair();
        // accept exactly the entries with P_VY(v,y) >= 2/15
        let t: Vec<f64> = p.weights().iter().map(|&w| if w >= 2.0 / 15.0 - 1e-12 { 1.0 } else { 0.0 }).collect();
        assert!(close(type0_error(&p, &t).unwrap(), 0.6));
    }

    #[test]
    fn bayes_error_examples() {
        let p = prob(&[0.9, 0.1]);
        let q = prob(&[0.1, 0.9]);
        assert!(close(bayes_binary_error(&p, &p, 0.5).unwrap(), 0.5));
        assert!(close(bayes_binary_error(&prob(&[1.0, 0.0]), &prob(&[0.0, 1.0]), 0.5).unwrap(), 0.0));
        assert!(close(bayes_binary_error(&p, &q, 0.5).unwrap(), 0.1));
        assert!(bayes_binary_error(&p, &q, 1.5).is_err());
    }

    #[test]
    fn bayes_error_realized_by_np_test() {
        let p = prob(&[0.5, 0.2, 0.2, 0.1]);
        let q = prob(&[0.1, 0.2, 0.3, 0.4]);
        for &pi in &[0.2, 0.5, 0.7] {
            let gamma = (1.0 - pi) / pi;
            for &tie in &[0.0, 0.5, 1.0] {
                let t = np_test(&p, &q, gamma, tie).unwrap();
                let avg = pi * type0_error(&p, &t).unwrap() + (1.0 - pi) * type1_error(&q, &t).unwrap();
                assert!(close(avg, bayes_binary_error(&p, &q, pi).unwrap()), "pi={pi} tie={tie}");
            }
        }
    }

    #[test]
    fn ternary_np_solution() {
        let (p, q) = ternary_pair();
        let sol = alpha_beta(&p, &q, 1.0 / 3.0).unwrap();
        assert!(close(sol.gamma, 1.2), "gamma = {}", sol.gamma);
        assert_eq!(sol.p, 1.0);
        assert!(close(sol.alpha, 0.6));
        assert!(close(sol.beta, 1.0 / 3.0));
    }

    #[test]
    fn identical_hypotheses_trade_linearly() {
        let p = prob(&[0.1, 0.2, 0.3, 0.4]);
        for k in 0..=10 {
            let beta = k as f64 / 10.0;
            assert!(close(alpha_beta(&p, &p, beta).unwrap().alpha, 1.0 - beta));
        }
    }

    #[test]
    fn bsc_shell_value() {
        // 4 uses of BSC(0.1), uniform inputs, tested against uniform outputs at β = 1/4
        let n = 4u32;
        let delta: f64 = 0.1;
        let size = 1usize << n;
        let mut pxy = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                let d = ((x ^ y) as u32).count_ones() as i32;
                pxy.push(delta.powi(d) * (1.0 - delta).powi(n as i32 - d) / size as f64);
            }
        }
        let p = prob(&pxy);
        let q = product(&FiniteMeasure::uniform(size).unwrap(), &FiniteMeasure::uniform(size).unwrap());
        let sol = alpha_beta(&p, q.flat(), 0.25).unwrap();
        let expected = 1.0 - (0.9f64.powi(4) + 0.75 * 4.0 * 0.1 * 0.9f64.powi(3));
        assert!(close(sol.alpha, expected));
        assert!(close(expected, 0.1252));
        assert!(close(sol.p, 0.75));
        assert!(close(sol.gamma, 16.0 * 0.1 * 0.9f64.powi(3)));
    }

    #[test]
    fn zero_budget_and_free_symbols() {
        let p = prob(&[0.3, 0.5, 0.2]);
        let q = FiniteMeasure::measure(vec![0.0, 0.6, 0.4]).unwrap();
        let sol = alpha_beta(&p, &q, 0.0).unwrap();
        assert!(close(sol.alpha, 0.7));
        assert_eq!(sol.acceptance[0], 1.0);
        let all = alpha_beta(&p, &q, 1.0).unwrap();
        assert_eq!(all.alpha, 0.0);
        assert_eq!(all.acceptance, vec![1.0; 3]);
        assert!(alpha_beta(&p, &q, -0.1).is_err());
    }

    #[test]
    fn acceptance_follows_threshold() {
        let p = prob(&[0.4, 0.3, 0.2, 0.1]);
        let q = prob(&[0.1, 0.2, 0.3, 0.4]);
        let sol = alpha_beta(&p, &q, 0.2).unwrap();
        for (y, &t) in sol.acceptance.iter().enumerate() {
            let r = p.get(y) / q.get(y);
            if ratios_tie(r, sol.gamma) {
                assert_eq!(t, sol.p);
            } else if r > sol.gamma {
                assert_eq!(t, 1.0);
            } else {
                assert_eq!(t, 0.0);
            }
        }
        assert!(close(sol.beta, 0.2));
    }

    #[test]
    fn relaxation_examples() {
        let (p, q) = ternary_pair();
        assert_eq!(relaxation_bound(&p, &q, 1.0 / 3.0, 0.0).unwrap(), 0.0);
        assert!(close(relaxation_bound(&p, &q, 1.0 / 3.0, 1.2).unwrap(), 0.6));
        let r = prob(&[0.25, 0.25, 0.5]);
        assert!(close(relaxation_bound(&r, &r, 0.3, 1.0).unwrap(), 0.7));
        assert!(relaxation_bound(&r, &r, 0.3, -1.0).is_err());
    }

    #[test]
    fn poor_verdu_examples() {
        let (p, q) = ternary_pair();
        let b = poor_verdu_lemma_bound(&p, &q, 1.0 / 3.0, 1.2).unwrap();
        assert!(b.condition_ok);
        assert!(close(b.value, 0.6));

        // empty upper tail: condition holds for any β
        let big = poor_verdu_lemma_bound(&p, &q, 0.9, 10.0).unwrap();
        assert!(big.condition_ok);
        assert!(close(big.value, 1.0 - 9.0));

        // β above Q[ratio > γ'] / P[ratio > γ']
        let tight = poor_verdu_lemma_bound(&p, &q, 0.9, 1.0).unwrap();
        assert!(!tight.condition_ok);
        assert!(tight.value.is_finite());
    }
}
