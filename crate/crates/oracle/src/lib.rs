//! Brute-force reference solvers.
//!
//! Everything here works on plain slices and shares no code with
//! `metaconverse-core`; the test suites use these functions to certify the
//! production solvers. Nothing in this crate is tuned for speed, and every
//! entry point carries a size guard.

use std::cmp::Ordering;
use std::fmt;

/// Returned when an instance is too large for exhaustive treatment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeGuard {
    pub what: &'static str,
    pub size: u128,
    pub limit: u128,
}

impl fmt::Display for SizeGuard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} exceeds oracle limit {}", self.what, self.size, self.limit)
    }
}

impl std::error::Error for SizeGuard {}

fn guard(what: &'static str, size: u128, limit: u128) -> Result<(), SizeGuard> {
    if size > limit {
        Err(SizeGuard { what, size, limit })
    } else {
        Ok(())
    }
}

/// Smallest type-0 error `min Σ p(y)(1 - t(y))` subject to `Σ q(y) t(y) <= beta`,
/// `0 <= t <= 1`, solved as a fractional knapsack.
///
/// Items are ordered by cross-multiplied likelihood ratio (no division, no
/// tie grouping) and filled greedily. The resulting acceptance vector is then
/// checked for improving exchanges; a violation panics, since it would mean
/// the greedy fill itself is wrong.
pub fn np_oracle(p: &[f64], q: &[f64], beta: f64) -> Result<f64, SizeGuard> {
    assert_eq!(p.len(), q.len(), "p and q must share an alphabet");
    assert!(beta >= 0.0, "beta must be nonnegative");
    guard("alphabet", p.len() as u128, 20)?;

    // symbols with q = 0 cost nothing; keeping them out of the sort leaves
    // a comparator that is a total order on the rest
    let mut order: Vec<usize> = (0..p.len()).filter(|&i| q[i] > 0.0).collect();
    // i before j when p_i/q_i > p_j/q_j, written as p_i q_j > p_j q_i
    order.sort_by(|&i, &j| {
        let lhs = p[i] * q[j];
        let rhs = p[j] * q[i];
        rhs.partial_cmp(&lhs).unwrap_or(Ordering::Equal)
    });

    let mut t: Vec<f64> = q.iter().map(|&qi| if qi == 0.0 { 1.0 } else { 0.0 }).collect();
    let mut remaining = beta;
    for &i in &order {
        let take = (remaining / q[i]).min(1.0).max(0.0);
        t[i] = take;
        remaining = (remaining - take * q[i]).max(0.0);
    }

    verify_no_improving_exchange(p, q, &t, remaining);
    Ok(p.iter().zip(&t).map(|(pi, ti)| pi * (1.0 - ti)).sum())
}

/// Panics if moving type-1 budget between two symbols (or spending leftover
/// budget) would lower the type-0 error of acceptance vector `t`.
pub fn verify_no_improving_exchange(p: &[f64], q: &[f64], t: &[f64], slack: f64) {
    for j in 0..p.len() {
        if t[j] >= 1.0 || p[j] == 0.0 {
            continue;
        }
        if slack > 1e-12 {
            panic!("budget {slack} left unspent while symbol {j} is not fully accepted");
        }
        for i in 0..p.len() {
            if t[i] <= 0.0 || q[i] == 0.0 || i == j {
                continue;
            }
            // moving budget δ from i to j lowers the type-0 error by
            // δ (p_j/q_j - p_i/q_i)
            let movable = (t[i] * q[i]).min((1.0 - t[j]) * q[j]);
            let gain = movable * (p[j] / q[j] - p[i] / q[i]);
            if gain > 1e-12 {
                panic!("exchange {i} -> {j} improves the type-0 error by {gain}");
            }
        }
    }
}

/// Same optimum as [`np_oracle`], by enumerating every vertex of the
/// binary-test polytope: all-but-one coordinates in {0, 1}, the last one
/// fractional with the budget constraint tight.
pub fn lp_vertex_oracle(p: &[f64], q: &[f64], beta: f64) -> Result<f64, SizeGuard> {
    assert_eq!(p.len(), q.len(), "p and q must share an alphabet");
    let n = p.len();
    guard("alphabet", n as u128, 14)?;
    let total_p: f64 = p.iter().sum();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1u32 << n) {
        let mut q_in = 0.0;
        let mut p_in = 0.0;
        for k in 0..n {
            if mask >> k & 1 == 1 {
                q_in += q[k];
                p_in += p[k];
            }
        }
        if q_in <= beta {
            best = best.min(total_p - p_in);
            for j in 0..n {
                if mask >> j & 1 == 0 && q[j] > 0.0 && q_in + q[j] > beta {
                    let frac = (beta - q_in) / q[j];
                    best = best.min(total_p - p_in - frac * p[j]);
                }
            }
        }
    }
    Ok(best)
}

/// Minimum error over all deterministic decoders `y -> v` for a row-major
/// `m x ny` joint pmf.
pub fn exhaustive_map_oracle(pvy: &[f64], m: usize, ny: usize) -> Result<f64, SizeGuard> {
    assert_eq!(pvy.len(), m * ny);
    let count = (m as u128).checked_pow(ny as u32).unwrap_or(u128::MAX);
    guard("decoders", count, 1_000_000)?;
    let mut decoder = vec![0usize; ny];
    let mut best_success = f64::NEG_INFINITY;
    loop {
        let success: f64 = decoder.iter().enumerate().map(|(y, &v)| pvy[v * ny + y]).sum();
        if success > best_success {
            best_success = success;
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == ny {
                return Ok(1.0 - best_success);
            }
            decoder[k] += 1;
            if decoder[k] < m {
                break;
            }
            decoder[k] = 0;
            k += 1;
        }
    }
}

/// Direct evaluation of `sup_γ { P[p/q <= γ] - slope·γ }` by trying γ = 0 and
/// every individual ratio, recomputing the tail from scratch each time.
///
/// `q = 0` with `p > 0` counts as an infinite ratio. Ratios within a relative
/// 1e-9 of γ count as `<= γ`.
pub fn spectrum_bruteforce(p: &[f64], q: &[f64], slope: f64) -> Result<f64, SizeGuard> {
    assert_eq!(p.len(), q.len());
    guard("alphabet", p.len() as u128, 4096)?;
    let ratio = |k: usize| -> f64 {
        if q[k] == 0.0 {
            f64::INFINITY
        } else {
            p[k] / q[k]
        }
    };
    let mut candidates = vec![0.0];
    candidates.extend((0..p.len()).filter(|&k| p[k] > 0.0).map(ratio).filter(|r| r.is_finite()));
    let mut best = f64::NEG_INFINITY;
    for &g in &candidates {
        let tail: f64 = (0..p.len())
            .filter(|&k| p[k] > 0.0 && ratio(k) <= g + 1e-9 * g.max(1.0))
            .map(|k| p[k])
            .sum();
        best = best.max(tail - slope * g);
    }
    Ok(best)
}

/// Lowest ML error over every unordered set of `m` distinct inputs of a
/// channel given as a row-major `inputs x outputs` transition matrix.
/// No symmetry reduction is applied.
pub fn exhaustive_best_code(
    transition: &[f64],
    inputs: usize,
    outputs: usize,
    m: usize,
) -> Result<f64, SizeGuard> {
    assert_eq!(transition.len(), inputs * outputs);
    assert!(m >= 1 && m <= inputs);
    guard("codebooks", binomial(inputs as u128, m as u128), 2_000_000)?;
    let mut idx: Vec<usize> = (0..m).collect();
    let mut best = f64::INFINITY;
    loop {
        let success: f64 = (0..outputs)
            .map(|y| idx.iter().map(|&x| transition[x * outputs + y]).fold(0.0, f64::max))
            .sum();
        best = best.min(1.0 - success / m as f64);
        // next combination in lexicographic order
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(best);
            }
            k -= 1;
            if idx[k] < inputs - m + k {
                idx[k] += 1;
                for r in k + 1..m {
                    idx[r] = idx[r - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}
