//! Likelihood-ratio grouping and exact γ-sweeps.
//!
//! Every information-spectrum objective in this crate has the shape
//! `g(γ, P[P/Q <= γ])` where the tail probability is a right-continuous step
//! function of γ and `g` is nonincreasing in γ between steps. The supremum over
//! `γ >= 0` is therefore attained at γ = 0 or at one of the distinct ratio
//! values ("jump points"), and a sweep over those points is exact.

use serde::Serialize;

/// Relative tolerance under which two likelihood ratios are treated as equal.
pub const RATIO_TOL: f64 = 1e-9;

pub(crate) fn ratios_tie(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= RATIO_TOL * 1f64.max(a.abs()).max(b.abs())
}

/// `ratio <= gamma`, counting values within the tie tolerance as equal.
pub(crate) fn at_most(ratio: f64, gamma: f64) -> bool {
    ratio <= gamma || ratios_tie(ratio, gamma)
}

/// Likelihood ratio `p / q` for a symbol with `p > 0`; `q = 0` gives `+inf`.
pub(crate) fn ratio(p: f64, q: f64) -> f64 {
    if q == 0.0 {
        f64::INFINITY
    } else {
        p / q
    }
}

/// Outcome of an exact sweep of a bound over its parameter γ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaSweep {
    /// Increasing candidate thresholds: 0 followed by the jump points.
    pub gammas: Vec<f64>,
    pub values: Vec<f64>,
    pub best_gamma: f64,
    pub best_value: f64,
}

impl GammaSweep {
    /// Keeps the first (smallest-γ) maximizer among the points flagged `admissible`.
    /// With no admissible point the trivial bound 0 at γ = 0 is reported.
    pub(crate) fn from_points(gammas: Vec<f64>, values: Vec<f64>, admissible: Option<&[bool]>) -> Self {
        let mut best: Option<(f64, f64)> = None;
        for (k, (&g, &v)) in gammas.iter().zip(&values).enumerate() {
            if admissible.is_some_and(|ok| !ok[k]) {
                continue;
            }
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((g, v));
            }
        }
        let (best_gamma, best_value) = best.unwrap_or((0.0, 0.0));
        Self { gammas, values, best_gamma, best_value }
    }

    pub fn best(&self) -> (f64, f64) {
        (self.best_gamma, self.best_value)
    }
}

/// Distinct finite ratios `p/q` (over symbols with `p > 0`) in increasing
/// order, with the cumulative `p`-mass up to and including each group.
#[derive(Debug, Clone)]
pub(crate) struct Spectrum {
    /// Largest ratio of each tie group.
    jumps: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Spectrum {
    pub(crate) fn new(p: &[f64], q: &[f64]) -> Self {
        debug_assert_eq!(p.len(), q.len());
        let mut items: Vec<(f64, f64)> = p
            .iter()
            .zip(q)
            .filter(|(&pi, _)| pi > 0.0)
            .map(|(&pi, &qi)| (ratio(pi, qi), pi))
            .filter(|(r, _)| r.is_finite())
            .collect();
        items.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut jumps = Vec::new();
        let mut cumulative = Vec::new();
        let mut anchor = f64::NAN;
        let mut acc = 0.0;
        for (r, w) in items {
            acc += w;
            if !jumps.is_empty() && ratios_tie(anchor, r) {
                let last = jumps.len() - 1;
                jumps[last] = r;
                cumulative[last] = acc;
            } else {
                anchor = r;
                jumps.push(r);
                cumulative.push(acc);
            }
        }
        Self { jumps, cumulative }
    }

    pub(crate) fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    /// `P[ratio <= gamma]`.
    pub(crate) fn tail(&self, gamma: f64) -> f64 {
        let k = self.jumps.partition_point(|&r| at_most(r, gamma));
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }

    /// Evaluates `objective(γ, tail(γ))` at γ = 0 and at every jump point.
    pub(crate) fn sweep(&self, objective: impl Fn(f64, f64) -> f64) -> GammaSweep {
        let mut gammas = Vec::with_capacity(self.jumps.len() + 1);
        let mut values = Vec::with_capacity(self.jumps.len() + 1);
        gammas.push(0.0);
        values.push(objective(0.0, self.tail(0.0)));
        for (&g, &f) in self.jumps.iter().zip(&self.cumulative) {
            gammas.push(g);
            values.push(objective(g, f));
        }
        GammaSweep::from_points(gammas, values, None)
    }
}
