//! Seeded random instance generators for property checks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Gamma};

use crate::lossy::{DistortionSpec, LossyCode};
use crate::mary::MetricMatrix;
use crate::measures::{FiniteMeasure, JointDistribution, RandomizedKernel};

/// Deterministic generator for a given seed.
pub fn seeded_rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A draw from the symmetric Dirichlet distribution on `n` points, obtained
/// by normalizing independent `Gamma(concentration, 1)` variables.
pub fn dirichlet<R: Rng + ?Sized>(rng: &mut R, n: usize, concentration: f64) -> Vec<f64> {
    let gamma = Gamma::new(concentration, 1.0).expect("positive concentration");
    loop {
        let draws: Vec<f64> = (0..n).map(|_| gamma.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 && total.is_finite() {
            return draws.into_iter().map(|x| x / total).collect();
        }
    }
}

/// Dirichlet weights where each entry is independently zeroed with
/// probability `sparsity` (at least one entry stays positive).
pub fn sparse_dirichlet<R: Rng + ?Sized>(rng: &mut R, n: usize, sparsity: f64) -> Vec<f64> {
    let mut weights = dirichlet(rng, n, 1.0);
    let keep = rng.random_range(0..n);
    for (i, w) in weights.iter_mut().enumerate() {
        if i != keep && rng.random_bool(sparsity) {
            *w = 0.0;
        }
    }
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Weights `k / denominator` with integer `k`, so that exact ties between
/// likelihood ratios are common.
pub fn grid_weights<R: Rng + ?Sized>(rng: &mut R, n: usize, denominator: u32) -> Vec<f64> {
    let mut counts = vec![0u32; n];
    for _ in 0..denominator {
        counts[rng.random_range(0..n)] += 1;
    }
    counts.into_iter().map(|k| f64::from(k) / f64::from(denominator)).collect()
}

pub fn random_probability<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FiniteMeasure {
    FiniteMeasure::probability(dirichlet(rng, n, 1.0)).expect("dirichlet draw is a probability")
}

/// Random joint distribution on `m x n` with some zero cells.
pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize) -> JointDistribution {
    let sparsity = if rng.random_bool(0.5) { 0.0 } else { 0.25 };
    JointDistribution::new(m, n, sparse_dirichlet(rng, m * n, sparsity)).expect("valid joint")
}

/// Random joint with every hypothesis having positive prior.
pub fn random_joint_full_prior<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize) -> JointDistribution {
    loop {
        let joint = random_joint(rng, m, n);
        if joint.rows().all(|r| r.iter().sum::<f64>() > 1e-6) {
            return joint;
        }
    }
}

pub fn random_kernel<R: Rng + ?Sized>(rng: &mut R, inputs: usize, outputs: usize) -> RandomizedKernel {
    let rows = (0..inputs).flat_map(|_| sparse_dirichlet(rng, outputs, 0.3)).collect();
    RandomizedKernel::new(inputs, outputs, rows).expect("valid kernel")
}

/// Strictly positive metric with entries in `[0.05, 1)`.
pub fn random_metric<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize) -> MetricMatrix {
    let values = (0..m * n).map(|_| rng.random_range(0.05..1.0)).collect();
    MetricMatrix::new(m, n, values).expect("finite metric")
}

/// Random lossy instance: a source without point masses, an integer-valued
/// distortion, a threshold and a codebook of distinct symbols.
pub fn random_lossy<R: Rng + ?Sized>(
    rng: &mut R,
    source_size: usize,
    reconstruction_size: usize,
) -> (FiniteMeasure, DistortionSpec, LossyCode) {
    let pv = loop {
        let p = random_probability(rng, source_size);
        if p.weights().iter().all(|&w| w < 0.99) {
            break p;
        }
    };
    let d = (0..source_size * reconstruction_size).map(|_| f64::from(rng.random_range(0..4u8))).collect();
    let threshold = f64::from(rng.random_range(0..3u8));
    let spec = DistortionSpec::new(source_size, reconstruction_size, d, threshold).expect("valid distortion");
    let m = rng.random_range(1..=reconstruction_size);
    let mut symbols: Vec<usize> = (0..reconstruction_size).collect();
    for i in 0..m {
        let j = rng.random_range(i..reconstruction_size);
        symbols.swap(i, j);
    }
    symbols.truncate(m);
    (pv, spec, LossyCode::new(symbols).expect("distinct codewords"))
}
