//! Built-in reference instances: the ternary test with three equiprobable
//! hypotheses and its two-observation extension.

use crate::mary::MetricMatrix;
use crate::measures::JointDistribution;

/// `P(y|v)` for the ternary instance, rows indexed by `v`.
pub const TERNARY_LIKELIHOOD: [[f64; 3]; 3] = [
    [0.40, 0.27, 0.33],
    [0.27, 0.40, 0.33],
    [0.33, 0.27, 0.40],
];

/// Uniform prior over three hypotheses with [`TERNARY_LIKELIHOOD`].
pub fn ternary_example() -> JointDistribution {
    let likelihood: Vec<Vec<f64>> = TERNARY_LIKELIHOOD.iter().map(|r| r.to_vec()).collect();
    JointDistribution::from_prior_likelihood(&[1.0 / 3.0; 3], &likelihood)
        .expect("built-in instance is valid")
}

/// Two independent observations `(y1, y2)` of the ternary channel, flattened
/// as `y = 3 * y1 + y2`.
pub fn two_observation_example() -> JointDistribution {
    let mut mass = Vec::with_capacity(27);
    for row in &TERNARY_LIKELIHOOD {
        for &a in row {
            for &b in row {
                mass.push(a * b / 3.0);
            }
        }
    }
    JointDistribution::new(3, 9, mass).expect("built-in instance is valid")
}

/// Auxiliary `Q(v, y1, y2) = P(y2|v) / 9`, which matches `P` in the second
/// observation and is uninformative about the first.
pub fn two_observation_auxiliary() -> JointDistribution {
    let mut mass = Vec::with_capacity(27);
    for row in &TERNARY_LIKELIHOOD {
        for _y1 in 0..3 {
            for &b in row {
                mass.push(b / 9.0);
            }
        }
    }
    JointDistribution::new(3, 9, mass).expect("built-in instance is valid")
}

/// Metric `q(v, y1, y2) = P(y1|v)`: decode from the first observation only.
pub fn first_observation_metric() -> MetricMatrix {
    let mut values = Vec::with_capacity(27);
    for row in &TERNARY_LIKELIHOOD {
        for &a in row {
            values.extend(std::iter::repeat_n(a, 3));
        }
    }
    MetricMatrix::new(3, 9, values).expect("built-in metric is finite")
}
