//! Exact Bayesian M-ary hypothesis testing over finite alphabets.
//!
//! The minimum error probability `ε̄` of an M-ary test equals the type-0
//! error of a Neyman-Pearson test between the joint `P_VY` and the product
//! `U_V x Q*_Y`, and also the supremum of an information-spectrum
//! objective. This crate computes both forms exactly, together with the
//! classical converse bounds they specialize to (meta-converse, Verdú-Han,
//! Wolfowitz, Poor-Verdú, bank of tests, lossy-compression converse).
//!
//! All γ-optimizations are exact sweeps over likelihood-ratio jump points.

pub mod binary;
pub mod channel;
pub mod converse;
pub mod error;
pub mod instances;
pub mod lossy;
pub mod mary;
pub mod measures;
pub mod sampling;
pub mod spectrum;

pub use binary::{alpha_beta, np_test, type0_error, type1_error, ConditionalBound, NpSolution};
pub use channel::{bsc, best_code_search, ChannelCode, CodeSearch, Dmc};
pub use error::{Error, Result};
pub use lossy::{DistortionSpec, LossyCode};
pub use mary::{map_solve, MapSolution, MetricMatrix};
pub use measures::{FiniteMeasure, JointDistribution, RandomizedKernel, Violation, TOL};
pub use spectrum::GammaSweep;
