//! Covariance matrices on time grids, Cholesky sampling and the pathwise
//! Monte-Carlo oracle.

mod ensemble;
mod estimate;
mod grid;
mod matrix;
mod pathwise;

pub use ensemble::{path_rng, sample_paths, PathEnsemble, Source, GENERATOR_ID};
pub use estimate::{ks_critical_1pct, ks_normal, ks_statistic, mc_cov_estimate, mc_mean_estimate, McEstimate};
pub use grid::TimeGrid;
pub use matrix::{build_cov_matrix, cholesky_factor, CholeskyFactor, CovMatrix, JITTER_LEVELS};
pub use pathwise::{
    pathwise_rl_cov_exact, pathwise_rl_ensemble, pathwise_rl_integral, simulate_bm_paths, simulate_ou_paths, OuStart, RlProductRule,
};
