//! Mean, variance and covariance functions of Riemann-Liouville fractional
//! integrals of Gauss-Markov processes, together with Cholesky-based path
//! simulation, a pathwise Monte-Carlo oracle and a fractional integrator
//! neuron driven by colored (Ornstein-Uhlenbeck) noise.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`). The aliases
//! at the crate root fix the scalar to `f64`, which is what the CLI and the
//! validation suites use.
//!
//! ```
//! use fracgm::{fibm_var, FracOrder};
//!
//! let alpha = FracOrder::new(0.5).unwrap();
//! let v = fibm_var(2.0, alpha).unwrap();
//! assert!((v - 8.0 / std::f64::consts::PI).abs() < 1e-12);
//! ```

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod frac_cov;
pub mod gm_core;
pub mod neuro;
pub mod quadrature;
pub mod simulate;
pub mod special;
pub mod validation;

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

pub use error::{Error, Result};
pub use frac_cov::{
    caputo_derivative, fibm_cov, fibm_cov_quadrature, fibm_var, figm_cov, figm_mean, figm_var,
    fiou_cov, fiou_cov_quadrature, fiou_var, fisou_cov, fisou_cov_quadrature, fisou_cov_with,
    fisou_start_terms, fisou_var, fisou_var_with, iou_cov, iou_var, isou_cov, isou_var,
    FisouCrossTerm, SouStartTerms, UniformSamples,
};
pub use gm_core::{bm_spec, kernel, ou_spec, sou_spec, GaussMarkovSpec, OUParams, ProcessKind, SOUParams};
pub use quadrature::{
    compute_h, compute_j, nested_singular_integral, singular_left_integral, Estimate, FracOrder,
    InnerRange, QuadratureConfig,
};
pub use simulate::{
    build_cov_matrix, cholesky_factor, mc_cov_estimate, pathwise_rl_integral, sample_paths,
    CholeskyFactor, CovMatrix, PathEnsemble, TimeGrid,
};

/// Floating-point scalar accepted by every numerical routine in the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion to `f64`, used for reporting and CSV output.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type FracOrder64 = FracOrder<f64>;
pub type GaussMarkov = GaussMarkovSpec<f64>;
pub type OuParams64 = OUParams<f64>;
pub type SouParams64 = SOUParams<f64>;
pub type Grid = TimeGrid<f64>;
pub type Matrix = CovMatrix<f64>;
pub type Factor = CholeskyFactor<f64>;
pub type Ensemble = PathEnsemble<f64>;
pub type Neuron = neuro::NeuronParams<f64>;
