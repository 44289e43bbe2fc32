//! Pareto pairwise ranking for recommender systems, with matrix
//! factorization and placement baselines and an evaluation harness for
//! rating accuracy (MAE) and popularity fairness (Degree of Matthew Effect).
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common `f64` and `f32` instantiations.

// `!(a < b)` is how NaN gets rejected alongside out-of-order values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod cli;
pub mod dataio;
pub mod error;
pub mod metrics;
pub mod model;
pub mod ppr;
pub mod scalar;

pub use error::{Error, ErrorClass, Result};
pub use scalar::Scalar;

pub type RatingMatrix64 = dataio::RatingMatrix<f64>;
pub type RatingMatrix32 = dataio::RatingMatrix<f32>;
pub type FactorModel64 = model::FactorModel<f64>;
pub type FactorModel32 = model::FactorModel<f32>;
pub type TrainConfig64 = ppr::TrainConfig<f64>;
pub type TrainConfig32 = ppr::TrainConfig<f32>;
pub type MfConfig64 = baselines::MfConfig<f64>;
pub type MfConfig32 = baselines::MfConfig<f32>;
