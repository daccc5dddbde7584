//! Spectral densities, covariance functions, heat kernels and sample paths
//! for fractional stochastic differential equations driven by Gaussian
//! white noise.

pub mod covariance;
pub mod error;
pub mod kernels;
pub mod models;
pub mod quad;
pub mod specfun;
pub mod synth;
pub mod transforms;

pub use error::{Error, Result, Violation};
