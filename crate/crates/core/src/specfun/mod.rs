//! Scalar special functions: gamma, Bessel K, Airy Ai and stable densities.

mod airy;
mod bessel;
mod stable;

pub use airy::{airy_ai, airy_ai_left_tail_integral, airy_ai_prime};
pub use bessel::{bessel_k, bessel_k_gr3478, ln_bessel_k};
pub(crate) use stable::symmetric_stable_density_tol;
pub use stable::{onesided_stable_density, symmetric_stable_density, DensityValue, StableIndex};

use crate::error::{domain, Result};

/// `Gamma(x)` for `x > 0`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(domain("gamma_fn", format!("x must be positive, got {x}")));
    }
    Ok(libm::tgamma(x))
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(domain("ln_gamma", format!("x must be positive, got {x}")));
    }
    Ok(libm::lgamma(x))
}
