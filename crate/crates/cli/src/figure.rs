//! Spectral-density curves of the Weyl family over a grid of `(alpha, beta)`.

use crate::output::Axis;
use fracspec::models::{spectral_density, ModelSpec};
use fracspec::Result;

/// One `(alpha, beta)` curve.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureCurve {
    pub model: ModelSpec,
    pub alpha: f64,
    pub beta: f64,
    pub values: Vec<f64>,
}

/// `f(tau)` for every `(alpha, beta)` in the Cartesian product, alpha-major.
/// All parameter pairs are validated before any evaluation.
pub fn figure_data(
    alphas: &[f64],
    betas: &[f64],
    mu: f64,
    sigma2: f64,
    taus: &Axis,
) -> Result<Vec<FigureCurve>> {
    let mut models = Vec::with_capacity(alphas.len() * betas.len());
    for &alpha in alphas {
        for &beta in betas {
            models.push((alpha, beta, ModelSpec::weyl(mu, beta, sigma2, alpha)?));
        }
    }
    Ok(models
        .into_iter()
        .map(|(alpha, beta, model)| FigureCurve {
            model,
            alpha,
            beta,
            values: taus
                .points()
                .map(|t| spectral_density(&model, t).re)
                .collect(),
        })
        .collect())
}
