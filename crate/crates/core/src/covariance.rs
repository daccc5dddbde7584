//! Covariance functions `Cov(h)` for the three model families, by mutually
//! independent methods:
//!
//! * **Quadrature** — gamma randomisation of the heat kernel,
//!   `Cov(h) = (sigma2 / mu^{2 beta}) E[u(h, W)]`, with `W ~ Gamma(2 beta, mu)`
//!   for the even/odd families and `W ~ Gamma(beta, mu^2)` with the Gaussian
//!   kernel for the Weyl family at `alpha = 1`. For `alpha < 1` the Weyl
//!   covariance is the gamma mixture of a convolution of two symmetric stable
//!   densities.
//! * **ClosedForm** — Bessel-K forms (Weyl `alpha = 1`, even `n = 1`) and the
//!   gamma-moment reduction of `E[u(0, W)]` at `h = 0`.
//! * **FourierOracle** — numeric inversion of the spectral density.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use gauss_quad::laguerre::GaussLaguerre;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernels::heat_kernel;
use crate::models::{ModelSpec, Operator};
use crate::quad::{self, Tolerance};
use crate::specfun::{
    airy_ai, gamma_fn, ln_bessel_k, ln_gamma, symmetric_stable_density_tol, StableIndex,
};
use crate::transforms::{inverse_fourier_at, TransformPlan};

/// Default node count of [`gamma_quadrature`] rules.
pub const DEFAULT_GAMMA_NODES: usize = 96;

/// Relative tolerance of the gamma-randomised kernel quadrature.
const QUAD_TOL: f64 = 1e-13;

/// Relative tolerances of the outer and inner layers of the stable
/// convolution; the step-halving criteria are conservative, so results are
/// typically far more accurate (1e-7 or better against the Fourier oracle).
const CONVOLUTION_TOL: f64 = 1e-5;
const CONVOLUTION_INNER_TOL: f64 = 1e-5;
/// Relative accuracy of the stable densities inside the convolution.
const DENSITY_TOL: f64 = 1e-7;

/// Covariance evaluation method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// Closed form where available, otherwise quadrature, otherwise the
    /// Fourier oracle.
    Auto,
    Quadrature,
    ClosedForm,
    FourierOracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Quadrature => "quadrature",
            Method::ClosedForm => "closed",
            Method::FourierOracle => "fourier",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "quadrature" => Ok(Method::Quadrature),
            "closed" => Ok(Method::ClosedForm),
            "fourier" => Ok(Method::FourierOracle),
            other => Err(Error::Argument(format!(
                "unknown method {other:?} (expected auto, quadrature, closed or fourier)"
            ))),
        }
    }
}

/// Gauss rule for expectations under the `Gamma(shape, rate)` law.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    shape: f64,
    rate: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `E[g(W)]` by the rule.
    pub fn expectation(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }

    /// Fallible variant of [`QuadratureRule::expectation`].
    pub fn try_expectation(&self, mut g: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
        let mut total = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            total += w * g(x)?;
        }
        Ok(total)
    }
}

/// Generalised Gauss–Laguerre rule for the `Gamma(shape, rate)` density
/// `w^{shape-1} e^{-rate w} rate^shape / Gamma(shape)`; exact for
/// polynomials of degree up to `2 node_count - 1`. Nodes whose weights
/// underflow to zero are dropped.
pub fn gamma_quadrature(shape: f64, rate: f64, node_count: usize) -> Result<QuadratureRule> {
    let op = "gamma_quadrature";
    if !(shape > 0.0) || !shape.is_finite() {
        return Err(domain(op, format!("shape must be positive, got {shape}")));
    }
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(domain(op, format!("rate must be positive, got {rate}")));
    }
    if node_count < 8 {
        return Err(domain(
            op,
            format!("at least 8 nodes required, got {node_count}"),
        ));
    }
    let alpha = (shape - 1.0).try_into().map_err(|_| {
        domain(
            op,
            format!("Laguerre exponent {} out of range", shape - 1.0),
        )
    })?;
    let degree = node_count.try_into().expect("node_count >= 8");
    let rule = GaussLaguerre::new(degree, alpha);
    let norm = gamma_fn(shape)?;
    let (nodes, weights): (Vec<f64>, Vec<f64>) = rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (x / rate, w / norm))
        .filter(|&(x, w)| w > 0.0 && x > 0.0 && w.is_finite())
        .unzip();
    let sum: f64 = weights.iter().sum();
    if nodes.len() < 8 || (sum - 1.0).abs() > 1e-12 {
        return Err(Error::NoConvergence {
            op,
            estimate: sum,
            error: (sum - 1.0).abs(),
        });
    }
    Ok(QuadratureRule {
        shape,
        rate,
        nodes,
        weights,
    })
}

/// `E[g(W)]` for `W ~ Gamma(shape, rate)` by the trapezoid rule in `t = ln w`.
///
/// The integrand `exp(shape t - rate e^t) g(e^t)` is analytic and decays at
/// least exponentially in `t`, so the trapezoid rule converges geometrically
/// in the inverse step. The window is fixed at step 1/2 (terms below
/// `1e-4 rel_tol` of the peak dropped) and the step halved until two levels agree.
pub fn gamma_expectation(
    op: &'static str,
    shape: f64,
    rate: f64,
    rel_tol: f64,
    mut g: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    let ln_norm = shape * rate.ln() - ln_gamma(shape)?;
    let mut term = |t: f64| -> Result<f64> {
        let w = t.exp();
        let ln_weight = ln_norm + shape * t - rate * w;
        if ln_weight < -745.0 {
            return Ok(0.0);
        }
        Ok(ln_weight.exp() * g(w)?)
    };
    let center = (shape / rate).ln();
    let negligible = (1e-4 * rel_tol).max(1e-20);
    let mut step = 0.5;
    // Coarse level: walk outwards from the gamma mode until the terms are
    // negligible on both sides.
    let mut samples = vec![(center, term(center)?)];
    for dir in [-1.0, 1.0] {
        let mut k = 1.0;
        let mut quiet = 0;
        loop {
            let t = center + dir * k * step;
            let v = term(t)?;
            samples.push((t, v));
            let peak = samples.iter().fold(0.0f64, |m, s| m.max(s.1.abs()));
            quiet = if v.abs() <= negligible * peak {
                quiet + 1
            } else {
                0
            };
            if quiet >= 4 {
                break;
            }
            if t.abs() > 745.0 {
                return Err(Error::NoConvergence {
                    op,
                    estimate: samples.iter().map(|s| s.1).sum::<f64>() * step,
                    error: v.abs(),
                });
            }
            k += 1.0;
        }
    }
    let lo = samples.iter().fold(f64::INFINITY, |m, s| m.min(s.0));
    let hi = samples.iter().fold(f64::NEG_INFINITY, |m, s| m.max(s.0));
    let mut sum: f64 = samples.iter().map(|s| s.1).sum();
    let mut prev = sum * step;
    let mut count = ((hi - lo) / step).round() as usize;
    for _ in 0..10 {
        let mut mids = 0.0;
        for k in 0..count {
            mids += term(lo + (k as f64 + 0.5) * step)?;
        }
        sum += mids;
        step *= 0.5;
        count *= 2;
        let cur = sum * step;
        if (cur - prev).abs() <= rel_tol * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    let cur = sum * step;
    Err(Error::NoConvergence {
        op,
        estimate: cur,
        error: (cur - prev).abs(),
    })
}

/// Weyl covariance at `alpha = 1`:
/// `sigma2/(Gamma(beta) sqrt(pi)) (|h|/(2 mu))^{beta-1/2} K_{beta-1/2}(mu |h|)`,
/// with the limit `sigma2 Gamma(beta-1/2)/(2 sqrt(pi) Gamma(beta)) mu^{1-2beta}` at `h = 0`.
pub fn covariance_closed_weyl_alpha1(h: f64, mu: f64, beta: f64, sigma2: f64) -> Result<f64> {
    bessel_covariance("covariance_closed_weyl_alpha1", h, mu, beta, sigma2)
}

/// Even-order covariance at `n = 1`:
/// `sigma2/(Gamma(2beta) sqrt(pi)) (|h|/(2 sqrt(mu)))^{2beta-1/2} K_{2beta-1/2}(|h| sqrt(mu))`,
/// the exact closure of `(sigma2/Gamma(2beta)) int w^{2beta-1} e^{-mu w} e^{-h^2/4w}/sqrt(4 pi w) dw`.
pub fn covariance_closed_even_n1(h: f64, mu: f64, beta: f64, sigma2: f64) -> Result<f64> {
    // sigma2/(mu + tau^2)^{2 beta} is the alpha = 1 Weyl density with
    // (mu, beta) -> (sqrt(mu), 2 beta).
    bessel_covariance(
        "covariance_closed_even_n1",
        h,
        mu.sqrt(),
        2.0 * beta,
        sigma2,
    )
}

/// The even-order `n = 1` closed form as printed in the source derivation,
/// `(2 sigma2/Gamma(2beta)) (|h|/(2 sqrt(mu)))^{2beta} K_{2beta}(|h| sqrt(mu))`.
///
/// It does not match the spectral density `sigma2/(mu + tau^2)^{2beta}` and is
/// kept only to quantify that discrepancy; use [`covariance_closed_even_n1`].
pub fn covariance_printed_even_n1(h: f64, mu: f64, beta: f64, sigma2: f64) -> Result<f64> {
    check_positive("covariance_printed_even_n1", mu, beta, sigma2)?;
    let nu = 2.0 * beta;
    let a = h.abs();
    if a == 0.0 {
        // (x/2)^nu K_nu(x) -> Gamma(nu)/2 as x -> 0.
        return Ok(sigma2 * mu.powf(-nu));
    }
    let x = a * mu.sqrt();
    let ln = (2.0 * sigma2).ln() - ln_gamma(nu)? + nu * (x / 2.0 / mu).ln() + ln_bessel_k(nu, x)?;
    Ok(ln.exp())
}

fn check_positive(op: &'static str, mu: f64, beta: f64, sigma2: f64) -> Result<()> {
    for (name, v) in [("mu", mu), ("beta", beta), ("sigma2", sigma2)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(domain(
                op,
                format!("{name} must be positive and finite, got {v}"),
            ));
        }
    }
    Ok(())
}

/// Covariance of `sigma2/(mu^2 + tau^2)^beta`.
fn bessel_covariance(op: &'static str, h: f64, mu: f64, beta: f64, sigma2: f64) -> Result<f64> {
    check_positive(op, mu, beta, sigma2)?;
    if h.is_nan() {
        return Err(domain(op, "lag is NaN"));
    }
    let nu = beta - 0.5;
    let a = h.abs();
    if a == 0.0 {
        if beta <= 0.5 {
            return Err(Error::DivergentVariance {
                exponent: 2.0 * beta,
            });
        }
        let ln = sigma2.ln() + ln_gamma(nu)? - (2.0 * PI.sqrt()).ln() - ln_gamma(beta)?
            + (1.0 - 2.0 * beta) * mu.ln();
        return Ok(ln.exp());
    }
    if beta.fract() == 0.0 && beta <= 20.0 && mu * a < 700.0 {
        return Ok(sigma2 * half_integer_bessel_form(beta as u32 - 1, mu, a));
    }
    let ln = sigma2.ln() - ln_gamma(beta)? - 0.5 * PI.ln()
        + nu * (a / (2.0 * mu)).ln()
        + ln_bessel_k(nu, mu * a)?;
    Ok(ln.exp())
}

/// `(a/2mu)^{n+1/2} K_{n+1/2}(mu a) / (n! sqrt(pi))` from the terminating
/// series `K_{n+1/2}(x) = sqrt(pi/2x) e^{-x} sum_k (n+k)!/(k!(n-k)!) (2x)^{-k}`;
/// for `n = 0` this is `e^{-mu a}/(2 mu)`.
fn half_integer_bessel_form(n: u32, mu: f64, a: f64) -> f64 {
    let x2 = 2.0 * mu * a;
    let mut term = 1.0;
    let mut series = 1.0;
    for k in 0..n {
        // c_{k+1}/c_k = (n+k+1)(n-k)/(k+1).
        let k = k as f64;
        let n = n as f64;
        term *= (n + k + 1.0) * (n - k) / ((k + 1.0) * x2);
        series += term;
    }
    let mut power = 1.0;
    for j in 1..=n {
        power *= a / (2.0 * mu * j as f64);
    }
    power * (-mu * a).exp() / (2.0 * mu) * series
}

/// `u_m(0, 1)`: `Gamma(1 + 1/m)/pi` for even `m`, times `cos(pi/2m)` for odd `m`.
fn kernel_at_origin(order: u32) -> Result<f64> {
    let m = order as f64;
    let base = gamma_fn(1.0 + 1.0 / m)? / PI;
    Ok(if order % 2 == 0 {
        base
    } else {
        base * (FRAC_PI_2 / m).cos()
    })
}

/// `Cov(0) = (sigma2/mu^{2beta}) u_m(0,1) E[W^{-1/m}]` with
/// `E[W^{-1/m}] = Gamma(2beta - 1/m) mu^{1/m} / Gamma(2beta)`; for the odd
/// family at `n = 1` this is `Ai(0) 3^{-1/3} Gamma(2beta - 1/3) mu^{1/3}/Gamma(2beta)`.
fn kernel_family_variance(model: &ModelSpec) -> Result<f64> {
    if !model.has_finite_variance() {
        return Err(Error::DivergentVariance {
            exponent: model.decay_exponent(),
        });
    }
    let (mu, beta, sigma2) = (model.mu(), model.beta(), model.sigma2());
    let order = model.operator_order() as u32;
    let m = order as f64;
    let origin = if order == 3 {
        airy_ai(0.0) / 3f64.cbrt()
    } else {
        kernel_at_origin(order)?
    };
    let ln_moment = ln_gamma(2.0 * beta - 1.0 / m)? - ln_gamma(2.0 * beta)? + mu.ln() / m;
    Ok(sigma2 * origin * (ln_moment - 2.0 * beta * mu.ln()).exp())
}

/// Whether [`Method::ClosedForm`] is defined for `model` at lag `h`.
pub fn closed_form_available(model: &ModelSpec, h: f64) -> bool {
    match model.operator() {
        Operator::Weyl { alpha } => alpha == 1.0,
        Operator::Even { n } => n == 1 || h == 0.0,
        Operator::Odd { .. } => h == 0.0,
    }
}

/// Whether [`Method::Quadrature`] is defined for `model`.
pub fn quadrature_available(model: &ModelSpec) -> bool {
    !matches!(model.operator(), Operator::Odd { n, .. } if n >= 2)
}

/// The method [`Method::Auto`] resolves to for `model` at lag `h`.
pub fn resolve_method(model: &ModelSpec, h: f64, method: Method) -> Method {
    if method != Method::Auto {
        return method;
    }
    if closed_form_available(model, h) {
        Method::ClosedForm
    } else if quadrature_available(model) {
        Method::Quadrature
    } else {
        Method::FourierOracle
    }
}

/// `Cov(h)` of `model` by the requested method.
///
/// The odd family is not even in `h`; values at `h` and `-h` differ and are
/// returned as computed. `h = 0` is rejected when the spectral density is not
/// integrable.
pub fn covariance(model: &ModelSpec, h: f64, method: Method) -> Result<f64> {
    if !h.is_finite() {
        return Err(Error::Argument(format!("lag must be finite, got {h}")));
    }
    if h == 0.0 && !model.has_finite_variance() {
        return Err(Error::DivergentVariance {
            exponent: model.decay_exponent(),
        });
    }
    let (mu, beta, sigma2) = (model.mu(), model.beta(), model.sigma2());
    match resolve_method(model, h, method) {
        Method::ClosedForm => match model.operator() {
            Operator::Weyl { alpha } if alpha == 1.0 => {
                covariance_closed_weyl_alpha1(h, mu, beta, sigma2)
            }
            Operator::Even { n: 1 } => covariance_closed_even_n1(h, mu, beta, sigma2),
            Operator::Even { .. } | Operator::Odd { .. } if h == 0.0 => {
                kernel_family_variance(model)
            }
            _ => Err(unavailable("closed", model)),
        },
        Method::Quadrature => covariance_quadrature(model, h),
        Method::FourierOracle => inverse_fourier_at(model, h, &TransformPlan::auto(model)),
        Method::Auto => unreachable!("resolved above"),
    }
}

fn unavailable(method: &'static str, model: &ModelSpec) -> Error {
    Error::MethodUnavailable {
        method,
        model: model.to_string(),
    }
}

/// Gamma-randomised kernel quadrature (stable convolution for Weyl `alpha < 1`).
fn covariance_quadrature(model: &ModelSpec, h: f64) -> Result<f64> {
    let op = "covariance quadrature";
    let (mu, beta, sigma2) = (model.mu(), model.beta(), model.sigma2());
    let prefactor = sigma2 * (-2.0 * beta * mu.ln()).exp();
    match model.operator() {
        Operator::Weyl { alpha } if alpha == 1.0 => {
            let e = gamma_expectation(op, beta, mu * mu, QUAD_TOL, |w| Ok(gaussian_kernel(h, w)))?;
            Ok(prefactor * e)
        }
        Operator::Weyl { .. } => covariance_stable_convolution(model, h),
        Operator::Even { n } => {
            let spec = model.kernel_spec().expect("even family has a kernel");
            let e = if n == 1 {
                gamma_expectation(op, 2.0 * beta, mu, QUAD_TOL, |w| Ok(gaussian_kernel(h, w)))?
            } else {
                gamma_expectation(op, 2.0 * beta, mu, QUAD_TOL, |w| heat_kernel(spec, h, w))?
            };
            Ok(prefactor * e)
        }
        Operator::Odd { n: 1, kappa } => {
            if h == 0.0 {
                let c = airy_ai(0.0);
                let e =
                    gamma_expectation(op, 2.0 * beta, mu, QUAD_TOL, |w| Ok(c / (3.0 * w).cbrt()))?;
                return Ok(prefactor * e);
            }
            airy_mixture(-kappa.value() * h, mu, beta, sigma2)
        }
        Operator::Odd { .. } => Err(unavailable("quadrature", model)),
    }
}

/// `e^{-h^2/4w} / sqrt(4 pi w)`.
fn gaussian_kernel(h: f64, w: f64) -> f64 {
    (-h * h / (4.0 * w)).exp() / (4.0 * PI * w).sqrt()
}

/// `(sigma2/Gamma(2beta)) int w^{2beta-1} e^{-mu w} Ai(v/(3w)^{1/3}) (3w)^{-1/3} dw`
/// for `v != 0`, in the variable `z = |v|/(3w)^{1/3}`:
/// `(3 sigma2/(|v| Gamma(2beta))) int_0^inf w(z)^{2beta} e^{-mu w(z)} Ai(sgn(v) z) dz`.
///
/// For `v > 0` the Airy factor decays super-exponentially. For `v < 0` it
/// oscillates with slowly decaying amplitude; the tail beyond the body is
/// summed lobe by lobe (half-periods of the Airy phase `2/3 z^{3/2}`) and
/// accelerated with Wynn's epsilon algorithm.
fn airy_mixture(v: f64, mu: f64, beta: f64, sigma2: f64) -> Result<f64> {
    let op = "covariance quadrature (Airy mixture)";
    let a = v.abs();
    let s = v.signum();
    let ln_pre = (3.0 * sigma2 / a).ln() - ln_gamma(2.0 * beta)?;
    let integrand = |z: f64| -> f64 {
        if z == 0.0 {
            return 0.0;
        }
        let w = a * a * a / (3.0 * z * z * z);
        let ln = ln_pre + 2.0 * beta * w.ln() - mu * w;
        if ln < -745.0 {
            0.0
        } else {
            ln.exp() * airy_ai(s * z)
        }
    };
    // z where mu w(z) = 1: the mixing weight switches on around here.
    let z_mix = a * (mu / 3.0).cbrt();
    // Absolute floor from a coarse estimate of the integral's magnitude, so
    // that rounding noise in small pieces cannot stall the refinement.
    let rough = quad::composite(quad::gl20(), 0.0, z_mix + 25.0, 64, |z| integrand(z).abs());
    let tol = Tolerance::rel(1e-12).with_abs(1e-13 * rough.max(1e-300));
    // Breakpoints at the mixing scale and at the Airy evaluation regime
    // switches (|z| = 4, 10), where the evaluation is continuous only to ~1e-12.
    let body = |end: f64| -> Result<f64> {
        let mut points = vec![0.0, z_mix, 4.0, 10.0, end];
        points.retain(|&p| p <= end);
        points.sort_by(f64::total_cmp);
        let mut total = 0.0;
        for pair in points.windows(2) {
            total += quad::adaptive(op, integrand, pair[0], pair[1], tol)?.value;
        }
        Ok(total)
    };
    if s > 0.0 {
        return body(z_mix + 25.0);
    }
    // Lobe boundaries where the asymptotic Airy phase 2/3 z^{3/2} + pi/4 hits k pi.
    let boundary = |k: f64| (1.5 * (k * PI - 0.25 * PI)).powf(2.0 / 3.0);
    let mut k0 = 2.0;
    while boundary(k0) < (2.0 * z_mix + 4.0).max(10.0) {
        k0 += 1.0;
    }
    let start = boundary(k0);
    let body = body(start)?;
    let mut partial = Vec::with_capacity(40);
    let mut acc = 0.0;
    let mut prev_limit = f64::NAN;
    let mut k = k0;
    let mut scale = body.abs();
    for lobe in 0..200 {
        let (lo, hi) = (boundary(k), boundary(k + 1.0));
        let piece = quad::composite(quad::gl20(), lo, hi, 2, integrand);
        acc += piece;
        scale = scale.max(acc.abs());
        partial.push(acc);
        k += 1.0;
        if lobe >= 8 && partial.len() % 2 == 1 {
            let limit = quad::wynn_epsilon(&partial);
            // The epsilon table carries rounding of order 1e-16 of the
            // largest partial sum, which bounds the attainable agreement.
            let change = (limit - prev_limit).abs();
            if change <= 1e-12 * (body + limit).abs()
                || change <= 1e-15 * scale
                || piece.abs() <= 1e-17 * scale
            {
                return Ok(body + limit);
            }
            prev_limit = limit;
        }
        if partial.len() > 60 {
            // Restart the accelerator from the current partial sum to keep the
            // table small; the tail remainder is smooth.
            let last = *partial.last().expect("non-empty");
            partial.clear();
            partial.push(last);
        }
    }
    Err(Error::NoConvergence {
        op,
        estimate: body + acc,
        error: (prev_limit - acc).abs(),
    })
}

/// Weyl covariance for `0 < alpha < 1` as the gamma mixture of the
/// convolution of two symmetric stable densities:
/// `Cov(h) = (sigma2/Gamma(beta)) int w^{beta-1} e^{-w mu^2} (g1 * g2)(h, w) dw`,
/// `g1` of index `2 alpha` and scale 1, `g2` of index `alpha` and scale
/// `2 mu cos(pi alpha / 2)`.
///
/// The outer expectation over `W ~ Gamma(beta, mu^2)` uses the
/// log-trapezoid rule of [`gamma_expectation`]: the convolution changes
/// regime at `w ~ |h|^{2 alpha}` and behaves like `w^{-1/(2 alpha)}` near
/// `w = 0` when `h = 0`, neither of which a Laguerre rule resolves.
pub fn covariance_stable_convolution(model: &ModelSpec, h: f64) -> Result<f64> {
    let op = "covariance_stable_convolution";
    let alpha = match model.operator() {
        Operator::Weyl { alpha } if alpha < 1.0 => alpha,
        _ => {
            return Err(domain(
                op,
                format!("requires the Weyl family with alpha < 1, got {model}"),
            ))
        }
    };
    if !h.is_finite() {
        return Err(Error::Argument(format!("lag must be finite, got {h}")));
    }
    if h == 0.0 && !model.has_finite_variance() {
        return Err(Error::DivergentVariance {
            exponent: model.decay_exponent(),
        });
    }
    let (mu, beta, sigma2) = (model.mu(), model.beta(), model.sigma2());
    let prefactor = sigma2 * (-2.0 * beta * mu.ln()).exp();
    let conv = StableConvolution {
        g1: StableIndex::symmetric(2.0 * alpha)?,
        g2: StableIndex::symmetric(alpha)?,
        alpha,
        scale2: 2.0 * mu * (FRAC_PI_2 * alpha).cos(),
        h: h.abs(),
    };
    let e = gamma_expectation(op, beta, mu * mu, CONVOLUTION_TOL, |w| conv.at(w))?;
    Ok(prefactor * e)
}

struct StableConvolution {
    g1: StableIndex,
    g2: StableIndex,
    alpha: f64,
    scale2: f64,
    h: f64,
}

impl StableConvolution {
    /// `int g1(h - z, w) g2(z, w) dz`, split at `0`, `h/2`, `h` so that each
    /// density's peak sits at an endpoint.
    fn at(&self, w: f64) -> Result<f64> {
        let op = "covariance_stable_convolution";
        let h = self.h;
        let mut fail = None;
        let mut p = |idx: StableIndex, scale: f64, x: f64| match symmetric_stable_density_tol(
            idx,
            scale,
            x,
            w,
            DENSITY_TOL,
        ) {
            Ok(d) => d.value,
            Err(e) => {
                fail.get_or_insert(e);
                0.0
            }
        };
        let width1 = w.powf(0.5 / self.alpha);
        let width2 = (self.scale2 * w).powf(1.0 / self.alpha);
        let tol = CONVOLUTION_INNER_TOL;
        let total = if h == 0.0 {
            2.0 * quad::exp_sinh(
                op,
                |z| p(self.g1, 1.0, z) * p(self.g2, self.scale2, z),
                width2.min(width1),
                tol,
            )?
            .value
        } else {
            let (g1, g2, s2) = (self.g1, self.g2, self.scale2);
            let left =
                quad::exp_sinh(op, |s| p(g1, 1.0, h + s) * p(g2, s2, s), width2.min(h), tol)?.value;
            let right =
                quad::exp_sinh(op, |s| p(g1, 1.0, s) * p(g2, s2, h + s), width1.min(h), tol)?.value;
            let mid1 =
                quad::tanh_sinh(op, |z| p(g1, 1.0, h - z) * p(g2, s2, z), 0.0, h / 2.0, tol)?.value;
            // Measured from h so that the g1 peak sits at an exact endpoint.
            let mid2 =
                quad::tanh_sinh(op, |s| p(g1, 1.0, s) * p(g2, s2, h - s), 0.0, h / 2.0, tol)?.value;
            left + right + mid1 + mid2
        };
        match fail {
            Some(e) => Err(e),
            None => Ok(total),
        }
    }
}

/// Fitted exponential decay rate `(ln Cov(h1) - ln Cov(h2)) / (h2 - h1)`.
pub fn decay_rate(model: &ModelSpec, h1: f64, h2: f64) -> Result<f64> {
    if !(h1 > 0.0 && h2 > h1 && h2.is_finite()) {
        return Err(Error::Argument(format!(
            "need 0 < h1 < h2, got h1 = {h1}, h2 = {h2}"
        )));
    }
    let c1 = covariance(model, h1, Method::Auto)?;
    let c2 = covariance(model, h2, Method::Auto)?;
    if !(c1 > 0.0 && c2 > 0.0) {
        return Err(domain(
            "decay_rate",
            format!("covariance must be positive at both lags, got {c1:e} and {c2:e}"),
        ));
    }
    Ok((c1.ln() - c2.ln()) / (h2 - h1))
}
