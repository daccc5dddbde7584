//! Wiener–Khinchin duality: numeric inversion of spectral densities into
//! covariances, and the forward transform of sampled covariance curves.
//!
//! Conventions: `Cov(h) = (1/2pi) int e^{-i tau h} f(tau) dtau` and
//! `f(tau) = int e^{i tau h} Cov(h) dh`.
//!
//! The inverse transform integrates `f` directly on `[-T, T]` with graded
//! Gauss-Legendre panels and adds the two tails `|tau| > T` exactly by
//! rotating the contour off the real axis, using the analytic continuation of
//! `f` written around its leading power law `|tau|^-p`. At `h = 0` there is
//! nothing to rotate and the algebraic tail is integrated on the real axis.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{spectral_density, Curve, Family, Grid, ModelSpec, Operator, Quantity};
use crate::quad;

/// Default number of head samples (`2^14`).
pub const DEFAULT_SAMPLE_COUNT: usize = 1 << 14;

/// Relative tolerance of the contour tail integrals.
const TAIL_TOL: f64 = 1e-12;
/// Upper bound on the panels needed to follow the oscillation of
/// `e^{-i tau h}` across `[0, cutoff]` (one per two radians).
const MAX_OSCILLATION_PANELS: f64 = 4e6;

/// How the integral beyond the cutoff is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Taper {
    /// Plain truncation at the cutoff.
    None,
    /// Exact tail beyond the cutoff from the analytic continuation of `f`.
    TailCorrected,
}

/// Discretisation of the inverse transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformPlan {
    frequency_cutoff: f64,
    sample_count: usize,
    taper: Taper,
}

impl TransformPlan {
    /// `sample_count` must be a power of two, at least 256.
    pub fn new(frequency_cutoff: f64, sample_count: usize, taper: Taper) -> Result<Self> {
        if !(frequency_cutoff > 0.0) || !frequency_cutoff.is_finite() {
            return Err(Error::Argument(format!(
                "frequency cutoff must be positive and finite, got {frequency_cutoff}"
            )));
        }
        if sample_count < 256 || !sample_count.is_power_of_two() {
            return Err(Error::Argument(format!(
                "sample count must be a power of two >= 256, got {sample_count}"
            )));
        }
        Ok(Self {
            frequency_cutoff,
            sample_count,
            taper,
        })
    }

    /// Tail-corrected plan with cutoff `4 (2 mu)^{1/order}`, safely past the
    /// point where the power-law expansion of `f` converges.
    pub fn auto(model: &ModelSpec) -> Self {
        let order = model.operator_order();
        Self {
            frequency_cutoff: 4.0 * (2.0 * model.mu()).powf(1.0 / order),
            sample_count: DEFAULT_SAMPLE_COUNT,
            taper: Taper::TailCorrected,
        }
    }

    /// Truncation plan whose cutoff satisfies `|f(cutoff)| <= 1e-12 f(0)`.
    pub fn truncated(model: &ModelSpec, sample_count: usize) -> Result<Self> {
        let peak = spectral_density(model, 0.0).norm();
        let mut cutoff = model.characteristic_frequency();
        while spectral_density(model, cutoff).norm() > 1e-12 * peak {
            cutoff *= 2.0;
            if cutoff > 1e15 {
                return Err(Error::Argument(format!(
                    "f decays too slowly (|tau|^-{}) for a truncation plan",
                    model.decay_exponent()
                )));
            }
        }
        Self::new(cutoff, sample_count, Taper::None)
    }

    pub fn frequency_cutoff(&self) -> f64 {
        self.frequency_cutoff
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    pub fn taper(&self) -> Taper {
        self.taper
    }
}

/// Analytic continuation of `f` into `Re tau > cutoff`, written as the leading
/// power law times a convergent correction factor. Agrees with
/// [`spectral_density`] on the real axis.
pub fn continued_density(model: &ModelSpec, tau: Complex64) -> Complex64 {
    let (mu, beta, sigma2) = (model.mu(), model.beta(), model.sigma2());
    let ln_tau = tau.ln();
    let one = Complex64::new(1.0, 0.0);
    let ln_f = match model.operator() {
        Operator::Weyl { alpha } => {
            let t = (-alpha * ln_tau).exp();
            let c = Complex64::from_polar(mu, PI * alpha / 2.0);
            -2.0 * alpha * beta * ln_tau - beta * ((one + c * t).ln() + (one + c.conj() * t).ln())
        }
        Operator::Even { n } => {
            let m = 2.0 * n as f64;
            -2.0 * m * beta * ln_tau - 2.0 * beta * (one + mu * (-m * ln_tau).exp()).ln()
        }
        Operator::Odd { n, kappa } => {
            // ln(-kappa i tau^m) on the branch matching the real axis.
            let lead = Complex64::new(0.0, -kappa.value() * PI / 2.0) + (2 * n + 1) as f64 * ln_tau;
            -2.0 * beta * (lead + (one + mu * (-lead).exp()).ln())
        }
    };
    sigma2 * ln_f.exp()
}

/// `(1/2pi) int e^{-i tau h} f(tau) dtau` as a complex number; the imaginary
/// part is the Hermitian-symmetry residual.
fn inverse_complex(model: &ModelSpec, h: f64, plan: &TransformPlan) -> Result<Complex64> {
    let cutoff = plan.frequency_cutoff;
    if cutoff * h.abs() / 2.0 > MAX_OSCILLATION_PANELS {
        return Err(Error::Argument(format!(
            "lag {h:e} too large for a frequency cutoff of {cutoff:e}: resolving e^(-i tau h) needs more than {MAX_OSCILLATION_PANELS:e} panels"
        )));
    }
    let mut head = Complex64::new(0.0, 0.0);
    let integrand = |tau: f64| -> Complex64 {
        let plus = spectral_density(model, tau) * Complex64::from_polar(1.0, -tau * h);
        let minus = spectral_density(model, -tau) * Complex64::from_polar(1.0, tau * h);
        plus + minus
    };
    let rule = quad::gl16();
    let breaks = head_breakpoints(model, plan, h);
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (half, mid) = (0.5 * (b - a), 0.5 * (a + b));
        for &(x, w) in rule {
            head += w * half * integrand(mid + half * x);
        }
    }
    let mut total = head;
    if plan.taper == Taper::TailCorrected {
        // Right tail carries e^{-i tau h}; the left tail, mapped to tau > 0,
        // carries e^{+i tau h} and the density of the reflected model.
        total += tail(model, -h, cutoff)?;
        total += tail(&reflected_density_model(model), h, cutoff)?;
    }
    Ok(total / (2.0 * PI))
}

/// Model whose density at `tau` equals `f(-tau)` of `model`.
fn reflected_density_model(model: &ModelSpec) -> ModelSpec {
    // The real families are even in tau; for the odd family f(-tau) flips kappa.
    model.reflected()
}

/// `int_T^inf e^{i eta tau} f(tau) dtau` along `tau = T + i sgn(eta) s`.
fn tail(model: &ModelSpec, eta: f64, cutoff: f64) -> Result<Complex64> {
    let op = "inverse_fourier_spectral tail";
    if eta == 0.0 {
        if !model.has_finite_variance() {
            return Err(Error::DivergentVariance {
                exponent: model.decay_exponent(),
            });
        }
        let g = |s: f64| continued_density(model, Complex64::new(cutoff + s, 0.0));
        let re = quad::exp_sinh(op, |s| g(s).re, cutoff, TAIL_TOL)?;
        let im = quad::exp_sinh(op, |s| g(s).im, cutoff, TAIL_TOL)?;
        return Ok(Complex64::new(re.value, im.value));
    }
    let dir = Complex64::new(0.0, eta.signum());
    let phase = Complex64::from_polar(1.0, eta * cutoff);
    let g = |s: f64| (-eta.abs() * s).exp() * continued_density(model, cutoff + dir * s);
    // Damping length 1/|eta|, or the density's own decay scale when the
    // damping is negligible (small lags).
    let scale = (1.0 / eta.abs()).min(cutoff);
    let re = quad::exp_sinh(op, |s| g(s).re, scale, TAIL_TOL)?;
    let im = quad::exp_sinh(op, |s| g(s).im, scale, TAIL_TOL)?;
    Ok(phase * dir * Complex64::new(re.value, im.value))
}

/// Panel boundaries on `[0, T]`: geometric grading towards `tau = 0` (where
/// `|tau|^alpha` is not smooth), uniform panels over the core band, geometric
/// panels beyond it, each refined so no panel spans more than two radians of
/// `e^{-i tau h}`.
fn head_breakpoints(model: &ModelSpec, plan: &TransformPlan, h: f64) -> Vec<f64> {
    let cutoff = plan.frequency_cutoff;
    let core_end = cutoff.min(8.0 * model.characteristic_frequency());
    let panels = plan.sample_count / 16;
    let width = core_end / panels as f64;
    let mut coarse = vec![0.0];
    coarse.extend((0..50).rev().map(|k| width * 0.5f64.powi(k + 1)));
    coarse.extend((1..=panels).map(|k| k as f64 * width));
    let mut x = core_end;
    while x < cutoff {
        x = (1.25 * x).min(cutoff);
        coarse.push(x);
    }
    let mut breaks = vec![0.0];
    for pair in coarse.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let pieces = ((b - a) * h.abs() / 2.0).ceil().max(1.0) as usize;
        breaks.extend((1..=pieces).map(|k| a + (b - a) * k as f64 / pieces as f64));
    }
    breaks
}

/// Covariance at one lag by Fourier inversion of the spectral density.
pub fn inverse_fourier_at(model: &ModelSpec, h: f64, plan: &TransformPlan) -> Result<f64> {
    if h.is_nan() {
        return Err(Error::Argument("lag is NaN".into()));
    }
    if h == 0.0 && !model.has_finite_variance() {
        return Err(Error::DivergentVariance {
            exponent: model.decay_exponent(),
        });
    }
    let value = inverse_complex(model, h, plan)?;
    let peak = spectral_density(model, 0.0).norm();
    if value.im.abs() > 1e-10 * peak {
        return Err(Error::Accuracy {
            op: "inverse_fourier_spectral",
            value: value.re,
            error: value.im.abs(),
        });
    }
    Ok(value.re)
}

/// Covariance curve on `lags` by Fourier inversion of the spectral density.
pub fn inverse_fourier_spectral(
    model: &ModelSpec,
    lags: Grid,
    plan: &TransformPlan,
) -> Result<Curve> {
    let values = lags
        .points()
        .map(|h| inverse_fourier_at(model, h, plan))
        .collect::<Result<Vec<_>>>()?;
    Curve::new(
        Some(*model),
        Quantity::Covariance,
        "fourier-oracle",
        lags,
        values,
        None,
    )
}

/// Powers of the step in the leading trapezoid errors of the forward
/// transform. The error is the aliased sum `sum_{k != 0} f(tau + 2 pi k / delta)`;
/// expanding `f` at infinity gives `delta^p` times a series in the powers of
/// `1/tau` that `f` carries, plus shifts in whole powers of `delta` from
/// `tau`, of which the odd ones cancel between `k` and `-k` when `f` is even.
fn aliasing_exponents(model: &ModelSpec) -> [f64; 4] {
    let p = model.decay_exponent();
    match model.operator() {
        Operator::Weyl { alpha } if alpha < 1.0 => [p, p + alpha, p + 2.0 * alpha, p + 3.0 * alpha],
        Operator::Odd { .. } => [p, p + 1.0, p + 2.0, p + 3.0],
        _ => [p, p + 2.0, p + 4.0, p + 6.0],
    }
}

/// Sub-grid strides combined by the forward transform's extrapolation.
const STRIDES: [usize; 5] = [1, 2, 3, 4, 5];

/// Weights `w` with `sum w_i = 1` and `sum w_i s_i^e = 0` for each exponent
/// `e`, so that `sum w_i T(s_i delta)` cancels those error powers.
fn richardson_weights(exponents: &[f64; 4]) -> [f64; 5] {
    let mut a = [[0.0f64; 6]; 5];
    for (i, &s) in STRIDES.iter().enumerate() {
        a[0][i] = 1.0;
        for (j, &e) in exponents.iter().enumerate() {
            a[j + 1][i] = (s as f64).powf(e);
        }
    }
    a[0][5] = 1.0;
    // Gaussian elimination with partial pivoting on the augmented matrix.
    for col in 0..5 {
        let pivot = (col..5)
            .max_by(|&r, &q| a[r][col].abs().total_cmp(&a[q][col].abs()))
            .expect("non-empty range");
        a.swap(col, pivot);
        for row in col + 1..5 {
            let factor = a[row][col] / a[col][col];
            for k in col..6 {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    let mut w = [0.0; 5];
    for row in (0..5).rev() {
        let tail: f64 = (row + 1..5).map(|k| a[row][k] * w[k]).sum();
        w[row] = (a[row][5] - tail) / a[row][row];
    }
    w
}

/// Spectral estimate `int e^{i tau h} Cov(h) dh` from a sampled covariance
/// curve, at every frequency of `freqs`.
///
/// The samples must have decayed below `1e-10` of the peak at both grid ends.
/// Away from the origin the integrand is smooth and the trapezoid rule is
/// spectrally accurate; the non-smooth point `h = 0` (where
/// `Cov(0) - Cov(h) ~ |h|^{p-1}`) contributes error terms in powers of the
/// step starting at `delta^p` (see [`aliasing_exponents`]); the leading
/// four are removed by Richardson
/// extrapolation over the sub-grids of stride 1 to 5 when the curve
/// records its model and has a sample at `h = 0`.
pub fn forward_fourier_covariance(cov: &Curve, freqs: Grid) -> Result<Curve> {
    if cov.quantity != Quantity::Covariance {
        return Err(Error::Argument(format!(
            "expected a covariance curve, got {:?}",
            cov.quantity
        )));
    }
    let grid = cov.grid;
    let values = &cov.values;
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (left, right) = (values[0].abs(), values[values.len() - 1].abs());
    if left > 1e-10 * peak || right > 1e-10 * peak {
        return Err(Error::InsufficientDecay { left, right, peak });
    }
    let zero = (0..grid.count()).find(|&k| grid.point(k).abs() <= 1e-9 * grid.step());
    let weights = cov
        .model
        .map(|m| richardson_weights(&aliasing_exponents(&m)));
    let mut re = Vec::with_capacity(freqs.count());
    let mut im = Vec::with_capacity(freqs.count());
    for tau in freqs.points() {
        let sum_with_stride = |stride: usize, origin: usize| -> Complex64 {
            let mut s = Complex64::new(0.0, 0.0);
            let mut k = origin % stride;
            while k < grid.count() {
                s += values[k] * Complex64::from_polar(1.0, tau * grid.point(k));
                k += stride;
            }
            s * grid.step() * stride as f64
        };
        let value = match (zero, &weights) {
            (Some(origin), Some(weights)) => STRIDES
                .iter()
                .zip(weights)
                .map(|(&s, &w)| w * sum_with_stride(s, origin))
                .sum(),
            _ => sum_with_stride(1, 0),
        };
        re.push(value.re);
        im.push(value.im);
    }
    let odd = cov.model.is_some_and(|m| m.family() == Family::OddOrder);
    Curve::new(
        cov.model,
        Quantity::Spectral,
        "forward-trapezoid",
        freqs,
        re,
        odd.then_some(im),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Sign;
    use approx::assert_relative_eq;

    #[test]
    fn continuation_matches_density_on_real_axis() {
        let models = [
            ModelSpec::weyl(1.3, 0.8, 2.0, 0.6).unwrap(),
            ModelSpec::weyl(1.0, 1.0, 1.0, 1.0).unwrap(),
            ModelSpec::even(0.7, 1.2, 1.0, 2).unwrap(),
            ModelSpec::odd(1.5, 0.75, 1.0, 1, Sign::Minus).unwrap(),
            ModelSpec::odd(1.5, 0.75, 1.0, 2, Sign::Plus).unwrap(),
        ];
        for m in &models {
            let t0 = TransformPlan::auto(m).frequency_cutoff();
            for tau in [t0, 2.0 * t0, 50.0 * t0] {
                let a = continued_density(m, Complex64::new(tau, 0.0));
                let b = spectral_density(m, tau);
                assert!(
                    (a - b).norm() <= 1e-13 * b.norm(),
                    "{m} at {tau}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn plan_validation() {
        assert!(TransformPlan::new(10.0, 255, Taper::None).is_err());
        assert!(TransformPlan::new(10.0, 1000, Taper::None).is_err());
        assert!(TransformPlan::new(-1.0, 1024, Taper::None).is_err());
        assert!(TransformPlan::new(10.0, 1024, Taper::TailCorrected).is_ok());
    }

    #[test]
    fn ornstein_uhlenbeck_pair() {
        let m = ModelSpec::weyl(1.0, 1.0, 1.0, 1.0).unwrap();
        let plan = TransformPlan::auto(&m);
        for h in [0.0, 0.3, 1.0, -2.5] {
            let v = inverse_fourier_at(&m, h, &plan).unwrap();
            assert_relative_eq!(v, (-f64::abs(h)).exp() / 2.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn truncated_plan_meets_decay_invariant() {
        let m = ModelSpec::even(1.0, 1.0, 1.0, 1).unwrap();
        let plan = TransformPlan::truncated(&m, 1 << 12).unwrap();
        let peak = spectral_density(&m, 0.0).re;
        assert!(spectral_density(&m, plan.frequency_cutoff()).re <= 1e-12 * peak);
        assert_eq!(plan.taper(), Taper::None);
    }

    #[test]
    fn richardson_weights_cancel_their_powers() {
        let exps = [1.5, 3.5, 5.5, 7.5];
        let w = richardson_weights(&exps);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for e in exps {
            let r: f64 = STRIDES
                .iter()
                .zip(&w)
                .map(|(&s, &w)| w * (s as f64).powf(e))
                .sum();
            assert!(r.abs() < 1e-10, "{e}: {r}");
        }
    }

    #[test]
    fn zero_curve_maps_to_zero() {
        let grid = Grid::new(-10.0, 0.1, 201).unwrap();
        let cov = Curve::new(
            None,
            Quantity::Covariance,
            "test",
            grid,
            vec![0.0; 201],
            None,
        )
        .unwrap();
        let f = forward_fourier_covariance(&cov, Grid::new(0.0, 0.5, 5).unwrap()).unwrap();
        assert!(f.values.iter().all(|&v| v == 0.0));
    }
}
