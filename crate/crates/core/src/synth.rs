//! Stationary Gaussian sample paths with a given spectral density, and the
//! periodogram / empirical-covariance estimators used to check them.
//!
//! # Random numbers
//!
//! Frequency bin `j` draws its two standard normals from
//! `ChaCha8Rng::seed_from_u64(seed)` switched to stream `j`
//! (`rand_chacha`), via `rand_distr::StandardNormal`. Each bin's draws depend
//! only on `(seed, j)`, so paths are reproducible regardless of how the bins
//! are processed.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{spectral_density, Family, Grid, ModelSpec};
use crate::transforms::{inverse_fourier_at, Taper, TransformPlan};

/// Default bound on `f(pi/dt) / f(0)`.
pub const DEFAULT_ALIAS_TOLERANCE: f64 = 1e-6;

/// A sampled path `x_k = X(k dt)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePath {
    pub model: ModelSpec,
    pub dt: f64,
    pub values: Vec<f64>,
    pub seed: u64,
}

impl SamplePath {
    /// Checks the length (at least two samples) and finiteness invariants.
    pub fn new(model: ModelSpec, dt: f64, values: Vec<f64>, seed: u64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Argument(format!(
                "dt must be positive and finite, got {dt}"
            )));
        }
        if values.len() < 2 {
            return Err(Error::Argument(format!(
                "a path needs at least 2 samples, got {}",
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Argument(format!("sample {k} is not finite")));
        }
        Ok(Self {
            model,
            dt,
            values,
            seed,
        })
    }

    /// Sample times `k dt`.
    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |k| k as f64 * self.dt)
    }
}

/// Estimates on a grid with approximate one-sigma half widths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateCurve {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub half_width: Vec<f64>,
}

impl EstimateCurve {
    pub fn new(grid: Grid, values: Vec<f64>, half_width: Vec<f64>) -> Result<Self> {
        if values.len() != grid.count() || half_width.len() != grid.count() {
            return Err(Error::Argument(format!(
                "{} values and {} half widths for a grid of {} points",
                values.len(),
                half_width.len(),
                grid.count()
            )));
        }
        if half_width.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::Argument("half widths must be nonnegative".into()));
        }
        Ok(Self {
            grid,
            values,
            half_width,
        })
    }
}

/// Ratio `f(pi/dt) / f(0)` that the aliasing guard bounds.
pub fn alias_ratio(model: &ModelSpec, dt: f64) -> f64 {
    spectral_density(model, PI / dt).re / spectral_density(model, 0.0).re
}

/// Largest `dt` with `f(pi/dt) <= tolerance f(0)`, by bisection on the
/// (decreasing) density.
fn dt_bound(model: &ModelSpec, tolerance: f64) -> f64 {
    let ok = |dt: f64| alias_ratio(model, dt) <= tolerance;
    let mut lo = 1e-300f64;
    let mut hi = 1.0f64;
    while ok(hi) && hi < 1e300 {
        lo = hi;
        hi *= 2.0;
    }
    if !ok(lo) {
        return 0.0;
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// [`synthesize_with_tolerance`] with the default aliasing guard.
pub fn synthesize(model: &ModelSpec, count: usize, dt: f64, seed: u64) -> Result<SamplePath> {
    synthesize_with_tolerance(model, count, dt, seed, DEFAULT_ALIAS_TOLERANCE)
}

/// Gaussian path with spectral density `f` band-limited to `|tau| < pi/dt`.
///
/// With `dtau = 2 pi / (count dt)` and bins `tau_j = (j + 1/2) dtau`,
/// `j < count/2`,
/// `x_k = sum_j sqrt(f(tau_j) dtau / pi) (A_j cos(tau_j t_k) + B_j sin(tau_j t_k))`
/// for independent standard normals `A_j`, `B_j`. Its covariance is the
/// midpoint-rule approximation of `(1/pi) int_0^{pi/dt} f(tau) cos(tau h) dtau`,
/// which is [`band_limited_covariance`] up to `O(dtau^2)`.
pub fn synthesize_with_tolerance(
    model: &ModelSpec,
    count: usize,
    dt: f64,
    seed: u64,
    alias_tolerance: f64,
) -> Result<SamplePath> {
    if model.family() == Family::OddOrder {
        return Err(Error::Argument(format!(
            "synthesis needs a real spectral density; {model} is complex"
        )));
    }
    if count < 256 {
        return Err(Error::Argument(format!(
            "count must be at least 256, got {count}"
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Argument(format!(
            "dt must be positive and finite, got {dt}"
        )));
    }
    if !model.has_finite_variance() {
        return Err(Error::DivergentVariance {
            exponent: model.decay_exponent(),
        });
    }
    let ratio = alias_ratio(model, dt);
    if ratio > alias_tolerance {
        return Err(Error::AliasGuard {
            ratio,
            tolerance: alias_tolerance,
            dt_bound: dt_bound(model, alias_tolerance),
        });
    }
    let dtau = 2.0 * PI / (count as f64 * dt);
    let mut bins = vec![Complex64::new(0.0, 0.0); count];
    for (j, bin) in bins.iter_mut().take(count / 2).enumerate() {
        let tau = (j as f64 + 0.5) * dtau;
        let weight = (spectral_density(model, tau).re * dtau / PI).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        // Re[(A - iB) e^{i tau t}] = A cos(tau t) + B sin(tau t).
        *bin = weight * Complex64::new(a, -b);
    }
    FftPlanner::new().plan_fft_inverse(count).process(&mut bins);
    // e^{i tau_j t_k} = e^{2 pi i j k / count} e^{i pi k / count}.
    let values = bins
        .iter()
        .enumerate()
        .map(|(k, z)| (z * Complex64::from_polar(1.0, PI * k as f64 / count as f64)).re)
        .collect();
    SamplePath::new(*model, dt, values, seed)
}

/// `(1/2pi) int_{-pi/dt}^{pi/dt} e^{-i tau h} f(tau) dtau`: the covariance of
/// the band-limited process that [`synthesize`] samples.
pub fn band_limited_covariance(model: &ModelSpec, h: f64, dt: f64) -> Result<f64> {
    let plan = TransformPlan::new(PI / dt, 1 << 14, Taper::None)?;
    inverse_fourier_at(model, h, &plan)
}

/// Autocovariance sums `sum_{k} x_k x_{k+r}`, `r < lags`, by zero-padded FFT.
fn lag_products(x: &[f64], lags: usize) -> Vec<f64> {
    let n = x.len();
    let size = (n + lags).next_power_of_two();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(size, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut buf);
    for z in buf.iter_mut() {
        *z = Complex64::new(z.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    buf.iter().take(lags).map(|z| z.re / size as f64).collect()
}

/// Biased (`1/N`) autocovariance at lags `0..=max_lag` (times `dt`), with
/// Bartlett standard errors
/// `Var c(h) ~ (1/N) sum_{|r| <= M} [c(r)^2 + c(r + h) c(r - h)]`, `M = sqrt(N)`,
/// evaluated with the estimates themselves.
pub fn empirical_covariance(path: &SamplePath, max_lag: usize) -> Result<EstimateCurve> {
    let n = path.values.len();
    if max_lag > n / 8 {
        return Err(Error::Argument(format!(
            "max_lag {max_lag} exceeds count/8 = {} for a path of {n} samples",
            n / 8
        )));
    }
    let window = (n as f64).sqrt() as usize;
    let sums = lag_products(&path.values, max_lag + 2 * window + 1);
    let c: Vec<f64> = sums.iter().map(|s| s / n as f64).collect();
    let at = |r: i64| c[r.unsigned_abs() as usize];
    let w = window as i64;
    let values: Vec<f64> = c[..=max_lag].to_vec();
    let half_width = (0..=max_lag as i64)
        .map(|h| {
            let var: f64 = (-w..=w)
                .map(|r| at(r) * at(r) + at(r + h) * at(r - h))
                .sum::<f64>()
                / n as f64;
            var.max(0.0).sqrt()
        })
        .collect();
    let grid = Grid::new(0.0, path.dt, max_lag + 1)?;
    EstimateCurve::new(grid, values, half_width)
}

/// Band-averaged periodogram `I(tau_j) = (dt/N) |sum_k x_k e^{-i tau_j t_k}|^2`
/// over the Fourier frequencies `tau_j = 2 pi j / (N dt)`, `1 <= j < N/2`,
/// in `band_count` equal bands of consecutive bins (any remainder at the top
/// is dropped). Values are reported at band centres with half width
/// `value / sqrt(bins per band)`.
pub fn periodogram(path: &SamplePath, band_count: usize) -> Result<EstimateCurve> {
    let n = path.values.len();
    if band_count < 8 {
        return Err(Error::Argument(format!(
            "band_count must be at least 8, got {band_count}"
        )));
    }
    let available = n / 2 - 1;
    let per_band = available / band_count;
    if per_band == 0 {
        return Err(Error::Argument(format!(
            "{band_count} bands over {available} positive frequencies leave empty bands"
        )));
    }
    let mut buf: Vec<Complex64> = path
        .values
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = path.dt / n as f64;
    let dtau = 2.0 * PI / (n as f64 * path.dt);
    let values: Vec<f64> = (0..band_count)
        .map(|b| {
            let first = 1 + b * per_band;
            buf[first..first + per_band]
                .iter()
                .map(|z| scale * z.norm_sqr())
                .sum::<f64>()
                / per_band as f64
        })
        .collect();
    let half_width = values
        .iter()
        .map(|v| v / (per_band as f64).sqrt())
        .collect();
    // Centre of bins 1 + b p ..= (b + 1) p.
    let centre0 = (1.0 + per_band as f64) / 2.0 * dtau;
    let grid = Grid::new(centre0, per_band as f64 * dtau, band_count)?;
    EstimateCurve::new(grid, values, half_width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Sign;

    fn ou() -> ModelSpec {
        ModelSpec::weyl(1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn guard_reports_a_usable_dt() {
        let m = ou();
        let err = synthesize(&m, 1024, 0.1, 1).unwrap_err();
        let Error::AliasGuard {
            ratio, dt_bound, ..
        } = err
        else {
            panic!("expected alias guard error, got {err:?}");
        };
        assert!(ratio > 1e-6);
        assert!(alias_ratio(&m, dt_bound) <= 1e-6);
        assert!(alias_ratio(&m, dt_bound * 1.01) > 1e-6);
        assert!(synthesize(&m, 1024, dt_bound, 1).is_ok());
    }

    #[test]
    fn rejects_bad_requests() {
        let odd = ModelSpec::odd(1.0, 1.0, 1.0, 1, Sign::Minus).unwrap();
        assert!(synthesize(&odd, 1024, 1e-4, 1).is_err());
        assert!(synthesize(&ou(), 128, 1e-3, 1).is_err());
        assert!(synthesize(&ou(), 1024, -1.0, 1).is_err());
        let divergent = ModelSpec::weyl(1.0, 0.5, 1.0, 1.0).unwrap();
        assert!(matches!(
            synthesize_with_tolerance(&divergent, 1024, 0.01, 1, 1.0),
            Err(Error::DivergentVariance { .. })
        ));
    }

    #[test]
    fn lag_products_match_direct_sums() {
        let x: Vec<f64> = (0..50).map(|k| ((k * 7 % 11) as f64 - 5.0) / 3.0).collect();
        let fast = lag_products(&x, 6);
        for (r, v) in fast.iter().enumerate() {
            let direct: f64 = (0..x.len() - r).map(|k| x[k] * x[k + r]).sum();
            assert!(
                (v - direct).abs() <= 1e-12 * direct.abs().max(1.0),
                "{r}: {v} vs {direct}"
            );
        }
    }

    #[test]
    fn estimators_reject_bad_parameters() {
        let path = SamplePath::new(ou(), 0.1, vec![1.0; 256], 0).unwrap();
        assert!(empirical_covariance(&path, 33).is_err());
        assert!(empirical_covariance(&path, 32).is_ok());
        assert!(periodogram(&path, 7).is_err());
        assert!(periodogram(&path, 200).is_err());
        assert!(SamplePath::new(ou(), 0.1, vec![1.0], 0).is_err());
        assert!(SamplePath::new(ou(), 0.1, vec![1.0, f64::NAN], 0).is_err());
    }
}
