//! Self-checks of the numerical library: method agreement on a parameter
//! panel, transform round trips, special-function identities, kernel
//! properties and, on request, statistics of simulated paths.

use fracspec::covariance::{
    closed_form_available, covariance, covariance_closed_even_n1, covariance_printed_even_n1,
    quadrature_available, Method,
};
use fracspec::kernels::{heat_kernel, kernel_mass, KernelSpec, Sign};
use fracspec::models::{spectral_density, Curve, Family, Grid, ModelSpec, Operator, Quantity};
use fracspec::quad::{self, Tolerance};
use fracspec::specfun::{
    airy_ai, bessel_k, bessel_k_gr3478, gamma_fn, onesided_stable_density, StableIndex,
};
use fracspec::synth::{
    band_limited_covariance, empirical_covariance, periodogram, synthesize_with_tolerance,
};
use fracspec::transforms::{forward_fourier_covariance, inverse_fourier_at, Taper, TransformPlan};
use fracspec::Result;
use serde::Serialize;
use std::f64::consts::PI;

/// Which optional parts of the suite to run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SuiteConfig {
    pub quick: bool,
    pub statistical: bool,
    pub printed_even_form: bool,
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Passes when `|observed - expected| <= tolerance * |expected|`.
    pub fn relative(
        name: impl Into<String>,
        observed: Result<f64>,
        expected: f64,
        tolerance: f64,
    ) -> Self {
        Self::compare(
            name.into(),
            observed,
            expected,
            tolerance,
            tolerance * expected.abs(),
        )
    }

    /// Passes when `|observed - expected| <= tolerance`.
    pub fn absolute(
        name: impl Into<String>,
        observed: Result<f64>,
        expected: f64,
        tolerance: f64,
    ) -> Self {
        Self::compare(name.into(), observed, expected, tolerance, tolerance)
    }

    /// Passes when `observed >= expected`.
    pub fn at_least(name: impl Into<String>, observed: f64, expected: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            expected,
            tolerance: 0.0,
            pass: observed >= expected,
            note: None,
        }
    }

    fn compare(
        name: String,
        observed: Result<f64>,
        expected: f64,
        tolerance: f64,
        bound: f64,
    ) -> Self {
        match observed {
            Ok(v) => Self {
                name,
                observed: v,
                expected,
                tolerance,
                pass: (v - expected).abs() <= bound,
                note: None,
            },
            Err(e) => Self {
                name,
                observed: f64::NAN,
                expected,
                tolerance,
                pass: false,
                note: Some(e.to_string()),
            },
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Machine-readable summary of a suite run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub fn run_validation_suite(config: SuiteConfig) -> Report {
    let mut checks = Vec::new();
    checks.extend(method_agreement(config.quick));
    checks.extend(round_trips(config.quick));
    checks.extend(special_functions());
    checks.extend(kernels());
    if config.statistical {
        checks.extend(statistics());
    }
    if config.printed_even_form {
        checks.extend(printed_even_form());
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    Report {
        failed: checks.len() - passed,
        passed,
        checks,
    }
}

/// The covariance parameter panel: Weyl alpha in {0.5, 0.8, 1} x beta in
/// {0.75, 1, 2}; Even n in {1, 2} x beta in {0.5, 1}; Odd n = 1, kappa = -1,
/// +1 x beta in {0.75, 1}; each for mu in {1, 2}.
pub fn panel() -> Vec<ModelSpec> {
    let mut models = Vec::new();
    for mu in [1.0, 2.0] {
        for alpha in [0.5, 0.8, 1.0] {
            for beta in [0.75, 1.0, 2.0] {
                models.push(ModelSpec::weyl(mu, beta, 1.0, alpha).expect("panel model"));
            }
        }
        for n in [1, 2] {
            for beta in [0.5, 1.0] {
                models.push(ModelSpec::even(mu, beta, 1.0, n).expect("panel model"));
            }
        }
        for kappa in [Sign::Minus, Sign::Plus] {
            for beta in [0.75, 1.0] {
                models.push(ModelSpec::odd(mu, beta, 1.0, 1, kappa).expect("panel model"));
            }
        }
    }
    models
}

/// Lags of the method-agreement panel.
pub const PANEL_LAGS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

/// Whether `model` is a Weyl model with `alpha < 1` (power-law covariance).
pub fn is_fractional_weyl(model: &ModelSpec) -> bool {
    matches!(model.operator(), Operator::Weyl { alpha } if alpha < 1.0)
}

/// Agreement tolerance of the panel: 1e-6, relaxed to 1e-4 for the odd
/// family and for Weyl `alpha < 1`.
pub fn panel_tolerance(model: &ModelSpec) -> f64 {
    if model.family() == Family::OddOrder || is_fractional_weyl(model) {
        1e-4
    } else {
        1e-6
    }
}

fn method_agreement(quick: bool) -> Vec<Check> {
    let mut checks = Vec::new();
    for m in panel() {
        if quick && m.mu() != 1.0 {
            continue;
        }
        let fractional = is_fractional_weyl(&m);
        let lags: &[f64] = match (quick, fractional) {
            (false, _) => &PANEL_LAGS,
            (true, false) => &[0.5, 2.0],
            // The stable convolution takes about a second per lag.
            (true, true)
                if m.beta() == 1.0
                    && matches!(m.operator(), Operator::Weyl { alpha } if alpha == 0.8) =>
            {
                &[1.0]
            }
            (true, true) => &[],
        };
        let tol = panel_tolerance(&m);
        for &h in lags {
            let reference = covariance(&m, h, Method::FourierOracle);
            let Ok(fourier) = reference else {
                checks.push(Check::relative(
                    format!("agreement {m} h={h} fourier"),
                    reference,
                    f64::NAN,
                    tol,
                ));
                continue;
            };
            if quadrature_available(&m) {
                let name = format!("agreement {m} h={h} quadrature vs fourier");
                checks.push(Check::relative(
                    name,
                    covariance(&m, h, Method::Quadrature),
                    fourier,
                    tol,
                ));
            }
            if closed_form_available(&m, h) {
                let name = format!("agreement {m} h={h} closed vs fourier");
                checks.push(Check::relative(
                    name,
                    covariance(&m, h, Method::ClosedForm),
                    fourier,
                    tol,
                ));
            }
        }
    }
    checks
}

/// Interior frequencies of the round-trip checks.
pub const ROUND_TRIP_FREQUENCIES: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 2.0];

/// Covariance sampled by Fourier inversion on `[-60, 60]` at step 0.1.
/// Covariances of the real families are even, so only half is computed.
pub fn sampled_covariance(model: &ModelSpec) -> Result<Curve> {
    let auto = TransformPlan::auto(model);
    let plan = TransformPlan::new(auto.frequency_cutoff(), 1024, Taper::TailCorrected)?;
    let grid = Grid::new(-60.0, 0.1, 1201)?;
    let count = grid.count();
    let real = model.family() != Family::OddOrder;
    let mut values = vec![0.0; count];
    for (k, v) in values.iter_mut().enumerate() {
        if !(real && k < count / 2) {
            *v = inverse_fourier_at(model, grid.point(k), &plan)?;
        }
    }
    if real {
        for k in 0..count / 2 {
            values[k] = values[count - 1 - k];
        }
    }
    Curve::new(
        Some(*model),
        Quantity::Covariance,
        "fourier-oracle",
        grid,
        values,
        None,
    )
}

/// Largest relative deviation of the forward transform of the sampled
/// covariance from `f` over [`ROUND_TRIP_FREQUENCIES`].
pub fn round_trip_error(model: &ModelSpec) -> Result<f64> {
    let freqs = Grid::new(0.0, 0.5, ROUND_TRIP_FREQUENCIES.len())?;
    let f = forward_fourier_covariance(&sampled_covariance(model)?, freqs)?;
    Ok(freqs.points().enumerate().fold(0.0f64, |worst, (k, tau)| {
        let exact = spectral_density(model, tau);
        let im = f.values_imag.as_ref().map_or(0.0, |v| v[k]);
        let err =
            ((f.values[k] - exact.re).powi(2) + (im - exact.im).powi(2)).sqrt() / exact.norm();
        worst.max(err)
    }))
}

fn round_trips(quick: bool) -> Vec<Check> {
    // Power-law covariances (Weyl alpha < 1) never decay enough for a sampled
    // forward transform; their duality check is the agreement of the stable
    // convolution with the Fourier inversion above.
    panel()
        .into_iter()
        .filter(|m| !is_fractional_weyl(m))
        .filter(|m| !quick || (m.mu() == 1.0 && m.beta() == 1.0))
        .map(|m| {
            let tol = panel_tolerance(&m);
            Check::absolute(
                format!("round trip {m} max relative error"),
                round_trip_error(&m),
                0.0,
                tol,
            )
        })
        .collect()
}

/// `Ai(x)` from its Maclaurin series; accurate for `|x| <= 2`.
pub fn airy_series(x: f64) -> f64 {
    // Ai(0) = 3^{-2/3}/Gamma(2/3), -Ai'(0) = 3^{-1/3}/Gamma(1/3).
    let c1 = 0.355_028_053_887_817_2;
    let c2 = 0.258_819_403_792_806_8;
    let (mut f, mut g) = (0.0, 0.0);
    let (mut tf, mut tg) = (1.0, x);
    for k in 0..60 {
        f += tf;
        g += tg;
        let k3 = 3.0 * k as f64;
        tf *= x * x * x / ((k3 + 2.0) * (k3 + 3.0));
        tg *= x * x * x / ((k3 + 3.0) * (k3 + 4.0));
    }
    c1 * f - c2 * g
}

/// `int_0^inf f(z) dz` split at `z = 1` and integrated in `u = ln z` over
/// `[lo, hi]`.
fn log_integral(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    let g = |u: f64| f(u.exp()) * u.exp();
    let tol = Tolerance::rel(1e-12).with_abs(1e-300);
    Ok(quad::adaptive("log_integral", g, lo, 0.0, tol)?.value
        + quad::adaptive("log_integral", g, 0.0, hi, tol)?.value)
}

fn special_functions() -> Vec<Check> {
    let mut checks = Vec::new();
    let mut sampled = 0;
    'gr: for nu in [-1.5, 0.3, 1.0, 2.7] {
        for p in [0.5, 1.0, 2.0] {
            for (a, b) in [(0.3f64, 2.0f64), (1.0, 1.0)] {
                if sampled == 20 {
                    break 'gr;
                }
                let via_k = bessel_k(nu / p, 2.0 * (a * b).sqrt())
                    .map(|k| 2.0 / p * (a / b).powf(nu / (2.0 * p)) * k);
                let name = format!("GR 3.478 nu={nu} p={p} a={a} b={b}");
                checks.push(match via_k {
                    Ok(expected) => {
                        Check::relative(name, bessel_k_gr3478(nu, p, a, b), expected, 1e-8)
                    }
                    Err(e) => Check::relative(name, Err(e), f64::NAN, 1e-8),
                });
                sampled += 1;
            }
        }
    }
    for (nu, x) in [(0.3, 0.01), (1.5, 2.0), (4.25, 7.0)] {
        let expected = bessel_k(-nu, x).unwrap_or(f64::NAN);
        checks.push(Check::relative(
            format!("K_nu = K_-nu nu={nu} x={x}"),
            bessel_k(nu, x),
            expected,
            1e-12,
        ));
    }
    for nu in [0.5, 1.0, 2.5] {
        let x = 1e-4;
        let ratio = bessel_k(nu, x)
            .and_then(|k| Ok(k * x.powf(nu) / (2f64.powf(nu - 1.0) * gamma_fn(nu)?)));
        checks.push(Check::absolute(
            format!("K small-argument ratio nu={nu}"),
            ratio,
            1.0,
            1e-3,
        ));
    }
    for nu in [0.0, 0.5, 1.0] {
        let x: f64 = 50.0;
        let ratio = bessel_k(nu, x).map(|k| k * x.exp() * (2.0 * x / PI).sqrt());
        checks.push(Check::absolute(
            format!("K large-argument ratio nu={nu}"),
            ratio,
            1.0,
            1e-2,
        ));
    }
    for x in [0.0, 1.0] {
        checks.push(Check::absolute(
            format!("Ai({x}) vs series"),
            Ok(airy_ai(x)),
            airy_series(x),
            1e-12,
        ));
    }
    let half = StableIndex::one_sided(0.5).expect("valid index");
    for z in [0.05f64, 0.4, 2.0, 25.0] {
        let levy = (-0.25 / z).exp() / (2.0 * PI.sqrt() * z.powf(1.5));
        let value = onesided_stable_density(half, z, 1.0).map(|d| d.value);
        checks.push(Check::relative(
            format!("h_1/2 closed form z={z}"),
            value,
            levy,
            1e-8,
        ));
    }
    for alpha in [0.3, 0.5, 0.7, 0.9] {
        let idx = StableIndex::one_sided(alpha).expect("valid index");
        let laplace = log_integral(
            |z| (-z).exp() * onesided_stable_density(idx, z, 1.0).map_or(f64::NAN, |d| d.value),
            -12.0,
            5.0,
        );
        checks.push(Check::absolute(
            format!("one-sided stable Laplace transform alpha={alpha}"),
            laplace,
            (-1f64).exp(),
            1e-6,
        ));
    }
    checks
}

fn kernels() -> Vec<Check> {
    let mut checks = Vec::new();
    for n in [1, 2, 3] {
        let spec = KernelSpec::even(n).expect("valid kernel");
        checks.push(Check::absolute(
            format!("unit mass u_{}", 2 * n),
            kernel_mass(spec, 1.0),
            1.0,
            1e-8,
        ));
    }
    for kappa in [Sign::Minus, Sign::Plus] {
        let spec = KernelSpec::odd(1, kappa).expect("valid kernel");
        checks.push(Check::absolute(
            format!("unit mass u_3 kappa={kappa}"),
            kernel_mass(spec, 1.0),
            1.0,
            1e-6,
        ));
    }
    let u4 = KernelSpec::even(2).expect("valid kernel");
    let min = (0..400)
        .map(|i| heat_kernel(u4, i as f64 * 0.025, 1.0).unwrap_or(f64::NAN))
        .fold(f64::INFINITY, f64::min);
    checks.push(
        Check {
            name: "u_4 changes sign".into(),
            observed: min,
            expected: 0.0,
            tolerance: 0.0,
            pass: min < 0.0,
            note: None,
        }
        .with_note("minimum over 0 <= x < 10 must be negative"),
    );
    for kappa in [Sign::Minus, Sign::Plus] {
        let spec = KernelSpec::odd(1, kappa).expect("valid kernel");
        for (x, w) in [(-1.5f64, 0.5f64), (0.0, 1.0), (0.8, 2.0), (2.0, 1.0)] {
            let c = (3.0 * w).cbrt();
            let expected = airy_series(-kappa.value() * x / c) / c;
            let name = format!("u_3 kappa={kappa} x={x} w={w} vs scaled Airy");
            checks.push(Check::absolute(
                name,
                heat_kernel(spec, x, w),
                expected,
                1e-8,
            ));
        }
    }
    checks
}

/// Configuration of the statistical checks: Weyl (alpha = 0.8, beta = 1,
/// mu = 1), 2^16 samples at dt = 0.05. The aliasing guard is relaxed to
/// 1e-2 and covariances are compared with the band-limited covariance the
/// synthesized process actually has.
pub const STATISTICAL_COUNT: usize = 1 << 16;
pub const STATISTICAL_DT: f64 = 0.05;
pub const STATISTICAL_SEED: u64 = 2024;
pub const STATISTICAL_ALIAS_TOLERANCE: f64 = 1e-2;

fn statistics() -> Vec<Check> {
    let m = ModelSpec::weyl(1.0, 1.0, 1.0, 0.8).expect("valid model");
    let dt = STATISTICAL_DT;
    let path = match synthesize_with_tolerance(
        &m,
        STATISTICAL_COUNT,
        dt,
        STATISTICAL_SEED,
        STATISTICAL_ALIAS_TOLERANCE,
    ) {
        Ok(p) => p,
        Err(e) => {
            return vec![Check::absolute(
                "statistical path synthesis",
                Err(e),
                0.0,
                0.0,
            )]
        }
    };
    let mut checks = Vec::new();
    match empirical_covariance(&path, 5) {
        Ok(est) => {
            for k in [0usize, 1, 2, 5] {
                let name = format!("empirical covariance lag {k}dt within 3 half widths");
                checks.push(match band_limited_covariance(&m, k as f64 * dt, dt) {
                    Ok(exact) => {
                        Check::absolute(name, Ok(est.values[k]), exact, 3.0 * est.half_width[k])
                    }
                    Err(e) => Check::absolute(name, Err(e), f64::NAN, 0.0),
                });
            }
        }
        Err(e) => checks.push(Check::absolute("empirical covariance", Err(e), 0.0, 0.0)),
    }
    match periodogram(&path, 64) {
        Ok(per) => {
            let hits = per
                .grid
                .points()
                .zip(per.values.iter().zip(&per.half_width))
                .filter(|(tau, (v, w))| (*v - spectral_density(&m, *tau).re).abs() <= 3.0 * *w)
                .count();
            let fraction = hits as f64 / per.values.len() as f64;
            checks.push(Check::at_least(
                "periodogram bands within 3 half widths (fraction)",
                fraction,
                0.9,
            ));
        }
        Err(e) => checks.push(Check::absolute("periodogram", Err(e), 0.0, 0.0)),
    }
    checks
}

/// The misprinted even-order closed form tends to `sigma^2/mu` at
/// `beta = 1/2`, `h -> 0`, while the covariance tends to
/// `sigma^2/(2 sqrt(mu))`: their ratio is `2/sqrt(mu)`.
fn printed_even_form() -> Vec<Check> {
    [1.0, 2.0]
        .into_iter()
        .map(|mu: f64| {
            let h = 1e-6;
            let ratio = covariance_printed_even_n1(h, mu, 0.5, 1.0)
                .and_then(|p| Ok(p / covariance_closed_even_n1(h, mu, 0.5, 1.0)?));
            Check::relative(format!("printed even form / covariance at beta=1/2 mu={mu}"), ratio, 2.0 / mu.sqrt(), 1e-4)
                .with_note("expected discrepancy: the printed closed form disagrees with the covariance integral")
        })
        .collect()
}
