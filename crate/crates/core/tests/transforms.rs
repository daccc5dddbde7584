use approx::assert_relative_eq;
use fracspec::covariance::{covariance, Method};
use fracspec::kernels::Sign;
use fracspec::models::{spectral_density, Curve, Family, Grid, ModelSpec, Quantity};
use fracspec::quad;
use fracspec::transforms::{
    forward_fourier_covariance, inverse_fourier_at, inverse_fourier_spectral, Taper, TransformPlan,
};
use fracspec::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

fn ou() -> ModelSpec {
    ModelSpec::weyl(1.0, 1.0, 1.0, 1.0).unwrap()
}

/// Covariance curve on `[-half, half]` sampled by Fourier inversion, using
/// evenness for the real families.
fn sampled_covariance(m: &ModelSpec, step: f64, half: f64) -> Curve {
    let auto = TransformPlan::auto(m);
    let plan = TransformPlan::new(auto.frequency_cutoff(), 1024, Taper::TailCorrected).unwrap();
    let count = (2.0 * half / step).round() as usize + 1;
    let grid = Grid::new(-half, step, count).unwrap();
    let mut values = vec![0.0; count];
    let real = m.family() != Family::OddOrder;
    for k in 0..count {
        if real && k < count / 2 {
            continue;
        }
        values[k] = inverse_fourier_at(m, grid.point(k), &plan).unwrap();
    }
    if real {
        for k in 0..count / 2 {
            values[k] = values[count - 1 - k];
        }
    }
    Curve::new(
        Some(*m),
        Quantity::Covariance,
        "fourier-oracle",
        grid,
        values,
        None,
    )
    .unwrap()
}

#[test]
fn inverse_examples() {
    let lags = Grid::new(1.0, 1.0, 2).unwrap();
    for m in [ou(), ModelSpec::even(1.0, 0.5, 1.0, 1).unwrap()] {
        let c = inverse_fourier_spectral(&m, lags, &TransformPlan::auto(&m)).unwrap();
        assert_relative_eq!(c.values[0], 0.18393972058572117, max_relative = 1e-12);
        assert_eq!(c.method, "fourier-oracle");
        assert_eq!(c.quantity, Quantity::Covariance);
        assert!(c.values_imag.is_none());
    }
}

#[test]
fn ornstein_uhlenbeck_curve() {
    let m = ou();
    let lags = Grid::new(0.0, 0.1, 51).unwrap();
    let c = inverse_fourier_spectral(&m, lags, &TransformPlan::auto(&m)).unwrap();
    for (h, v) in lags.points().zip(&c.values) {
        assert_relative_eq!(*v, (-h).exp() / 2.0, max_relative = 1e-10);
    }
}

#[test]
fn odd_inverse_is_real() {
    // A non-negligible imaginary residual would surface as an accuracy error.
    let m = ModelSpec::odd(1.0, 1.0, 1.0, 1, Sign::Minus).unwrap();
    let lags = Grid::new(-5.0, 0.25, 41).unwrap();
    let c = inverse_fourier_spectral(&m, lags, &TransformPlan::auto(&m)).unwrap();
    assert!(c.values.iter().all(|v| v.is_finite()));
    assert_relative_eq!(c.values[20], 2.0 / 9.0, max_relative = 1e-10);
}

#[test]
fn divergent_variance_at_zero_lag() {
    let m = ModelSpec::weyl(1.0, 0.5, 1.0, 1.0).unwrap();
    let plan = TransformPlan::auto(&m);
    assert!(matches!(
        inverse_fourier_at(&m, 0.0, &plan),
        Err(Error::DivergentVariance { .. })
    ));
    // Away from zero the integral converges conditionally and is finite.
    assert!(inverse_fourier_at(&m, 1.0, &plan).unwrap() > 0.0);
}

#[test]
fn forward_ornstein_uhlenbeck_pair() {
    let grid = Grid::new(-40.0, 0.05, 1601).unwrap();
    let values = grid.points().map(|h| (-h.abs()).exp() / 2.0).collect();
    let cov = Curve::new(
        Some(ou()),
        Quantity::Covariance,
        "exact",
        grid,
        values,
        None,
    )
    .unwrap();
    let freqs = Grid::new(0.0, 1.0, 3).unwrap();
    let f = forward_fourier_covariance(&cov, freqs).unwrap();
    assert_eq!(f.quantity, Quantity::Spectral);
    for (tau, v) in freqs.points().zip(&f.values) {
        assert_relative_eq!(*v, 1.0 / (1.0 + tau * tau), max_relative = 1e-6);
    }
}

#[test]
fn forward_even_from_quadrature_covariance() {
    let m = ModelSpec::even(1.0, 1.0, 1.0, 1).unwrap();
    let grid = Grid::new(-40.0, 0.1, 801).unwrap();
    let values = grid
        .points()
        .map(|h| covariance(&m, h, Method::Quadrature).unwrap())
        .collect();
    let cov = Curve::new(
        Some(m),
        Quantity::Covariance,
        "quadrature",
        grid,
        values,
        None,
    )
    .unwrap();
    let freqs = Grid::new(0.0, 0.5, 7).unwrap();
    let f = forward_fourier_covariance(&cov, freqs).unwrap();
    for (tau, v) in freqs.points().zip(&f.values) {
        let exact = (1.0 + tau * tau).powi(-2);
        assert_relative_eq!(*v, exact, max_relative = 1e-6);
    }
}

#[test]
fn forward_requires_decayed_covariance() {
    let grid = Grid::new(-5.0, 0.1, 101).unwrap();
    let values = grid.points().map(|h| (-h.abs()).exp() / 2.0).collect();
    let cov = Curve::new(
        Some(ou()),
        Quantity::Covariance,
        "exact",
        grid,
        values,
        None,
    )
    .unwrap();
    let err = forward_fourier_covariance(&cov, Grid::new(0.0, 1.0, 2).unwrap()).unwrap_err();
    match err {
        Error::InsufficientDecay { left, right, peak } => {
            assert_relative_eq!(left, (-5.0f64).exp() / 2.0, max_relative = 1e-12);
            assert_relative_eq!(right, left, max_relative = 1e-12);
            assert_relative_eq!(peak, 0.5);
        }
        other => panic!("unexpected {other:?}"),
    }
    let spectral = Curve::spectral(&ou(), Grid::new(-5.0, 0.1, 101).unwrap());
    assert!(matches!(
        forward_fourier_covariance(&spectral, Grid::new(0.0, 1.0, 2).unwrap()),
        Err(Error::Argument(_))
    ));
}

#[test]
fn round_trips_reproduce_the_spectral_density() {
    let models = [
        ModelSpec::weyl(2.0, 0.75, 1.0, 1.0).unwrap(),
        ModelSpec::even(1.0, 0.5, 1.0, 2).unwrap(),
        ModelSpec::odd(1.0, 0.75, 1.0, 1, Sign::Plus).unwrap(),
    ];
    let freqs = Grid::new(0.0, 0.5, 7).unwrap();
    for m in &models {
        let f = forward_fourier_covariance(&sampled_covariance(m, 0.1, 60.0), freqs).unwrap();
        assert_eq!(f.values_imag.is_some(), m.family() == Family::OddOrder);
        for (k, tau) in freqs.points().enumerate() {
            let exact = spectral_density(m, tau);
            let im = f.values_imag.as_ref().map_or(0.0, |v| v[k]);
            let err =
                ((f.values[k] - exact.re).powi(2) + (im - exact.im).powi(2)).sqrt() / exact.norm();
            assert!(err < 1e-6, "{m} tau={tau}: {err:e}");
        }
    }
}

#[test]
fn plan_robustness() {
    let models = [
        ou(),
        ModelSpec::weyl(2.0, 0.75, 1.0, 1.0).unwrap(),
        ModelSpec::weyl(1.0, 1.0, 1.0, 0.5).unwrap(),
        ModelSpec::weyl(2.0, 2.0, 1.0, 0.8).unwrap(),
        ModelSpec::even(1.0, 0.5, 1.0, 2).unwrap(),
        ModelSpec::odd(2.0, 0.75, 1.0, 1, Sign::Minus).unwrap(),
    ];
    for m in &models {
        let base = TransformPlan::auto(m);
        let doubled = TransformPlan::new(
            2.0 * base.frequency_cutoff(),
            2 * base.sample_count(),
            base.taper(),
        )
        .unwrap();
        for h in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let a = inverse_fourier_at(m, h, &base).unwrap();
            let b = inverse_fourier_at(m, h, &doubled).unwrap();
            assert!((a - b).abs() <= 1e-8 * b.abs(), "{m} h={h}: {a} vs {b}");
        }
    }
}

#[test]
fn truncated_plan_agrees_with_tail_corrected_plan() {
    let m = ModelSpec::even(1.0, 1.0, 1.0, 1).unwrap();
    let truncated = TransformPlan::truncated(&m, 1 << 14).unwrap();
    assert_eq!(truncated.taper(), Taper::None);
    assert!(
        spectral_density(&m, truncated.frequency_cutoff()).re
            <= 1e-12 * spectral_density(&m, 0.0).re
    );
    for h in [0.0, 0.5, 2.0] {
        let a = inverse_fourier_at(&m, h, &truncated).unwrap();
        let b = inverse_fourier_at(&m, h, &TransformPlan::auto(&m)).unwrap();
        assert!((a - b).abs() <= 1e-9 * b.abs(), "h={h}: {a} vs {b}");
    }
}

#[test]
fn parseval_identity() {
    let m = ou();
    let plan = TransformPlan::auto(&m);
    let op = "parseval test";
    // int Cov^2 dh over the line, from the inverted covariance; beyond
    // |h| = 40 the integrand is below e^{-80}.
    let cov2 = |h: f64| inverse_fourier_at(&m, h, &plan).unwrap().powi(2);
    let time = 2.0 * quad::tanh_sinh(op, cov2, 0.0, 40.0, 1e-10).unwrap().value;
    // (1/2pi) int |f|^2 dtau.
    let freq = quad::exp_sinh(op, |t| spectral_density(&m, t).norm_sqr(), 1.0, 1e-12)
        .unwrap()
        .value
        / PI;
    // Both equal int e^{-2|h|}/4 dh = 1/4.
    assert_relative_eq!(time, 0.25, max_relative = 1e-8);
    assert_relative_eq!(freq, 0.25, max_relative = 1e-12);
    assert!((time - freq).abs() <= 1e-6 * freq);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn odd_inversions_are_hermitian(
        mu in 0.5f64..3.0,
        beta in 0.5f64..2.0,
        h in -8.0f64..8.0,
        plus in any::<bool>(),
        n in 1u32..3,
    ) {
        let kappa = if plus { Sign::Plus } else { Sign::Minus };
        let m = ModelSpec::odd(mu, beta, 1.0, n, kappa).unwrap();
        let v = inverse_fourier_at(&m, h, &TransformPlan::auto(&m));
        prop_assert!(v.is_ok(), "{}: {:?}", m, v);
        let r = inverse_fourier_at(&m.reflected(), -h, &TransformPlan::auto(&m)).unwrap();
        prop_assert!((v.unwrap() - r).abs() <= 1e-11);
    }

    #[test]
    fn real_inversions_are_even(mu in 0.5f64..3.0, beta in 0.6f64..2.0, alpha in 0.3f64..1.0, h in 0.05f64..8.0) {
        let m = ModelSpec::weyl(mu, beta, 1.0, alpha).unwrap();
        let plan = TransformPlan::auto(&m);
        prop_assert_eq!(inverse_fourier_at(&m, h, &plan).unwrap(), inverse_fourier_at(&m, -h, &plan).unwrap());
    }
}
