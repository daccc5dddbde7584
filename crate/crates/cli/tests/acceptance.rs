//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the lines are always printed; exits non-zero if any criterion
//! fails.

use fracspec::covariance::{
    covariance, covariance_closed_even_n1, covariance_printed_even_n1,
    covariance_stable_convolution, decay_rate, Method,
};
use fracspec::kernels::{heat_kernel, kernel_mass, truncation_radius, KernelSpec, Sign};
use fracspec::models::{spectral_density, Curve, Family, Grid, ModelSpec, Operator, Quantity};
use fracspec::quad::{self, Tolerance};
use fracspec::specfun::{
    airy_ai, bessel_k, bessel_k_gr3478, gamma_fn, onesided_stable_density, StableIndex,
};
use fracspec::synth::{
    band_limited_covariance, empirical_covariance, periodogram, synthesize_with_tolerance,
};
use fracspec::transforms::{forward_fourier_covariance, inverse_fourier_at, Taper, TransformPlan};
use std::f64::consts::PI;
use std::time::{Duration, Instant};

/// Outcome of one criterion: pass flag plus a one-line account of the
/// observations behind it.
struct Verdict {
    pass: bool,
    detail: String,
}

/// Collects sub-checks of a criterion; the first failures are kept for the
/// report line.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn verdict(self, summary: String) -> Verdict {
        let pass = self.failures.is_empty();
        let detail = if pass {
            format!("{} checks; {summary}", self.checked)
        } else {
            let shown: Vec<_> = self.failures.iter().take(3).cloned().collect();
            format!(
                "{} of {} checks failed; {summary}; e.g. {}",
                self.failures.len(),
                self.checked,
                shown.join(" | ")
            )
        };
        Verdict { pass, detail }
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn weyl(mu: f64, beta: f64, alpha: f64) -> ModelSpec {
    ModelSpec::weyl(mu, beta, 1.0, alpha).unwrap()
}

/// `Ai(x)` from the Maclaurin series with `Ai(0) = 3^{-2/3}/Gamma(2/3)` and
/// `Ai'(0) = -3^{-1/3}/Gamma(1/3)`; accurate to ~1e-15 for `|x| <= 2`.
fn airy_series(x: f64) -> f64 {
    let c1 = 0.355_028_053_887_817_239;
    let c2 = 0.258_819_403_792_806_798;
    let (mut f, mut g) = (0.0, 0.0);
    let (mut tf, mut tg) = (1.0, x);
    for k in 0..60 {
        f += tf;
        g += tg;
        let k3 = 3.0 * k as f64;
        tf *= x.powi(3) / ((k3 + 2.0) * (k3 + 3.0));
        tg *= x.powi(3) / ((k3 + 3.0) * (k3 + 4.0));
    }
    c1 * f - c2 * g
}

// 1. Ornstein-Uhlenbeck anchor.
fn ornstein_uhlenbeck() -> Verdict {
    let m = weyl(1.0, 1.0, 1.0);
    let mut t = Tally::default();
    for k in -40..=40 {
        let tau = 0.25 * k as f64;
        let f = spectral_density(&m, tau);
        let exact = 1.0 / (1.0 + tau * tau);
        t.check(rel_err(f.re, exact) <= 1e-15 && f.im == 0.0, || {
            format!("f({tau}) = {f}")
        });
    }
    let mut worst = 0.0f64;
    for k in 0..=50 {
        let h = 0.1 * k as f64;
        let exact = (-h).exp() / 2.0;
        for method in [
            Method::ClosedForm,
            Method::Quadrature,
            Method::FourierOracle,
        ] {
            match covariance(&m, h, method) {
                Ok(v) => {
                    worst = worst.max((v - exact).abs());
                    t.check((v - exact).abs() <= 1e-10, || {
                        format!("{method} at h={h}: {v} vs {exact}")
                    });
                }
                Err(e) => t.check(false, || format!("{method} at h={h}: {e}")),
            }
        }
    }
    t.verdict(format!(
        "f = 1/(1+tau^2) to 1e-15; max |Cov - e^-h/2| over 3 methods = {worst:.1e} (tol 1e-10)"
    ))
}

/// The covariance parameter panel.
fn panel() -> Vec<ModelSpec> {
    let mut models = Vec::new();
    for mu in [1.0, 2.0] {
        for alpha in [0.5, 0.8, 1.0] {
            for beta in [0.75, 1.0, 2.0] {
                models.push(weyl(mu, beta, alpha));
            }
        }
        for n in [1, 2] {
            for beta in [0.5, 1.0] {
                models.push(ModelSpec::even(mu, beta, 1.0, n).unwrap());
            }
        }
        for kappa in [Sign::Minus, Sign::Plus] {
            for beta in [0.75, 1.0] {
                models.push(ModelSpec::odd(mu, beta, 1.0, 1, kappa).unwrap());
            }
        }
    }
    models
}

fn fractional(m: &ModelSpec) -> bool {
    matches!(m.operator(), Operator::Weyl { alpha } if alpha < 1.0)
}

/// Covariance sampled by Fourier inversion on `[-60, 60]`, step 0.1.
fn sampled_covariance(m: &ModelSpec) -> Curve {
    let plan = TransformPlan::new(
        TransformPlan::auto(m).frequency_cutoff(),
        1024,
        Taper::TailCorrected,
    )
    .unwrap();
    let grid = Grid::new(-60.0, 0.1, 1201).unwrap();
    let real = m.family() != Family::OddOrder;
    let mut values = vec![0.0; grid.count()];
    for k in 0..grid.count() {
        if !(real && k < 600) {
            values[k] = inverse_fourier_at(m, grid.point(k), &plan).unwrap();
        }
    }
    if real {
        for k in 0..600 {
            values[k] = values[1200 - k];
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

// 2. Duality suite.
fn duality() -> Verdict {
    let lags = [0.1, 0.5, 1.0, 2.0, 5.0];
    let mut t = Tally::default();
    let (mut worst_fast, mut worst_slow) = (0.0f64, 0.0f64);
    for m in panel() {
        let tol = if fractional(&m) || m.family() == Family::OddOrder {
            1e-4
        } else {
            1e-6
        };
        let mut note = |err: f64, m: &ModelSpec| {
            if tol == 1e-6 {
                worst_fast = worst_fast.max(err);
            } else {
                worst_slow = worst_slow.max(err);
            }
            let _ = m;
        };
        // Inverse transform against the independent time-domain method: the
        // stable convolution for Weyl alpha < 1, gamma-mixed kernels otherwise.
        for h in lags {
            let inverse = inverse_fourier_at(&m, h, &TransformPlan::auto(&m));
            let direct = covariance(&m, h, Method::Quadrature);
            match (inverse, direct) {
                (Ok(a), Ok(b)) => {
                    note(rel_err(a, b), &m);
                    t.check(rel_err(a, b) <= tol, || {
                        format!("{m} h={h}: inverse {a} vs {b}")
                    });
                }
                (a, b) => t.check(false, || format!("{m} h={h}: {a:?} / {b:?}")),
            }
        }
        // Forward transform of the sampled inverse reproduces f. Power-law
        // covariances never decay enough to be sampled, so Weyl alpha < 1 is
        // covered by the convolution comparison above.
        if !fractional(&m) {
            let freqs = Grid::new(0.0, 0.5, 5).unwrap();
            let f = forward_fourier_covariance(&sampled_covariance(&m), freqs).unwrap();
            for (k, tau) in freqs.points().enumerate() {
                let exact = spectral_density(&m, tau);
                let im = f.values_imag.as_ref().map_or(0.0, |v| v[k]);
                let err = ((f.values[k] - exact.re).powi(2) + (im - exact.im).powi(2)).sqrt()
                    / exact.norm();
                note(err, &m);
                t.check(err <= tol, || {
                    format!("{m} tau={tau}: round trip error {err:.1e}")
                });
            }
        }
    }
    t.verdict(format!(
        "34 panel models; worst relative error {worst_fast:.1e} (tol 1e-6), {worst_slow:.1e} on odd/alpha<1 (tol 1e-4)"
    ))
}

// 3. Even-order closed form and the printed form.
fn even_order_closed_form() -> Verdict {
    let mut t = Tally::default();
    let (mut worst_quad, mut worst_fourier) = (0.0f64, 0.0f64);
    for beta in [0.5, 1.0, 2.0] {
        for mu in [1.0, 2.0] {
            let m = ModelSpec::even(mu, beta, 1.0, 1).unwrap();
            for h in [0.5, 1.0, 2.0] {
                let closed = covariance_closed_even_n1(h, mu, beta, 1.0).unwrap();
                let quad = covariance(&m, h, Method::Quadrature).unwrap();
                let fourier = covariance(&m, h, Method::FourierOracle).unwrap();
                worst_quad = worst_quad.max(rel_err(closed, quad));
                worst_fourier = worst_fourier.max(rel_err(closed, fourier));
                t.check(rel_err(closed, quad) <= 1e-10, || {
                    format!("{m} h={h}: {closed} vs quadrature {quad}")
                });
                t.check(rel_err(closed, fourier) <= 1e-8, || {
                    format!("{m} h={h}: {closed} vs fourier {fourier}")
                });
            }
        }
    }
    let mut gaps = Vec::new();
    for mu in [1.0, 2.0] {
        let printed = covariance_printed_even_n1(1e-6, mu, 0.5, 1.0).unwrap();
        let integral = covariance(
            &ModelSpec::even(mu, 0.5, 1.0, 1).unwrap(),
            1e-6,
            Method::Quadrature,
        )
        .unwrap();
        let gap = rel_err(printed, integral);
        gaps.push(format!("{gap:.3}"));
        t.check(gap > 0.1, || {
            format!("printed form within 10% at mu={mu}: {printed} vs {integral}")
        });
    }
    t.verdict(format!(
        "closed vs quadrature {worst_quad:.1e} (tol 1e-10), vs fourier {worst_fourier:.1e} (tol 1e-8); \
         documented discrepancy of the printed form at beta=1/2, h=1e-6: relative gap {} (> 0.1)",
        gaps.join(", ")
    ))
}

/// `int_0^inf f(z) dz` in the variable `u = ln z` over `[lo, hi]`.
fn log_integral(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let g = |u: f64| f(u.exp()) * u.exp();
    let tol = Tolerance::rel(1e-12).with_abs(1e-300);
    quad::adaptive("oracle", g, lo, 0.0, tol).unwrap().value
        + quad::adaptive("oracle", g, 0.0, hi, tol).unwrap().value
}

// 4. Special-function identities.
fn special_functions() -> Verdict {
    let mut t = Tally::default();
    let mut sample = Vec::new();
    for nu in [-1.5, 0.3, 1.0, 2.7] {
        for p in [0.5, 1.0, 2.0] {
            for (a, b) in [(0.3f64, 2.0f64), (1.0, 1.0)] {
                sample.push((nu, p, a, b));
            }
        }
    }
    for &(nu, p, a, b) in sample.iter().take(20) {
        let direct = bessel_k_gr3478(nu, p, a, b).unwrap();
        let via_k = 2.0 / p
            * (a / b).powf(nu / (2.0 * p))
            * bessel_k(nu / p, 2.0 * (a * b).sqrt()).unwrap();
        t.check(rel_err(direct, via_k) <= 1e-8, || {
            format!("GR 3.478 nu={nu} p={p}: {direct} vs {via_k}")
        });
    }
    for (nu, x) in [(0.3, 0.01), (1.5, 2.0), (4.25, 7.0), (11.0, 1e-6)] {
        let (a, b) = (bessel_k(nu, x).unwrap(), bessel_k(-nu, x).unwrap());
        t.check(rel_err(a, b) <= 1e-12, || {
            format!("K_{nu}({x}) = {a} vs K_-{nu} = {b}")
        });
    }
    for nu in [0.5f64, 1.0, 2.5] {
        let x = 1e-4f64;
        let r =
            bessel_k(nu, x).unwrap() * x.powf(nu) / (2f64.powf(nu - 1.0) * gamma_fn(nu).unwrap());
        t.check((r - 1.0).abs() <= 1e-3, || {
            format!("small-argument ratio nu={nu}: {r}")
        });
        let x = 50.0f64;
        if nu <= 1.0 {
            let r = bessel_k(nu, x).unwrap() * x.exp() * (2.0 * x / PI).sqrt();
            t.check((r - 1.0).abs() <= 1e-2, || {
                format!("large-argument ratio nu={nu}: {r}")
            });
        }
    }
    let mut worst_airy = 0.0f64;
    for x in [0.0, 1.0] {
        let err = (airy_ai(x) - airy_series(x)).abs();
        worst_airy = worst_airy.max(err);
        t.check(err <= 1e-12, || {
            format!("Ai({x}): {} vs series {}", airy_ai(x), airy_series(x))
        });
    }
    let half = StableIndex::one_sided(0.5).unwrap();
    for z in [0.05f64, 0.4, 1.0, 2.0, 25.0] {
        let levy = (-0.25 / z).exp() / (2.0 * PI.sqrt() * z.powf(1.5));
        let v = onesided_stable_density(half, z, 1.0).unwrap().value;
        t.check(rel_err(v, levy) <= 1e-8, || {
            format!("h_1/2({z}) = {v} vs {levy}")
        });
    }
    let mut worst_laplace = 0.0f64;
    for alpha in [0.3, 0.5, 0.7, 0.9] {
        let idx = StableIndex::one_sided(alpha).unwrap();
        let v = log_integral(
            |z| (-z).exp() * onesided_stable_density(idx, z, 1.0).unwrap().value,
            -12.0,
            5.0,
        );
        let err = (v - (-1f64).exp()).abs();
        worst_laplace = worst_laplace.max(err);
        t.check(err <= 1e-6, || {
            format!("Laplace transform alpha={alpha}: {v}")
        });
    }
    t.verdict(format!(
        "GR 3.478 on 20 points, K_nu = K_-nu, asymptote ratios, Ai vs series {worst_airy:.1e}, \
         h_1/2 closed form, Laplace check {worst_laplace:.1e} (tol 1e-6)"
    ))
}

// 5. Kernel suite.
fn kernel_suite() -> Verdict {
    let mut t = Tally::default();
    for n in [1u32, 2, 3] {
        let spec = KernelSpec::even(n).unwrap();
        for w in [0.5, 1.0] {
            let mass = kernel_mass(spec, w).unwrap();
            t.check((mass - 1.0).abs() <= 1e-8, || {
                format!("mass of u_{} at w={w}: {mass}", 2 * n)
            });
            // Independent cross-check by Gauss-Legendre panels.
            let r = truncation_radius(spec, w);
            let direct = quad::composite(quad::gl20(), -r, r, 400, |x| {
                heat_kernel(spec, x, w).unwrap()
            });
            t.check((direct - 1.0).abs() <= 1e-8, || {
                format!("direct mass of u_{}: {direct}", 2 * n)
            });
            for xi in [0.0f64, 0.5, 1.0, 2.0] {
                let transform = 2.0
                    * quad::composite(quad::gl20(), 0.0, r, 400, |x| {
                        (xi * x).cos() * heat_kernel(spec, x, w).unwrap()
                    });
                let expect = (-xi.powi(2 * n as i32) * w).exp();
                t.check((transform - expect).abs() <= 1e-6, || {
                    format!(
                        "transform of u_{} at xi={xi}: {transform} vs {expect}",
                        2 * n
                    )
                });
            }
        }
    }
    for kappa in [Sign::Minus, Sign::Plus] {
        let spec = KernelSpec::odd(1, kappa).unwrap();
        for w in [0.3, 2.0] {
            let mass = kernel_mass(spec, w).unwrap();
            t.check((mass - 1.0).abs() <= 1e-6, || {
                format!("mass of u_3 kappa={kappa} w={w}: {mass}")
            });
        }
        for (x, w) in [
            (-1.5f64, 0.5f64),
            (0.0, 1.0),
            (0.8, 2.0),
            (2.0, 1.0),
            (-2.5, 3.0),
        ] {
            let c = (3.0 * w).cbrt();
            let expect = airy_series(-kappa.value() * x / c) / c;
            let u = heat_kernel(spec, x, w).unwrap();
            t.check((u - expect).abs() <= 1e-8, || {
                format!("u_3 kappa={kappa} ({x}, {w}): {u} vs {expect}")
            });
        }
    }
    let u4 = KernelSpec::even(2).unwrap();
    let min = (0..400)
        .map(|i| heat_kernel(u4, i as f64 * 0.025, 1.0).unwrap())
        .fold(f64::INFINITY, f64::min);
    t.check(min < 0.0, || format!("u_4 never negative (min {min})"));
    t.verdict(format!(
        "unit masses, Fourier consistency, order-3 Airy scaling; min u_4 = {min:.3e} < 0"
    ))
}

// 6. Odd-order covariance.
fn odd_order() -> Verdict {
    let mut t = Tally::default();
    // Ai(0) 3^{-1/3} Gamma(5/3)/Gamma(2) = 3^{-1} (2/3) Gamma(2/3)/Gamma(2/3) = 2/9.
    let exact: f64 = 2.0 / 9.0;
    t.check((exact - 0.22223).abs() <= 1e-4, || {
        "2/9 outside 0.22223 +- 1e-4".into()
    });
    let m = ModelSpec::odd(1.0, 1.0, 1.0, 1, Sign::Minus).unwrap();
    let mut values = Vec::new();
    for method in [
        Method::ClosedForm,
        Method::Quadrature,
        Method::FourierOracle,
    ] {
        let v = covariance(&m, 0.0, method).unwrap();
        values.push(format!("{method} {v:.12}"));
        t.check(
            (v - 0.22223).abs() <= 1e-4 && (v - exact).abs() <= 1e-10,
            || format!("{method}: {v}"),
        );
    }
    let plus = m.reflected();
    let mut reflections = 0;
    for k in -40..=40 {
        let h = 0.25 * k as f64;
        let a = covariance(&plus, h, Method::Auto).unwrap();
        let b = covariance(&m, -h, Method::Auto).unwrap();
        t.check(a == b, || format!("reflection at h={h}: {a} vs {b}"));
        reflections += 1;
    }
    t.verdict(format!(
        "Cov(0): {} (2/9 = {exact:.12}); reflection exact at {reflections} lags",
        values.join(", ")
    ))
}

// 7. Stable-convolution theorem.
fn stable_convolution() -> Verdict {
    let mut t = Tally::default();
    let mut worst = 0.0f64;
    for alpha in [0.5, 0.7] {
        for beta in [1.0, 2.0] {
            let m = weyl(1.0, beta, alpha);
            // Cov(0) is finite only when 2 alpha beta > 1.
            let lags: &[f64] = if m.has_finite_variance() {
                &[0.0, 0.5, 1.0, 2.0]
            } else {
                &[0.5, 1.0, 2.0]
            };
            for &h in lags {
                let conv = covariance_stable_convolution(&m, h).unwrap();
                let fourier = covariance(&m, h, Method::FourierOracle).unwrap();
                worst = worst.max(rel_err(conv, fourier));
                t.check(rel_err(conv, fourier) <= 1e-4, || {
                    format!("{m} h={h}: {conv} vs {fourier}")
                });
            }
        }
    }
    t.verdict(format!(
        "convolution vs Fourier inversion, worst relative error {worst:.1e} (tol 1e-4)"
    ))
}

// 8. Asymptotics.
fn asymptotics() -> Verdict {
    let mut t = Tally::default();
    let cases = [
        (weyl(1.0, 2.0, 1.0), 15.0, 25.0),
        (weyl(2.0, 1.0, 1.0), 5.0, 10.0),
        (ModelSpec::even(1.0, 0.5, 1.0, 1).unwrap(), 5.0, 10.0),
    ];
    let mut rates = Vec::new();
    for (m, h1, h2) in cases {
        let r = decay_rate(&m, h1, h2).unwrap();
        // Weyl mu enters as mu; the even family's exponential rate is sqrt(mu).
        let mu = if m.family() == Family::EvenOrder {
            m.mu().sqrt()
        } else {
            m.mu()
        };
        rates.push(format!("{m} ({h1}, {h2}) -> {r:.4}"));
        t.check(rel_err(r, mu) <= 0.02, || {
            format!("{m} decay_rate({h1}, {h2}) = {r:.4}, not within 2% of {mu}")
        });
    }
    for beta in [1.0, 2.0] {
        let scaled: Vec<f64> = [0.5, 1.0, 2.0]
            .iter()
            .map(|&mu| {
                covariance(&weyl(mu, beta, 1.0), 1e-12, Method::Auto).unwrap()
                    * mu.powf(2.0 * beta - 1.0)
            })
            .collect();
        for s in &scaled[1..] {
            t.check(rel_err(*s, scaled[0]) <= 1e-8, || {
                format!("Cov(0+) mu^(2beta-1) not constant at beta={beta}")
            });
        }
    }
    t.verdict(format!(
        "decay rates: {}; Cov(0+) mu^(2beta-1) constant",
        rates.join("; ")
    ))
}

// 9. Statistical suite.
fn statistics() -> Verdict {
    let mut t = Tally::default();
    let m = weyl(1.0, 1.0, 0.8);
    let dt = 0.05;
    // f(pi/dt)/f(0) = 1.3e-3 here, so the default 1e-6 aliasing guard is
    // relaxed; the path is band-limited to |tau| < pi/dt and its covariance is
    // the band-limited one.
    let path = synthesize_with_tolerance(&m, 1 << 16, dt, 2024, 1e-2).unwrap();
    let est = empirical_covariance(&path, 5).unwrap();
    let mut lags = Vec::new();
    for k in [0usize, 1, 2, 5] {
        let exact = band_limited_covariance(&m, k as f64 * dt, dt).unwrap();
        let z = (est.values[k] - exact) / est.half_width[k];
        lags.push(format!("{z:+.2}"));
        t.check(z.abs() <= 3.0, || {
            format!(
                "lag {k}: {} vs {exact} (hw {})",
                est.values[k], est.half_width[k]
            )
        });
    }
    let per = periodogram(&path, 64).unwrap();
    let hits = per
        .grid
        .points()
        .zip(per.values.iter().zip(&per.half_width))
        .filter(|(tau, (v, w))| (*v - spectral_density(&m, *tau).re).abs() <= 3.0 * *w)
        .count();
    t.check(hits * 10 >= 9 * 64, || {
        format!("{hits} of 64 periodogram bands")
    });
    t.verdict(format!(
        "covariance deviations in half widths at lags 0,1,2,5: {}; periodogram {hits}/64 bands within 3 half widths",
        lags.join(" ")
    ))
}

// 10. Figure reproduction through the command line.
fn figure() -> Verdict {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = fracspec_cli::run_with(["fracspec", "figure"], None, &mut out, &mut err);
    let mut t = Tally::default();
    t.check(code == 0, || {
        format!("exit {code}: {}", String::from_utf8_lossy(&err))
    });
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    t.check(lines.next() == Some("alpha,beta,tau,f"), || "header".into());
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    let mut curves = 0;
    for alpha in [0.25, 0.5, 0.75, 1.0] {
        for beta in [0.5, 1.0, 2.0] {
            let curve: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r[0] == alpha && r[1] == beta)
                .map(|r| (r[2], r[3]))
                .collect();
            curves += 1;
            let n = curve.len();
            t.check(
                n == 201 && curve[0].0 == -5.0 && curve[n - 1].0 == 5.0,
                || format!("({alpha}, {beta}): {n} rows"),
            );
            if n != 201 {
                continue;
            }
            let peak = 1.0; // sigma^2/mu^{2 beta} with mu = sigma^2 = 1.
            t.check(curve[100] == (0.0, peak), || {
                format!("({alpha}, {beta}) at 0: {:?}", curve[100])
            });
            for k in 0..100 {
                t.check(
                    curve[k].0 == -curve[200 - k].0 && curve[k].1 == curve[200 - k].1,
                    || format!("({alpha}, {beta}) not even at {}", curve[k].0),
                );
                t.check(curve[200 - k].1 < curve[199 - k].1, || {
                    format!("({alpha}, {beta}) not decreasing at {}", curve[200 - k].0)
                });
            }
        }
    }
    t.check(rows.len() == curves * 201, || {
        format!("{} rows in total", rows.len())
    });
    t.verdict(format!(
        "{curves} curves on tau in [-5, 5]: even, peak 1 at 0, strictly decreasing in |tau|"
    ))
}

struct Criterion {
    number: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Verdict,
}

fn main() {
    let criteria = [
        Criterion {
            number: 1,
            name: "Ornstein-Uhlenbeck anchor",
            limit: Some(Duration::from_secs(5)),
            run: ornstein_uhlenbeck,
        },
        Criterion {
            number: 2,
            name: "duality suite",
            limit: Some(Duration::from_secs(120)),
            run: duality,
        },
        Criterion {
            number: 3,
            name: "even-order closed form",
            limit: None,
            run: even_order_closed_form,
        },
        Criterion {
            number: 4,
            name: "special-function identities",
            limit: None,
            run: special_functions,
        },
        Criterion {
            number: 5,
            name: "kernel suite",
            limit: None,
            run: kernel_suite,
        },
        Criterion {
            number: 6,
            name: "odd-order covariance",
            limit: None,
            run: odd_order,
        },
        Criterion {
            number: 7,
            name: "stable-convolution theorem",
            limit: Some(Duration::from_secs(180)),
            run: stable_convolution,
        },
        Criterion {
            number: 8,
            name: "asymptotics",
            limit: None,
            run: asymptotics,
        },
        Criterion {
            number: 9,
            name: "statistical suite",
            limit: Some(Duration::from_secs(30)),
            run: statistics,
        },
        Criterion {
            number: 10,
            name: "figure reproduction",
            limit: None,
            run: figure,
        },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let verdict = (c.run)();
        let elapsed = start.elapsed();
        let in_time = c.limit.is_none_or(|limit| elapsed <= limit);
        let pass = verdict.pass && in_time;
        let timing = match c.limit {
            Some(limit) => format!("{:.1}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs()),
            None => format!("{:.1}s", elapsed.as_secs_f64()),
        };
        println!(
            "criterion {:>2} {:<28} {}  [{timing}] {}",
            c.number,
            c.name,
            if pass { "PASS" } else { "FAIL" },
            verdict.detail
        );
        if !pass {
            failed.push(c.number);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
    } else {
        println!(
            "acceptance: {} of {} criteria fail: {failed:?}",
            failed.len(),
            criteria.len()
        );
        std::process::exit(1);
    }
}
