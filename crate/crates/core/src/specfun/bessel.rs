//! Modified Bessel function of the second kind for real order.

use crate::error::{domain, Error, Result};
use crate::quad::{self, Tolerance};

/// Largest `ln x` for which `exp` stays finite.
const LN_MAX: f64 = 709.782_712_893_384;

/// `ln K_nu(x)` from `K_nu(x) = 1/2 int_R exp(nu t - x cosh t) dt`.
///
/// The trapezoid rule is centred on the saddle `t* = asinh(|nu|/x)` and
/// evaluated in the log domain, so huge orders and tiny arguments never
/// overflow before the final exponentiation. Halving stops when two levels
/// agree to a few ulps.
pub fn ln_bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(
            "bessel_k",
            format!("x must be positive and finite, got {x}"),
        ));
    }
    if !nu.is_finite() {
        return Err(domain(
            "bessel_k",
            format!("order must be finite, got {nu}"),
        ));
    }
    let nu = nu.abs();
    let t_star = (nu / x).asinh();
    let phi_star = nu * t_star - x * t_star.cosh();
    // phi(t* + d) - phi(t*), written so that no large terms cancel.
    let rel = |d: f64| nu * d - 2.0 * x * (t_star + 0.5 * d).sinh() * (0.5 * d).sinh();
    let width = 1.0 / (x * t_star.cosh()).sqrt();

    let mut step = width.min(1.0);
    // Nodes t* + k*step for all integers k: the centre plus both shifted sweeps.
    let mut sum = 1.0 + sweep(&rel, step, step);
    let mut prev = sum * step;
    for _ in 0..14 {
        let half = 0.5 * step;
        // New nodes t* +- (half + k*step).
        sum += sweep(&rel, half, step);
        step = half;
        let cur = sum * step;
        if (cur - prev).abs() <= 1e-15 * cur {
            return finish(phi_star, cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence {
        op: "bessel_k",
        estimate: (phi_star + (0.5 * prev).ln()).exp(),
        error: f64::NAN,
    })
}

/// Sum of `exp(rel(d))` over `d = +-(first + k*step)`, `k >= 0`, stopping
/// once the integrand falls below `e^-50` of its peak.
fn sweep(rel: &impl Fn(f64) -> f64, first: f64, step: f64) -> f64 {
    let mut acc = 0.0;
    for dir in [1.0, -1.0] {
        let mut k = 0usize;
        loop {
            let e = rel(dir * (first + k as f64 * step));
            if e < -50.0 {
                break;
            }
            acc += e.exp();
            k += 1;
        }
    }
    acc
}

fn finish(phi_star: f64, trapezoid: f64) -> Result<f64> {
    let ln_value = phi_star + (0.5 * trapezoid).ln();
    if ln_value > LN_MAX {
        return Err(Error::Overflow {
            op: "bessel_k",
            ln_value,
        });
    }
    Ok(ln_value)
}

/// `K_nu(x)` for real order `nu` and `x > 0`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    ln_bessel_k(nu, x).map(f64::exp)
}

/// `int_0^inf x^(nu-1) exp(-b x^p - a x^-p) dx` by adaptive quadrature.
///
/// Equals `(2/p) (a/b)^(nu/2p) K_{nu/p}(2 sqrt(ab))`; kept independent of
/// [`bessel_k`] so the two can check each other.
pub fn bessel_k_gr3478(nu: f64, p: f64, a: f64, b: f64) -> Result<f64> {
    for (name, v) in [("p", p), ("a", a), ("b", b)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(domain(
                "bessel_k_gr3478",
                format!("{name} must be positive, got {v}"),
            ));
        }
    }
    // With x = e^u the integrand is exp(nu u - b e^{pu} - a e^{-pu}), a
    // log-concave bump; locate its mode from the quadratic in z = e^{pu}.
    let z = (nu + (nu * nu + 4.0 * a * b * p * p).sqrt()) / (2.0 * b * p);
    let u_star = z.ln() / p;
    let phi = |u: f64| nu * u - b * (p * u).exp() - a * (-p * u).exp();
    let phi_star = phi(u_star);

    let reach = |dir: f64| -> f64 {
        let mut d = 0.25;
        while phi(u_star + dir * d) - phi_star > -60.0 {
            d *= 1.5;
        }
        u_star + dir * d
    };
    let lo = reach(-1.0);
    let hi = reach(1.0);
    let tol = Tolerance::rel(1e-14);
    let left = quad::adaptive(
        "bessel_k_gr3478",
        |u| (phi(u) - phi_star).exp(),
        lo,
        u_star,
        tol,
    )?;
    let right = quad::adaptive(
        "bessel_k_gr3478",
        |u| (phi(u) - phi_star).exp(),
        u_star,
        hi,
        tol,
    )?;
    let ln_value = phi_star + (left.value + right.value).ln();
    if ln_value > LN_MAX {
        return Err(Error::Overflow {
            op: "bessel_k_gr3478",
            ln_value,
        });
    }
    Ok(ln_value.exp())
}
