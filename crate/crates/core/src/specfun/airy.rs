//! Airy function `Ai` and its derivative on the real line.
//!
//! Three regimes:
//! * `-4 <= x <= 4`: Maclaurin series (all terms are bounded by ~1e2 here,
//!   so the absolute error stays near 1e-14);
//! * `x > 4`: `Ai(x) = (1/pi) sqrt(x/3) K_{1/3}(zeta)`, `zeta = 2/3 x^{3/2}`;
//! * `x < -4`: `Ai(-z) = sqrt(z)/3 (J_{1/3}(zeta) + J_{-1/3}(zeta))` with the
//!   Bessel J values from Schlaefli's integral, switching to the Hankel-type
//!   asymptotic expansion once `zeta` is large enough for it to reach full
//!   double precision.

use super::bessel::bessel_k;
use crate::quad::{self, Tolerance};
use std::f64::consts::{FRAC_PI_4, PI};

/// `Ai(0) = 3^{-2/3} / Gamma(2/3)`.
const AI0: f64 = 0.355_028_053_887_817_24;
/// `-Ai'(0) = 3^{-1/3} / Gamma(1/3)`.
const AIP0: f64 = 0.258_819_403_792_806_8;

const SERIES_LIMIT: f64 = 4.0;
/// Below this, the asymptotic expansion's smallest term is under 1e-17.
const ASYMPTOTIC_LIMIT: f64 = -10.0;

/// `Ai(x)` for real `x`.
pub fn airy_ai(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.abs() <= SERIES_LIMIT {
        let (f, g) = maclaurin(x);
        return AI0 * f - AIP0 * g;
    }
    if x > 0.0 {
        if x == f64::INFINITY {
            return 0.0;
        }
        let zeta = 2.0 / 3.0 * x * x.sqrt();
        // ln K is finite for every positive argument; the product may underflow to 0.
        return bessel_k(1.0 / 3.0, zeta).map_or(0.0, |k| (x / 3.0).sqrt() * k / PI);
    }
    let z = -x;
    if x < ASYMPTOTIC_LIMIT {
        return asymptotic_negative(z).0;
    }
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    z.sqrt() / 3.0 * (bessel_j(1.0 / 3.0, zeta) + bessel_j(-1.0 / 3.0, zeta))
}

/// `Ai'(x)` for real `x`.
pub fn airy_ai_prime(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.abs() <= SERIES_LIMIT {
        let (fp, gp) = maclaurin_prime(x);
        return AI0 * fp - AIP0 * gp;
    }
    if x > 0.0 {
        if x == f64::INFINITY {
            return 0.0;
        }
        let zeta = 2.0 / 3.0 * x * x.sqrt();
        return bessel_k(2.0 / 3.0, zeta).map_or(0.0, |k| -x / (PI * 3f64.sqrt()) * k);
    }
    let z = -x;
    if x < ASYMPTOTIC_LIMIT {
        return asymptotic_negative(z).1;
    }
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    z / 3.0 * (bessel_j(2.0 / 3.0, zeta) - bessel_j(-2.0 / 3.0, zeta))
}

/// `int_{-inf}^{-t} Ai(x) dx` for `t >= 10`.
///
/// With `A(s) = Ai(-s)` and `A'' = -s A`, integration by parts gives
/// `I_k = int_t^inf A s^-k ds = A'(t) t^{-k-1} + (k+1) A(t) t^{-k-2} - (k+1)(k+2) I_{k+3}`,
/// which is unrolled until the remainder is negligible.
pub fn airy_ai_left_tail_integral(t: f64) -> f64 {
    assert!(t >= 10.0, "tail formula needs t >= 10, got {t}");
    let a = airy_ai(-t);
    let ap = -airy_ai_prime(-t);
    // I_0 = sum_j c_j (A' t^{-k_j-1} + (k_j+1) A t^{-k_j-2}), k_j = 3j,
    // c_0 = 1, c_{j+1} = -c_j (k_j+1)(k_j+2).
    let mut total = 0.0;
    let mut c = 1.0;
    for j in 0..12 {
        let k = 3.0 * j as f64;
        let term = c * (ap * t.powf(-k - 1.0) + (k + 1.0) * a * t.powf(-k - 2.0));
        total += term;
        if term.abs() < 1e-18 {
            break;
        }
        c *= -(k + 1.0) * (k + 2.0);
    }
    total
}

/// The two power series `f`, `g` with `Ai = Ai(0) f + Ai'(0) g`.
fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    let (mut f, mut tf) = (1.0, 1.0);
    let (mut g, mut tg) = (x, x);
    for k in 0..60 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / ((k3 + 2.0) * (k3 + 3.0));
        tg *= x3 / ((k3 + 3.0) * (k3 + 4.0));
        f += tf;
        g += tg;
        if tf.abs() <= 1e-18 * f.abs().max(1.0) && tg.abs() <= 1e-18 * g.abs().max(1.0) {
            break;
        }
    }
    (f, g)
}

/// Derivatives `f'`, `g'` of the Maclaurin series.
fn maclaurin_prime(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    let (mut fp, mut tf) = (0.5 * x * x, 0.5 * x * x);
    let (mut gp, mut tg) = (1.0, 1.0);
    for k in 0..60 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / ((k3 + 3.0) * (k3 + 5.0));
        tg *= x3 / ((k3 + 1.0) * (k3 + 3.0));
        fp += tf;
        gp += tg;
        if tf.abs() <= 1e-18 * fp.abs().max(1.0) && tg.abs() <= 1e-18 * gp.abs().max(1.0) {
            break;
        }
    }
    (fp, gp)
}

/// `J_nu(z)` for `z > 0` from Schlaefli's integral
/// `(1/pi) int_0^pi cos(nu t - z sin t) dt - sin(nu pi)/pi int_0^inf e^{-z sinh t - nu t} dt`.
fn bessel_j(nu: f64, z: f64) -> f64 {
    // Each 20-point panel spans at most ~6 radians of phase.
    let panels = (z * PI / 6.0).ceil() as usize + 2;
    let oscillatory = quad::composite(quad::gl20(), 0.0, PI, panels, |t| {
        (nu * t - z * t.sin()).cos()
    });
    let tail = if nu.fract() == 0.0 {
        0.0
    } else {
        let end = (60.0 / z).asinh() + 1.0;
        quad::adaptive(
            "airy_ai",
            |t| (-z * t.sinh() - nu * t).exp(),
            0.0,
            end,
            Tolerance::rel(1e-15).with_abs(1e-300),
        )
        .map_or(f64::NAN, |e| e.value)
    };
    (oscillatory - (nu * PI).sin() * tail) / PI
}

/// `(Ai(-z), Ai'(-z))` from the large-argument expansion, `z >= 10`.
fn asymptotic_negative(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    // u_k, v_k expansion coefficients; the series are summed until the
    // terms stop decreasing or become negligible.
    let mut u = 1.0;
    let (mut p, mut q) = (0.0, 0.0); // even / odd parts for Ai
    let (mut pv, mut qv) = (0.0, 0.0); // even / odd parts for Ai'
    let mut zpow = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..40usize {
        let kf = k as f64;
        if k > 0 {
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            zpow /= zeta;
        }
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        let term = u * zpow;
        if term.abs() > last {
            break;
        }
        last = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
            pv += sign * v * zpow;
        } else {
            q += sign * term;
            qv += sign * v * zpow;
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let amp = 1.0 / PI.sqrt();
    let ai = amp * z.powf(-0.25) * (c * p + s * q);
    let aip = amp * z.powf(0.25) * (s * pv - c * qv);
    (ai, aip)
}
