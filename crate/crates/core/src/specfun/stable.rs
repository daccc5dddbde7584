//! One-sided (subordinator) and symmetric stable densities.
//!
//! Both use Zolotarev-type integral representations over a bounded angle,
//! whose integrand has the form `q e^{-q}` with `q = lambda * V(theta)`
//! monotone in `theta`. The integral is split at the unique peak `q = 1`
//! and graded geometrically towards it, which keeps the adaptive rule
//! honest when the peak is very narrow (far tails).

use super::ln_gamma;
use crate::error::{domain, Result};
use crate::quad::{self, Tolerance};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Densities below this are reported as zero with [`DensityValue::deep_tail`] set.
const TAIL_FLOOR: f64 = 1e-300;
/// Relative accuracy of the angular integrals behind the stable densities.
const DENSITY_REL_TOL: f64 = 1e-10;

/// Stability exponent of a stable law, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StableIndex(f64);

impl StableIndex {
    /// Index of a one-sided law: `0 < alpha <= 1` (`alpha = 1` is the point mass).
    pub fn one_sided(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(domain(
                "StableIndex::one_sided",
                format!("alpha out of (0,1]: {alpha}"),
            ))
        }
    }

    /// Index of a symmetric law: `0 < alpha <= 2`.
    pub fn symmetric(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 2.0 {
            Ok(Self(alpha))
        } else {
            Err(domain(
                "StableIndex::symmetric",
                format!("alpha out of (0,2]: {alpha}"),
            ))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// A density value together with a flag marking results from the far tails,
/// where the value underflowed or relative accuracy cannot be promised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityValue {
    pub value: f64,
    pub deep_tail: bool,
}

impl DensityValue {
    fn checked(value: f64) -> Self {
        if value < TAIL_FLOOR {
            Self {
                value: 0.0,
                deep_tail: true,
            }
        } else {
            Self {
                value,
                deep_tail: false,
            }
        }
    }
}

/// Density `h_alpha(z, s)` of the one-sided stable law with Laplace
/// transform `E e^{-xi Z} = e^{-s xi^alpha}`.
pub fn onesided_stable_density(alpha: StableIndex, z: f64, s: f64) -> Result<DensityValue> {
    let a = alpha.get();
    if a >= 1.0 {
        return Err(domain(
            "onesided_stable_density",
            "alpha = 1 is the point mass at z = s and has no density",
        ));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain(
            "onesided_stable_density",
            format!("z must be positive, got {z}"),
        ));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain(
            "onesided_stable_density",
            format!("s must be positive, got {s}"),
        ));
    }
    let c = s.powf(-1.0 / a);
    let unit = onesided_unit(a, z * c)?;
    Ok(DensityValue::checked(c * unit))
}

/// Unit-scale one-sided density via Kanter's representation
/// `h(y) = a/((1-a) pi y) int_0^pi q e^{-q} dtheta`,
/// `q = y^{-a/(1-a)} A(theta)`,
/// `A = (sin(a t)^a sin((1-a) t)^{1-a} / sin t)^{1/(1-a)}`.
fn onesided_unit(a: f64, y: f64) -> Result<f64> {
    let b = 1.0 - a;
    let ln_lambda = -a / b * y.ln();
    // Near theta = 0 the ln(theta) parts of the three logarithms cancel
    // exactly; keeping only the sinc factors avoids amplifying their
    // rounding by 1/(1-a).
    let offset = (a * a.ln() + b * b.ln()) / b;
    let near_zero =
        |t: f64| ln_lambda + offset + (a * ln_sinc(a * t) + b * ln_sinc(b * t) - ln_sinc(t)) / b;
    // Near theta = pi use phi = pi - theta so the peak stays resolvable in
    // the far right tail, where it sits within ~1e-12 of pi.
    let near_pi = |p: f64| {
        ln_lambda
            + (a * (a * (PI - p)).sin().ln() + b * (b * (PI - p)).sin().ln() - p.sin().ln()) / b
    };
    let op = "onesided_stable_density";
    let integral = peaked_integral(op, &near_zero, 0.0, FRAC_PI_2, true, DENSITY_REL_TOL)?
        + peaked_integral(op, &near_pi, 0.0, FRAC_PI_2, false, DENSITY_REL_TOL)?;
    Ok(a / (b * PI * y) * integral)
}

/// Density at `x` of the symmetric law with characteristic function
/// `exp(-scale |xi|^a w)`.
pub fn symmetric_stable_density(
    a: StableIndex,
    scale: f64,
    x: f64,
    w: f64,
) -> Result<DensityValue> {
    symmetric_stable_density_tol(a, scale, x, w, DENSITY_REL_TOL)
}

/// [`symmetric_stable_density`] with a caller-chosen relative tolerance for
/// the angular integral, for callers that integrate the density again and
/// need less than full accuracy.
pub(crate) fn symmetric_stable_density_tol(
    a: StableIndex,
    scale: f64,
    x: f64,
    w: f64,
    rel_tol: f64,
) -> Result<DensityValue> {
    let a = a.get();
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(domain(
            "symmetric_stable_density",
            format!("scale must be positive, got {scale}"),
        ));
    }
    if !(w > 0.0) || !w.is_finite() {
        return Err(domain(
            "symmetric_stable_density",
            format!("w must be positive, got {w}"),
        ));
    }
    if x.is_nan() {
        return Err(domain("symmetric_stable_density", "x is NaN"));
    }
    let c = scale * w;
    let value = if a == 2.0 {
        // Gaussian with variance 2c.
        (-x * x / (4.0 * c)).exp() / (4.0 * PI * c).sqrt()
    } else if a == 1.0 {
        c / (PI * (c * c + x * x))
    } else {
        let k = c.powf(-1.0 / a);
        k * symmetric_unit(a, (x * k).abs(), rel_tol)?
    };
    Ok(DensityValue::checked(value))
}

/// Standard symmetric stable density `p_a(y)`, `y >= 0`, `a != 1, 2`.
fn symmetric_unit(a: f64, y: f64, rel_tol: f64) -> Result<f64> {
    if y == 0.0 {
        return Ok(ln_gamma(1.0 + 1.0 / a)?.exp() / PI);
    }
    if let Some(v) = symmetric_series(a, y) {
        return Ok(v);
    }
    // Zolotarev: p(y) = a/(pi |a-1| y) int_0^{pi/2} q e^{-q} dtheta with
    // q = y^{a/(a-1)} V(theta),
    // V = (cos t / sin(a t))^{a/(a-1)} cos((a-1) t) / cos t.
    let r = a / (a - 1.0);
    let ln_lambda = r * y.ln();
    let ln_q = |t: f64, cos_t: f64| -> f64 {
        ln_lambda + r * (cos_t.ln() - (a * t).sin().ln()) + ((a - 1.0) * t).cos().ln() - cos_t.ln()
    };
    // Split at pi/4; the upper half is parametrised by phi = pi/2 - theta so
    // that cos(theta) = sin(phi) keeps full relative precision.
    let lower = |t: f64| ln_q(t, t.cos());
    let upper = |p: f64| ln_q(FRAC_PI_2 - p, p.sin());
    // V increases on (0, pi/2) for a < 1 and decreases for a > 1.
    let op = "symmetric_stable_density";
    let integral = peaked_integral(op, &lower, 0.0, FRAC_PI_4, a < 1.0, rel_tol)?
        + peaked_integral(op, &upper, 0.0, FRAC_PI_4, a > 1.0, rel_tol)?;
    Ok(a / (PI * (a - 1.0).abs() * y) * integral)
}

/// Series for `p_a(y)`: the convergent power series for `a > 1` at small
/// `y`, and the (convergent for `a < 1`, asymptotic for `a > 1`) inverse
/// power series at large `y`. Returns `None` unless the sum converged with
/// negligible cancellation.
fn symmetric_series(a: f64, y: f64) -> Option<f64> {
    let accept = |sum: f64, biggest: f64, last: f64| -> Option<f64> {
        (sum > 0.0 && biggest <= 10.0 * sum && last.abs() <= 1e-16 * sum).then_some(sum)
    };
    if a > 1.0 && y <= 1.0 {
        // p(y) = 1/(pi a) sum_k (-1)^k Gamma((2k+1)/a) / (2k)! y^{2k}
        let ln_y = y.ln();
        let (mut sum, mut biggest, mut last) = (0.0f64, 0.0f64, f64::INFINITY);
        let mut ln_fact = 0.0; // ln (2k)!
        for k in 0..200usize {
            if k > 0 {
                ln_fact += ((2 * k - 1) as f64).ln() + ((2 * k) as f64).ln();
            }
            let ln_t = libm::lgamma((2 * k + 1) as f64 / a) - ln_fact + 2.0 * k as f64 * ln_y;
            let t = ln_t.exp() / (PI * a);
            let term = if k % 2 == 0 { t } else { -t };
            sum += term;
            biggest = biggest.max(t);
            last = t;
            if t <= 1e-17 * sum.abs() {
                break;
            }
        }
        return accept(sum, biggest, last);
    }
    // p(y) = 1/pi sum_{k>=1} (-1)^{k+1} Gamma(a k + 1)/k! sin(k pi a / 2) y^{-a k - 1}
    let big_enough = if a < 1.0 { y >= 3.0 } else { y >= 8.0 };
    if !big_enough {
        return None;
    }
    let ln_y = y.ln();
    let (mut sum, mut biggest, mut prev) = (0.0f64, 0.0f64, f64::INFINITY);
    let mut last = f64::INFINITY;
    for k in 1..200usize {
        let kf = k as f64;
        let ln_t = libm::lgamma(a * kf + 1.0) - libm::lgamma(kf + 1.0) - (a * kf + 1.0) * ln_y;
        let mag = ln_t.exp() / PI;
        if a > 1.0 && mag > prev {
            // Asymptotic series started to diverge before converging.
            return None;
        }
        prev = mag;
        let t = mag * (kf * PI * a / 2.0).sin();
        sum += if k % 2 == 1 { t } else { -t };
        biggest = biggest.max(t.abs());
        last = mag;
        if mag <= 1e-17 * sum.abs() {
            break;
        }
    }
    accept(sum, biggest, last)
}

/// `ln(sin(x) / x)` for `0 < x < pi`.
fn ln_sinc(x: f64) -> f64 {
    if x < 1e-4 {
        let x2 = x * x;
        -x2 / 6.0 - x2 * x2 / 180.0
    } else {
        (x.sin() / x).ln()
    }
}

/// `int_lo^hi q e^{-q} dtheta` for `ln q(theta)` monotone on `(lo, hi)`.
///
/// The integrand peaks where `q = 1`. Its width there is about
/// `1 / |d ln q / dtheta|`, and the pieces on either side of the peak
/// grow geometrically from that width, so a narrow peak is always resolved.
fn peaked_integral(
    op: &'static str,
    ln_q: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    increasing: bool,
    rel_tol: f64,
) -> Result<f64> {
    let g = |t: f64| -> f64 {
        let l = ln_q(t);
        if l > 700.0 {
            0.0
        } else {
            (l - l.exp()).exp()
        }
    };
    // Bisection for ln q = 0, never evaluating the endpoints themselves.
    // A broad peak only needs locating to a small fraction of its width;
    // narrow ones are bisected to machine precision.
    let above = |t: f64| (ln_q(t) > 0.0) == increasing;
    let span = hi - lo;
    let width_at = |peak: f64| {
        let delta = 1e-6 * span.min(peak - lo).min(hi - peak).max(span * 1e-12);
        let slope = (ln_q(peak + delta) - ln_q(peak - delta)) / (2.0 * delta);
        if slope.is_finite() && slope != 0.0 {
            (1.0 / slope.abs()).clamp(span * 1e-14, span)
        } else {
            span * 1e-3
        }
    };
    let (mut a, mut b) = (lo, hi);
    let mut coarse_checked = false;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if !coarse_checked && b - a <= 1e-8 * span {
            coarse_checked = true;
            if width_at(m) > 1e-4 * span {
                break;
            }
        }
        if above(m) {
            b = m;
        } else {
            a = m;
        }
    }
    let peak = 0.5 * (a + b);
    let width = width_at(peak);

    // With the peak at a shared endpoint, tanh-sinh resolves both halves
    // unless the peak is extremely narrow relative to the interval.
    if width > 1e-6 * span {
        let left = quad::tanh_sinh(op, g, lo, peak, rel_tol);
        let right = quad::tanh_sinh(op, g, peak, hi, rel_tol);
        if let (Ok(l), Ok(r)) = (left, right) {
            return Ok(l.value + r.value);
        }
    }
    let mut total = 0.0f64;
    for (end, dir) in [(hi, 1.0), (lo, -1.0)] {
        let mut inner = peak;
        let mut dist = 0.25 * width;
        while inner != end {
            let outer = if dist >= (end - peak).abs() {
                end
            } else {
                peak + dir * dist
            };
            let (x0, x1) = if dir > 0.0 {
                (inner, outer)
            } else {
                (outer, inner)
            };
            // Pieces beyond the peak region only need accuracy relative to
            // the mass already collected.
            let tol = Tolerance::rel(0.1 * rel_tol).with_abs((1e-3 * rel_tol * total).max(1e-300));
            total += quad::adaptive(op, g, x0, x1, tol)?.value;
            inner = outer;
            dist *= 2.0;
        }
    }
    Ok(total)
}
