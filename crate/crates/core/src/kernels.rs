//! Fundamental solutions `u(x, w)` of higher-order heat-type equations.
//!
//! Every kernel is defined through its Fourier transform,
//! `int e^{i xi x} u(x, w) dx = exp(-xi^{2n} w)` for even order `2n` and
//! `exp(kappa i xi^{2n+1} w)` for odd order `2n+1`, and is self-similar:
//! `u(x, w) = w^{-1/order} u(x w^{-1/order}, 1)`.

use crate::error::{domain, Error, Result};
use crate::quad;
use crate::specfun::{airy_ai, airy_ai_left_tail_integral};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A sign `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            -1 => Ok(Sign::Minus),
            1 => Ok(Sign::Plus),
            other => Err(format!("sign must be -1 or +1, got {other}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-1",
            Sign::Plus => "+1",
        })
    }
}

/// Spatial derivative order of the kernel's equation, and the sign `kappa`
/// of the odd-order equation `du/dw = kappa d^{2n+1}u/dx^{2n+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSpec {
    order: u32,
    kappa: Sign,
}

impl KernelSpec {
    /// `order >= 2`; `kappa` is normalised to `+1` for even orders.
    pub fn new(order: u32, kappa: Sign) -> Result<Self> {
        if order < 2 {
            return Err(domain(
                "KernelSpec",
                format!("order must be at least 2, got {order}"),
            ));
        }
        let kappa = if order % 2 == 0 { Sign::Plus } else { kappa };
        Ok(Self { order, kappa })
    }

    pub fn even(n: u32) -> Result<Self> {
        Self::new(2 * n, Sign::Plus)
    }

    pub fn odd(n: u32, kappa: Sign) -> Result<Self> {
        Self::new(2 * n + 1, kappa)
    }

    pub fn order(self) -> u32 {
        self.order
    }

    pub fn kappa(self) -> Sign {
        self.kappa
    }

    pub fn is_even(self) -> bool {
        self.order % 2 == 0
    }
}

/// `u(x, w)` for the given kernel. Even kernels are even in `x`; odd
/// kernels satisfy `u_{+1}(x, w) = u_{-1}(-x, w)`.
pub fn heat_kernel(spec: KernelSpec, x: f64, w: f64) -> Result<f64> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(domain(
            "heat_kernel",
            format!("w must be positive, got {w}"),
        ));
    }
    if !x.is_finite() {
        return Err(domain("heat_kernel", format!("x must be finite, got {x}")));
    }
    let m = spec.order as f64;
    let s = w.powf(1.0 / m);
    let y = x / s;
    let unit = if spec.is_even() {
        even_unit(spec.order / 2, y.abs())?
    } else if spec.order == 3 {
        // Ai(y / 3^{1/3}) / 3^{1/3} has transform exp(-i xi^3).
        let c = 3f64.cbrt();
        airy_ai(-spec.kappa.value() * y / c) / c
    } else {
        odd_unit(spec.order, spec.kappa.value() * y)?
    };
    Ok(unit / s)
}

/// `(1/pi) int_0^inf cos(xi y) exp(-xi^{2n}) dxi`, `y >= 0`.
fn even_unit(n: u32, y: f64) -> Result<f64> {
    if n == 1 {
        return Ok((-y * y / 4.0).exp() / (2.0 * PI.sqrt()));
    }
    let p = 2 * n as i32;
    // exp(-42) is below 1e-18.
    let end = 42f64.powf(1.0 / p as f64);
    let f = |xi: f64| (xi * y).cos() * (-xi.powi(p)).exp();
    let mut panels = ((end * (y + 1.0)) / 4.0).ceil() as usize + 2;
    let mut prev = quad::composite(quad::gl20(), 0.0, end, panels, f);
    loop {
        panels *= 2;
        let cur = quad::composite(quad::gl20(), 0.0, end, panels, f);
        let diff = (cur - prev).abs();
        if diff <= 1e-14 {
            return Ok(cur / PI);
        }
        if panels > 1 << 16 {
            return Err(Error::Accuracy {
                op: "heat_kernel",
                value: cur / PI,
                error: diff / PI,
            });
        }
        prev = cur;
    }
}

/// `(1/pi) Re int_0^inf exp(i (xi^m - y xi)) dxi` for odd `m >= 5`, which is
/// the `kappa = +1` kernel at `x = y` (and the `kappa = -1` kernel at `-y`).
///
/// The path runs along the real axis up to `R` beyond the stationary point
/// `(y/m)^{1/(m-1)}` (absent for `y <= 0`) and then along the ray
/// `R + s e^{i pi/(2m)}`, on which every term of `Im(phase)` is positive,
/// so the integrand decays monotonically.
fn odd_unit(m: u32, y: f64) -> Result<f64> {
    let mi = m as i32;
    let mf = m as f64;
    let phase = |xi: Complex64| xi.powi(mi) - y * xi;
    let r = if y > 0.0 {
        1.5 * (y / mf).powf(1.0 / (mf - 1.0))
    } else {
        0.0
    };

    let real_part = |panels: usize| {
        if r == 0.0 {
            0.0
        } else {
            quad::composite(quad::gl20(), 0.0, r, panels, |xi| {
                (xi.powi(mi) - y * xi).cos()
            })
        }
    };
    let theta = PI / (2.0 * mf);
    let dir = Complex64::from_polar(1.0, theta);
    let ray = |s: f64| ((Complex64::i() * phase(r + s * dir)).exp() * dir).re;
    // Decay scale along the ray: the smaller of the linear and the
    // leading-power rates.
    let slope = (mf * r.powi(mi - 1) - y).max(0.0) * theta.sin();
    let scale = if slope > 1.0 { 1.0 / slope } else { 1.0 };
    let tail = quad::exp_sinh("heat_kernel", ray, scale, 1e-13)?;

    let max_rate = mf * r.powi(mi - 1) + y.abs();
    let mut panels = ((r * max_rate) / 3.0).ceil() as usize + 2;
    let mut prev = real_part(panels);
    loop {
        panels *= 2;
        let cur = real_part(panels);
        let diff = (cur - prev).abs();
        if diff <= 1e-14 || r == 0.0 {
            return Ok((cur + tail.value) / PI);
        }
        if panels > 1 << 18 {
            return Err(Error::Accuracy {
                op: "heat_kernel",
                value: (cur + tail.value) / PI,
                error: (diff + tail.error) / PI,
            });
        }
        prev = cur;
    }
}

/// Radius beyond which the kernel's non-oscillatory envelope is below
/// `e^-40` of its scale: the larger of `12 w^{1/m} + 12` and the point where
/// the saddle-point envelope `exp(-c (|x| w^{-1/m})^{m/(m-1)})` reaches
/// `e^-40`. For odd kernels this bounds only the decaying side.
pub fn truncation_radius(spec: KernelSpec, w: f64) -> f64 {
    let m = spec.order as f64;
    let p = m / (m - 1.0);
    let angle = if spec.is_even() {
        PI / (2.0 * (m - 1.0))
    } else {
        PI / (m - 1.0)
    };
    let c = (m - 1.0) * m.powf(-p) * angle.sin();
    let s = w.powf(1.0 / m);
    let envelope = s * (40.0 / c).powf(1.0 / p);
    (12.0 * s + 12.0).max(envelope)
}

/// Total signed mass `int u(x, w) dx`.
///
/// The body is integrated over `|x| <= truncation_radius`. Even kernels
/// are negligible beyond it; the oscillatory side of odd kernels is summed
/// to infinity (Airy tail integral at order 3, accelerated lobe sums
/// otherwise).
pub fn kernel_mass(spec: KernelSpec, w: f64) -> Result<f64> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(domain(
            "kernel_mass",
            format!("w must be positive, got {w}"),
        ));
    }
    let m = spec.order as f64;
    let s = w.powf(1.0 / m);
    // Work at unit scale: int u(x, w) dx = int u(y, 1) dy.
    let unit = |y: f64| heat_kernel(spec, y, 1.0);
    let r = truncation_radius(spec, w) / s;

    let integrate = |a: f64, b: f64| -> Result<f64> {
        let mut panels = ((b - a) * 1.5).ceil() as usize + 4;
        let mut prev = panel_sum(&unit, a, b, panels)?;
        loop {
            panels *= 2;
            let cur = panel_sum(&unit, a, b, panels)?;
            if (cur - prev).abs() <= 1e-13 * (1.0 + cur.abs()) {
                return Ok(cur);
            }
            if panels > 1 << 14 {
                return Err(Error::Accuracy {
                    op: "kernel_mass",
                    value: cur,
                    error: (cur - prev).abs(),
                });
            }
            prev = cur;
        }
    };

    if spec.is_even() {
        return Ok(2.0 * integrate(0.0, r)?);
    }
    // In unit variables the kappa = +1 kernel oscillates for y > 0.
    let kappa = spec.kappa.value();
    if spec.order == 3 {
        let c = 3f64.cbrt();
        let r = r.max(10.0 * c);
        let body = integrate(-r, r)?;
        return Ok(body + airy_ai_left_tail_integral(r / c));
    }
    // u_kappa(y) = v(kappa y); integrate v over the decaying side to r and
    // the oscillatory side lobe by lobe.
    let v = |y: f64| heat_kernel(spec, kappa * y, 1.0);
    let body = integrate(-r, r)?;
    let lobes = oscillatory_tail(m, r, &v)?;
    Ok(body + lobes)
}

fn panel_sum(f: &impl Fn(f64) -> Result<f64>, a: f64, b: f64, panels: usize) -> Result<f64> {
    let mut err = None;
    let v = quad::composite(quad::gl20(), a, b, panels, |x| match f(x) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    });
    err.map_or(Ok(v), Err)
}

/// `int_r^inf v(y) dy` for the oscillatory side of an odd kernel, summed
/// over half-periods of the stationary-phase oscillation
/// `Phi(y) = (m-1) (y/m)^{m/(m-1)}` and accelerated with Wynn's epsilon.
fn oscillatory_tail(m: f64, r: f64, v: &impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let phi = |y: f64| (m - 1.0) * (y / m).powf(m / (m - 1.0));
    let inv = |p: f64| m * (p / (m - 1.0)).powf((m - 1.0) / m);
    let mut sums = Vec::new();
    let mut acc = 0.0;
    let mut lo = r;
    let mut k = (phi(r) / PI).floor() + 1.0;
    for _ in 0..24 {
        let hi = inv(k * PI);
        acc += panel_sum(v, lo, hi, 6)?;
        sums.push(acc);
        lo = hi;
        k += 1.0;
    }
    Ok(quad::wynn_epsilon(&sums))
}
