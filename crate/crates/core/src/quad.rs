//! Numerical integration primitives shared by every module.
//!
//! Three tools cover all the integrals in the crate:
//! composite Gauss-Legendre panels for smooth integrands on known intervals,
//! adaptive Gauss-Kronrod (10/21) with an error estimate for peaked integrands,
//! and an exp-sinh double-exponential rule for `[0, inf)` with algebraic tails.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Nodes and weights of the 20-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gl20() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(20))
}

/// Nodes and weights of the 16-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gl16() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(16))
}

fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(n.try_into().expect("non-zero degree"));
    rule.as_node_weight_pairs().to_vec()
}

/// Gauss-Legendre rule applied to one panel `[a, b]`.
#[inline]
pub fn panel<F: FnMut(f64) -> f64>(rule: &[(f64, f64)], a: f64, b: f64, f: &mut F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Equal-width composite Gauss-Legendre over `[a, b]`.
pub fn composite<F: FnMut(f64) -> f64>(
    rule: &[(f64, f64)],
    a: f64,
    b: f64,
    panels: usize,
    mut f: F,
) -> f64 {
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + k as f64 * width;
            panel(rule, lo, lo + width, &mut f)
        })
        .sum()
}

// QUADPACK qk21 abscissae and weights.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_084,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Estimate {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Estimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Absolute/relative targets for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub const fn rel(rel: f64) -> Self {
        Self {
            abs: 0.0,
            rel,
            max_intervals: 4000,
        }
    }

    pub const fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }
}

/// Globally adaptive Gauss-Kronrod integration on a finite interval.
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate meets the tolerance. Reports [`Error::NoConvergence`] with the
/// achieved estimate when the interval budget runs out.
pub fn adaptive<F: FnMut(f64) -> f64>(
    op: &'static str,
    mut f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    let first = gk21(&mut f, a, b);
    let mut parts = vec![(a, b, first)];
    let mut total = first;
    loop {
        if !total.value.is_finite() {
            return Err(Error::NoConvergence {
                op,
                estimate: total.value,
                error: f64::INFINITY,
            });
        }
        let target = tol.abs.max(tol.rel * total.value.abs());
        if total.error <= target {
            return Ok(total);
        }
        if parts.len() >= tol.max_intervals {
            // Round-off floor: the error estimate cannot fall below a few ulps of the sum.
            if total.error <= 50.0 * f64::EPSILON * parts_abs(&parts) {
                return Ok(total);
            }
            return Err(Error::NoConvergence {
                op,
                estimate: total.value,
                error: total.error,
            });
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .expect("non-empty");
        let (lo, hi, est) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Interval cannot be split further in f64.
            if total.error <= 1e3 * f64::EPSILON * parts_abs(&parts).max(est.value.abs()) {
                return Ok(total);
            }
            return Err(Error::NoConvergence {
                op,
                estimate: total.value,
                error: total.error,
            });
        }
        let left = gk21(&mut f, lo, mid);
        let right = gk21(&mut f, mid, hi);
        total.value += left.value + right.value - est.value;
        total.error += left.error + right.error - est.error;
        parts.push((lo, mid, left));
        parts.push((mid, hi, right));
        // Re-sum periodically to shed accumulated cancellation in the running totals.
        if parts.len() % 64 == 0 {
            total.value = parts.iter().map(|p| p.2.value).sum();
            total.error = parts.iter().map(|p| p.2.error).sum();
        }
    }
}

fn parts_abs(parts: &[(f64, f64, Estimate)]) -> f64 {
    parts.iter().map(|p| p.2.value.abs()).sum()
}

/// Integral of `f` over `[0, inf)` by the exp-sinh rule `s = scale * exp(pi/2 sinh t)`.
///
/// The step is halved until two successive levels agree to `rel_tol`.
/// Suited to integrands that are smooth on `(0, inf)` and decay at least
/// algebraically (`|f(s)| ~ s^-p`, `p > 1`) or exponentially.
pub fn exp_sinh<F: FnMut(f64) -> f64>(
    op: &'static str,
    mut f: F,
    scale: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    // Keep ln(s / scale) inside +-690 so that neither s nor ds overflows.
    let t_max = (690.0 / FRAC_PI_2).asinh();
    let mut term = |t: f64| -> f64 {
        let e = FRAC_PI_2 * t.sinh();
        let s = scale * e.exp();
        let ds = s * FRAC_PI_2 * t.cosh();
        let v = f(s) * ds;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    // The coarsest level scans the whole admissible range and fixes the
    // window [t_lo, t_hi] outside which all terms are negligible; finer
    // levels only fill in midpoints inside that window. (Stopping sweeps on
    // small terms instead would truncate integrands whose mass sits away
    // from t = 0.)
    let mut step = 0.5;
    let n_max = (t_max / step).floor() as i64;
    let coarse: Vec<(f64, f64)> = (-n_max..=n_max)
        .map(|k| {
            let t = k as f64 * step;
            (t, term(t))
        })
        .collect();
    let peak = coarse.iter().fold(0.0f64, |m, p| m.max(p.1.abs()));
    let significant = |v: f64| v.abs() > 1e-19 * peak;
    let t_lo = coarse
        .iter()
        .find(|p| significant(p.1))
        .map_or(0.0, |p| p.0)
        - step;
    let t_hi = coarse
        .iter()
        .rev()
        .find(|p| significant(p.1))
        .map_or(0.0, |p| p.0)
        + step;
    let mut sum: f64 = coarse
        .iter()
        .filter(|p| p.0 >= t_lo && p.0 <= t_hi)
        .map(|p| p.1)
        .sum();
    let mut l1: f64 = coarse.iter().map(|p| p.1.abs()).sum();
    let mut prev = sum * step;
    for _ in 0..10 {
        let half = 0.5 * step;
        let mut t = t_lo + half;
        while t < t_hi {
            let v = term(t);
            sum += v;
            l1 += v.abs();
            t += step;
        }
        step = half;
        let cur = sum * step;
        let diff = (cur - prev).abs();
        // When the integral cancels, the achievable accuracy is set by the
        // magnitude of the integrand, not by the result.
        let floor = 1e-14 * l1 * step;
        if diff <= rel_tol * cur.abs() || diff <= floor || diff <= 1e-300 {
            return Ok(Estimate {
                value: cur,
                error: diff,
            });
        }
        prev = cur;
    }
    Err(Error::NoConvergence {
        op,
        estimate: prev,
        error: f64::NAN,
    })
}

/// Integral of `f` over `[a, b]` by the tanh-sinh rule
/// `x = a + (b - a)(1 + tanh(pi/2 sinh t))/2`.
///
/// Nodes cluster double-exponentially at both endpoints (down to ~1e-300 of
/// the length), so integrands with algebraic endpoint behaviour or a narrow
/// peak sitting at an endpoint converge geometrically in the inverse step.
/// As in [`exp_sinh`], the coarsest level fixes the window of significant
/// terms and the step is halved inside it until two levels agree to
/// `rel_tol`.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(
    op: &'static str,
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    let len = b - a;
    let mut term = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        // Distances to both endpoints without cancellation.
        let from_a = len / (1.0 + (-2.0 * u).exp());
        let from_b = len / (1.0 + (2.0 * u).exp());
        let x = if u <= 0.0 { a + from_a } else { b - from_b };
        let dx = FRAC_PI_2 * t.cosh() * 2.0 * from_a * (from_b / len);
        let v = f(x) * dx;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    // Keep e^{2|u|} below ~e^{690} so the node offsets stay representable.
    let t_max = (345.0 / FRAC_PI_2).asinh();
    let mut step = 0.5;
    let n_max = (t_max / step).floor() as i64;
    let coarse: Vec<(f64, f64)> = (-n_max..=n_max)
        .map(|k| {
            let t = k as f64 * step;
            (t, term(t))
        })
        .collect();
    let peak = coarse.iter().fold(0.0f64, |m, p| m.max(p.1.abs()));
    let significant = |v: f64| v.abs() > 1e-19 * peak;
    let t_lo = coarse
        .iter()
        .find(|p| significant(p.1))
        .map_or(0.0, |p| p.0)
        - step;
    let t_hi = coarse
        .iter()
        .rev()
        .find(|p| significant(p.1))
        .map_or(0.0, |p| p.0)
        + step;
    let mut sum: f64 = coarse
        .iter()
        .filter(|p| p.0 >= t_lo && p.0 <= t_hi)
        .map(|p| p.1)
        .sum();
    let mut l1: f64 = coarse.iter().map(|p| p.1.abs()).sum();
    let mut prev = sum * step;
    for _ in 0..10 {
        let half = 0.5 * step;
        let mut t = t_lo + half;
        while t < t_hi {
            let v = term(t);
            sum += v;
            l1 += v.abs();
            t += step;
        }
        step = half;
        let cur = sum * step;
        let diff = (cur - prev).abs();
        if diff <= rel_tol * cur.abs() || diff <= 1e-15 * l1 * step || diff <= 1e-300 {
            return Ok(Estimate {
                value: cur,
                error: diff,
            });
        }
        prev = cur;
    }
    Err(Error::NoConvergence {
        op,
        estimate: prev,
        error: f64::NAN,
    })
}

/// Wynn's epsilon algorithm: the limit of a slowly converging sequence of
/// partial sums (typically an alternating series of oscillation lobes).
///
/// Returns the last entry of the highest even column of the epsilon table.
pub fn wynn_epsilon(partial_sums: &[f64]) -> f64 {
    let n = partial_sums.len();
    if n < 3 {
        return partial_sums.last().copied().unwrap_or(0.0);
    }
    let mut prev = vec![0.0; n + 1]; // column j - 1
    let mut cur = partial_sums.to_vec(); // column j
    let mut best = cur[n - 1];
    let mut j = 0;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for k in 0..cur.len() - 1 {
            let diff = cur[k + 1] - cur[k];
            if diff == 0.0 {
                // Converged exactly; further columns are undefined.
                return if j % 2 == 0 { cur[k + 1] } else { best };
            }
            next.push(prev[k + 1] + 1.0 / diff);
        }
        j += 1;
        if j % 2 == 0 {
            best = *next.last().expect("non-empty");
        }
        prev = cur;
        cur = next;
    }
    best
}
