//! The three equation families as validated parameter sets, and their
//! spectral densities.

use crate::error::{Error, Result, Violation};
use crate::kernels::{KernelSpec, Sign};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which stationary equation the model solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `(mu + D^alpha)^{2 beta} X = noise` with a Weyl fractional derivative.
    WeylFractional,
    /// `(mu + (-1)^{n+1} d^{2n}/dt^{2n})^{2 beta} X = noise`.
    EvenOrder,
    /// `(mu + kappa d^{2n+1}/dt^{2n+1})^{2 beta} X = noise`.
    OddOrder,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::WeylFractional => "WeylFractional",
            Family::EvenOrder => "EvenOrder",
            Family::OddOrder => "OddOrder",
        })
    }
}

/// Family-specific operator parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Operator {
    Weyl { alpha: f64 },
    Even { n: u32 },
    Odd { n: u32, kappa: Sign },
}

/// A validated model. Construct with [`ModelSpec::weyl`],
/// [`ModelSpec::even`], [`ModelSpec::odd`] or [`validate_model`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct ModelSpec {
    mu: f64,
    beta: f64,
    sigma2: f64,
    operator: Operator,
}

/// Unvalidated model parameters in the flat key-value form used for
/// serialization; fields that do not belong to the family must be absent.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<i64>,
}

impl TryFrom<RawModel> for ModelSpec {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        validate_model(&raw)
    }
}

impl From<ModelSpec> for RawModel {
    fn from(m: ModelSpec) -> Self {
        let mut raw = RawModel {
            family: Some(m.family()),
            mu: Some(m.mu),
            beta: Some(m.beta),
            sigma2: Some(m.sigma2),
            ..RawModel::default()
        };
        match m.operator {
            Operator::Weyl { alpha } => raw.alpha = Some(alpha),
            Operator::Even { n } => raw.n = Some(n.into()),
            Operator::Odd { n, kappa } => {
                raw.n = Some(n.into());
                raw.kappa = Some(i8::from(kappa).into());
            }
        }
        raw
    }
}

/// Checks every constraint and reports all violations at once.
pub fn validate_model(raw: &RawModel) -> Result<ModelSpec> {
    let mut v = Vec::new();
    let mut bad = |field: &'static str, message: String| v.push(Violation { field, message });

    let positive =
        |x: Option<f64>, field: &'static str, bad: &mut dyn FnMut(&'static str, String)| -> f64 {
            match x {
                None => {
                    bad(field, "required".into());
                    f64::NAN
                }
                Some(x) if !(x > 0.0) || !x.is_finite() => {
                    bad(field, format!("{field} must be > 0 and finite, got {x}"));
                    f64::NAN
                }
                Some(x) => x,
            }
        };
    let mu = positive(raw.mu, "mu", &mut bad);
    let beta = positive(raw.beta, "beta", &mut bad);
    let sigma2 = positive(raw.sigma2, "sigma2", &mut bad);

    let unused = |field: &'static str,
                  present: bool,
                  family: Family,
                  bad: &mut dyn FnMut(&'static str, String)| {
        if present {
            bad(field, format!("{field} is not a parameter of {family}"));
        }
    };
    let order = |n: Option<i64>, bad: &mut dyn FnMut(&'static str, String)| -> u32 {
        match n {
            None => {
                bad("n", "required".into());
                0
            }
            Some(n) if n < 1 => {
                bad("n", format!("n ≥ 1 required, got {n}"));
                0
            }
            Some(n) if n > 1000 => {
                bad("n", format!("n must not exceed 1000, got {n}"));
                0
            }
            Some(n) => n as u32,
        }
    };

    let operator = match raw.family {
        None => {
            bad("family", "required".into());
            None
        }
        Some(family @ Family::WeylFractional) => {
            unused("n", raw.n.is_some(), family, &mut bad);
            unused("kappa", raw.kappa.is_some(), family, &mut bad);
            match raw.alpha {
                None => {
                    bad("alpha", "required".into());
                    None
                }
                Some(a) if !(a > 0.0 && a <= 1.0) => {
                    bad("alpha", format!("alpha out of (0,1]: got {a}"));
                    None
                }
                Some(alpha) => Some(Operator::Weyl { alpha }),
            }
        }
        Some(family @ Family::EvenOrder) => {
            unused("alpha", raw.alpha.is_some(), family, &mut bad);
            unused("kappa", raw.kappa.is_some(), family, &mut bad);
            let n = order(raw.n, &mut bad);
            (n > 0).then_some(Operator::Even { n })
        }
        Some(family @ Family::OddOrder) => {
            unused("alpha", raw.alpha.is_some(), family, &mut bad);
            let n = order(raw.n, &mut bad);
            let kappa = match raw.kappa {
                None => {
                    bad("kappa", "required".into());
                    None
                }
                Some(k) => match i8::try_from(k).ok().and_then(|k| Sign::try_from(k).ok()) {
                    Some(s) => Some(s),
                    None => {
                        bad("kappa", format!("kappa must be -1 or +1, got {k}"));
                        None
                    }
                },
            };
            match (n, kappa) {
                (n, Some(kappa)) if n > 0 => Some(Operator::Odd { n, kappa }),
                _ => None,
            }
        }
    };

    match operator {
        Some(operator) if v.is_empty() => Ok(ModelSpec {
            mu,
            beta,
            sigma2,
            operator,
        }),
        _ => Err(Error::Validation(v)),
    }
}

impl ModelSpec {
    pub fn weyl(mu: f64, beta: f64, sigma2: f64, alpha: f64) -> Result<Self> {
        validate_model(&RawModel {
            family: Some(Family::WeylFractional),
            mu: Some(mu),
            beta: Some(beta),
            sigma2: Some(sigma2),
            alpha: Some(alpha),
            ..RawModel::default()
        })
    }

    pub fn even(mu: f64, beta: f64, sigma2: f64, n: u32) -> Result<Self> {
        validate_model(&RawModel {
            family: Some(Family::EvenOrder),
            mu: Some(mu),
            beta: Some(beta),
            sigma2: Some(sigma2),
            n: Some(n.into()),
            ..RawModel::default()
        })
    }

    pub fn odd(mu: f64, beta: f64, sigma2: f64, n: u32, kappa: Sign) -> Result<Self> {
        validate_model(&RawModel {
            family: Some(Family::OddOrder),
            mu: Some(mu),
            beta: Some(beta),
            sigma2: Some(sigma2),
            n: Some(n.into()),
            kappa: Some(i8::from(kappa).into()),
            ..RawModel::default()
        })
    }

    pub fn family(&self) -> Family {
        match self.operator {
            Operator::Weyl { .. } => Family::WeylFractional,
            Operator::Even { .. } => Family::EvenOrder,
            Operator::Odd { .. } => Family::OddOrder,
        }
    }

    pub fn operator(&self) -> Operator {
        self.operator
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// The same model with `kappa` flipped (odd family only; others unchanged).
    pub fn reflected(&self) -> Self {
        let mut m = *self;
        if let Operator::Odd { n, kappa } = m.operator {
            m.operator = Operator::Odd {
                n,
                kappa: kappa.flipped(),
            };
        }
        m
    }

    /// Order of the spectral density's power-law decay, `|f(tau)| ~ |tau|^-p`.
    /// `Cov(0)` is finite exactly when `p > 1`.
    pub fn decay_exponent(&self) -> f64 {
        match self.operator {
            Operator::Weyl { alpha } => 2.0 * alpha * self.beta,
            Operator::Even { n } => 4.0 * n as f64 * self.beta,
            Operator::Odd { n, .. } => 2.0 * self.beta * (2 * n + 1) as f64,
        }
    }

    pub fn has_finite_variance(&self) -> bool {
        self.decay_exponent() > 1.0
    }

    /// Frequency beyond which the power-law tail of `f` takes over:
    /// `mu^{1/alpha}`, `mu^{1/2n}` or `mu^{1/(2n+1)}`.
    pub fn characteristic_frequency(&self) -> f64 {
        self.mu.powf(1.0 / self.operator_order())
    }

    /// Derivative order of the operator: `alpha`, `2n` or `2n + 1`.
    pub fn operator_order(&self) -> f64 {
        match self.operator {
            Operator::Weyl { alpha } => alpha,
            Operator::Even { n } => 2.0 * n as f64,
            Operator::Odd { n, .. } => (2 * n + 1) as f64,
        }
    }

    /// The heat kernel entering the covariance representation (Even/Odd).
    pub fn kernel_spec(&self) -> Option<KernelSpec> {
        match self.operator {
            Operator::Weyl { .. } => None,
            Operator::Even { n } => KernelSpec::even(n).ok(),
            Operator::Odd { n, kappa } => KernelSpec::odd(n, kappa).ok(),
        }
    }
}

impl std::fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}(mu={}, beta={}, sigma2={}",
            self.family(),
            self.mu,
            self.beta,
            self.sigma2
        )?;
        match self.operator {
            Operator::Weyl { alpha } => write!(f, ", alpha={alpha})"),
            Operator::Even { n } => write!(f, ", n={n})"),
            Operator::Odd { n, kappa } => write!(f, ", n={n}, kappa={kappa})"),
        }
    }
}

/// `ln(e^a + e^b)` without overflow.
fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Polar form `modulus * e^{i phase}` of a spectral density value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polar {
    pub modulus: f64,
    pub phase: f64,
}

/// Modulus and phase of `f(tau)`. The phase is zero for the real families
/// and `2 beta kappa atan(tau^{2n+1}/mu)` for the odd family.
pub fn spectral_polar(model: &ModelSpec, tau: f64) -> Polar {
    let (mu, beta, sigma2) = (model.mu, model.beta, model.sigma2);
    let a = tau.abs();
    match model.operator {
        Operator::Weyl { alpha } => {
            let base = if alpha == 1.0 {
                mu * mu + a * a
            } else {
                let t = a.powf(alpha);
                mu * mu + 2.0 * mu * (PI * alpha / 2.0).cos() * t + t * t
            };
            Polar {
                modulus: sigma2 * base.powf(-beta),
                phase: 0.0,
            }
        }
        Operator::Even { n } => {
            let ln_base = ln_add_exp(mu.ln(), 2.0 * n as f64 * a.ln());
            Polar {
                modulus: sigma2 * (-2.0 * beta * ln_base).exp(),
                phase: 0.0,
            }
        }
        Operator::Odd { n, kappa } => {
            let m = (2 * n + 1) as f64;
            let ln_base = ln_add_exp(2.0 * mu.ln(), 2.0 * m * a.ln());
            // tau^m with tau's sign, via atan2 to stay finite for huge |tau|.
            let angle = (tau.signum() * (m * a.ln() - mu.ln()).exp()).atan();
            Polar {
                modulus: sigma2 * (-beta * ln_base).exp(),
                phase: 2.0 * beta * kappa.value() * if tau == 0.0 { 0.0 } else { angle },
            }
        }
    }
}

/// Spectral density `f(tau)`, so that `Cov(h) = (1/2pi) int e^{-i tau h} f(tau) dtau`.
///
/// Real and strictly positive for the Weyl and even families; for the odd
/// family `f = sigma2 / (mu - kappa i tau^{2n+1})^{2 beta}` on the principal branch.
pub fn spectral_density(model: &ModelSpec, tau: f64) -> Complex64 {
    let p = spectral_polar(model, tau);
    Complex64::from_polar(p.modulus, p.phase)
}

/// Equally spaced points `start + k * step`, `k = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct Grid {
    start: f64,
    step: f64,
    count: usize,
}

#[derive(Deserialize)]
struct RawGrid {
    start: f64,
    step: f64,
    count: usize,
}

impl TryFrom<RawGrid> for Grid {
    type Error = Error;

    fn try_from(g: RawGrid) -> Result<Self> {
        Grid::new(g.start, g.step, g.count)
    }
}

impl Grid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        let mut v = Vec::new();
        if !start.is_finite() {
            v.push(Violation {
                field: "start",
                message: format!("start must be finite, got {start}"),
            });
        }
        if !(step > 0.0) || !step.is_finite() {
            v.push(Violation {
                field: "step",
                message: format!("step must be > 0, got {step}"),
            });
        }
        if count < 2 {
            v.push(Violation {
                field: "count",
                message: format!("count must be at least 2, got {count}"),
            });
        }
        if v.is_empty() {
            Ok(Self { start, step, count })
        } else {
            Err(Error::Validation(v))
        }
    }

    /// Grid with `count` points from `start` to `end` inclusive.
    pub fn linspace(start: f64, end: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Grid::new(start, 1.0, count);
        }
        Grid::new(start, (end - start) / (count - 1) as f64, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(|k| self.point(k))
    }

    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }
}

/// What a [`Curve`] tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    Spectral,
    Covariance,
    Kernel,
    Density,
}

/// Values of a quantity on a grid, with provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub model: Option<ModelSpec>,
    pub quantity: Quantity,
    pub method: String,
    pub grid: Grid,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values_imag: Option<Vec<f64>>,
}

impl Curve {
    /// Checks the length invariant and that imaginary parts only appear on
    /// odd-family spectral curves.
    pub fn new(
        model: Option<ModelSpec>,
        quantity: Quantity,
        method: impl Into<String>,
        grid: Grid,
        values: Vec<f64>,
        values_imag: Option<Vec<f64>>,
    ) -> Result<Self> {
        let mut v = Vec::new();
        if values.len() != grid.count() {
            v.push(Violation {
                field: "values",
                message: format!(
                    "{} values for a grid of {} points",
                    values.len(),
                    grid.count()
                ),
            });
        }
        if let Some(im) = &values_imag {
            let odd_spectral = quantity == Quantity::Spectral
                && model.is_some_and(|m| m.family() == Family::OddOrder);
            if !odd_spectral {
                v.push(Violation {
                    field: "values_imag",
                    message: "complex values are only allowed for odd-family spectral curves"
                        .into(),
                });
            }
            if im.len() != grid.count() {
                v.push(Violation {
                    field: "values_imag",
                    message: format!("{} values for a grid of {} points", im.len(), grid.count()),
                });
            }
        }
        if v.is_empty() {
            Ok(Self {
                model,
                quantity,
                method: method.into(),
                grid,
                values,
                values_imag,
            })
        } else {
            Err(Error::Validation(v))
        }
    }

    /// Spectral density of `model` on `grid`.
    pub fn spectral(model: &ModelSpec, grid: Grid) -> Self {
        let values: Vec<Complex64> = grid.points().map(|t| spectral_density(model, t)).collect();
        let re = values.iter().map(|z| z.re).collect();
        let im =
            (model.family() == Family::OddOrder).then(|| values.iter().map(|z| z.im).collect());
        Curve::new(
            Some(*model),
            Quantity::Spectral,
            "closed-form",
            grid,
            re,
            im,
        )
        .expect("consistent by construction")
    }
}
