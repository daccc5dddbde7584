//! Command-line grammar.

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracspec::covariance::Method;
use fracspec::models::{Family, RawModel};
use fracspec::transforms::DEFAULT_SAMPLE_COUNT;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "fracspec",
    version,
    about = "Spectral densities, covariances, kernels and sample paths of fractional stochastic differential equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the spectral density f(tau) of a model.
    Spectral(SpectralArgs),
    /// Tabulate the covariance Cov(h) of a model.
    Covariance(CovarianceArgs),
    /// Tabulate a higher-order heat kernel u(x, w).
    Kernel(KernelArgs),
    /// Tabulate a special function.
    Specfun(SpecfunArgs),
    /// Simulate a stationary sample path by spectral synthesis.
    Simulate(SimulateArgs),
    /// Run the numerical validation suite.
    Validate(ValidateArgs),
    /// Emit the spectral-density curves of the Weyl family on an (alpha, beta) grid.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Weyl,
    Even,
    Odd,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Weyl => Family::WeylFractional,
            FamilyArg::Even => Family::EvenOrder,
            FamilyArg::Odd => Family::OddOrder,
        }
    }
}

/// Model parameters; checked as a whole by `validate_model`.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Equation family.
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Shift parameter mu > 0.
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    /// Exponent beta > 0.
    #[arg(long)]
    pub beta: f64,
    /// Noise intensity sigma^2 > 0.
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    /// Fractional order, 0 < alpha <= 1 (weyl only).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Order index n >= 1 (even: order 2n; odd: order 2n+1).
    #[arg(long)]
    pub n: Option<i64>,
    /// Sign kappa of the odd-order operator, -1 or 1.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<i64>,
}

impl ModelArgs {
    pub fn raw(&self) -> RawModel {
        RawModel {
            family: Some(self.family.into()),
            mu: Some(self.mu),
            beta: Some(self.beta),
            sigma2: Some(self.sigma2),
            alpha: self.alpha,
            n: self.n,
            kappa: self.kappa,
        }
    }
}

/// Evaluation grid `start + k * step`, `k = 0..count`.
#[derive(Debug, Args)]
pub struct GridArgs {
    /// First grid point.
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub start: f64,
    /// Grid spacing.
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 101)]
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; relative paths are resolved against $FRACSPEC_OUT_DIR
    /// when set. Standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectralArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Single frequency, instead of the grid.
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Quadrature,
    Closed,
    Fourier,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Quadrature => Method::Quadrature,
            MethodArg::Closed => Method::ClosedForm,
            MethodArg::Fourier => Method::FourierOracle,
        }
    }
}

#[derive(Debug, Args)]
pub struct CovarianceArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Single lag, instead of the grid.
    #[arg(long, allow_negative_numbers = true)]
    pub h: Option<f64>,
    /// Evaluation method.
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Frequency samples of the Fourier inversion (power of two, >= 256).
    #[arg(long, default_value_t = DEFAULT_SAMPLE_COUNT)]
    pub samples: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Kernel order m >= 2 (the order of the spatial derivative).
    #[arg(long)]
    pub order: u32,
    /// Sign kappa of an odd-order kernel, -1 or 1.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
    pub kappa: i64,
    /// Time variable w > 0.
    #[arg(long, default_value_t = 1.0)]
    pub w: f64,
    /// Single point, instead of the grid.
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    /// Modified Bessel function K_nu(x).
    BesselK,
    /// Airy function Ai(x).
    AiryAi,
    /// Derivative Ai'(x).
    AiryAiPrime,
    /// Gamma function.
    Gamma,
    /// Logarithm of the gamma function.
    LnGamma,
    /// Density h_alpha(x, s) of a one-sided stable law.
    OnesidedStable,
    /// Symmetric stable density with characteristic function exp(-scale |xi|^alpha w).
    SymmetricStable,
}

#[derive(Debug, Args)]
pub struct SpecfunArgs {
    /// Function to tabulate.
    #[arg(long, value_enum)]
    pub function: Function,
    /// Order nu of K_nu.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub nu: f64,
    /// Stability index of the stable densities.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Time parameter s of the one-sided stable density.
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    /// Scale of the symmetric stable density.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Time parameter w of the symmetric stable density.
    #[arg(long, default_value_t = 1.0)]
    pub w: f64,
    /// Single argument, instead of the grid.
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// First grid point.
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub start: f64,
    /// Grid spacing.
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Path length (power of two, >= 256).
    #[arg(long, default_value_t = 1 << 16)]
    pub count: usize,
    /// Sampling step.
    #[arg(long)]
    pub dt: f64,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest admissible f(pi/dt)/f(0).
    #[arg(long, default_value_t = fracspec::synth::DEFAULT_ALIAS_TOLERANCE)]
    pub alias_tolerance: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Run a reduced panel (under a minute).
    #[arg(long)]
    pub quick: bool,
    /// Include the statistical checks on simulated paths.
    #[arg(long)]
    pub statistical: bool,
    /// Also check that the misprinted even-order closed form disagrees with
    /// the covariance integral by the expected factor.
    #[arg(long)]
    pub include_paper_printed_even_form: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Fractional orders alpha.
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75,1")]
    pub alpha: Vec<f64>,
    /// Exponents beta.
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
    pub beta: Vec<f64>,
    /// Shift parameter mu > 0.
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    /// Noise intensity sigma^2 > 0.
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    /// First frequency.
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub start: f64,
    /// Frequency spacing.
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    /// Number of frequencies.
    #[arg(long, default_value_t = 201)]
    pub count: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}
