//! Command-line front end of `fracspec`: tabulates spectral densities,
//! covariances, kernels and special functions, simulates sample paths, runs
//! the validation suite and emits figure data.
//!
//! Exit codes: 0 on success, 2 on argument or validation errors (nothing is
//! written to the output stream), 1 on numerical failures.

pub mod args;
pub mod figure;
pub mod output;
pub mod validation;

use args::{
    Cli, Command, CovarianceArgs, FigureArgs, Format, Function, GridArgs, KernelArgs, OutputArgs,
    SimulateArgs, SpecfunArgs, SpectralArgs, ValidateArgs,
};
use clap::error::ErrorKind;
use clap::Parser;
use fracspec::covariance::{covariance, resolve_method, Method};
use fracspec::kernels::{heat_kernel, KernelSpec, Sign};
use fracspec::models::{spectral_density, validate_model, Family, ModelSpec};
use fracspec::specfun::{
    airy_ai, airy_ai_prime, bessel_k, gamma_fn, ln_gamma, onesided_stable_density,
    symmetric_stable_density, StableIndex,
};
use fracspec::synth::synthesize_with_tolerance;
use fracspec::transforms::{inverse_fourier_at, Taper, TransformPlan, DEFAULT_SAMPLE_COUNT};
use fracspec::Error;
use output::{csv, json, resolve_output, Axis, CurveRecord};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use validation::{run_validation_suite, SuiteConfig};

/// Environment variable naming the directory for relative `--output` paths.
pub const OUT_DIR_VAR: &str = "FRACSPEC_OUT_DIR";

/// Why a command failed.
#[derive(Debug)]
enum Failure {
    /// Bad arguments or parameters (exit 2).
    Usage(String),
    /// A numerical routine failed (exit 1).
    Numerical(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => m,
        }
    }
}

/// Classifies a library error; `context` names the computation.
fn failure(context: &str, e: Error) -> Failure {
    let message = format!("{context}: {e}");
    match e {
        Error::Validation(_)
        | Error::Argument(_)
        | Error::Domain { .. }
        | Error::MethodUnavailable { .. }
        | Error::DivergentVariance { .. }
        | Error::AliasGuard { .. } => Failure::Usage(message),
        Error::Overflow { .. }
        | Error::NoConvergence { .. }
        | Error::Accuracy { .. }
        | Error::InsufficientDecay { .. } => Failure::Numerical(message),
    }
}

/// What a successful command produced: the rendered output and an exit code
/// (the validation suite exits 1 when a check fails).
struct Success {
    text: String,
    code: i32,
}

impl From<String> for Success {
    fn from(text: String) -> Self {
        Self { text, code: 0 }
    }
}

/// Runs the command line with the process streams and environment.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let out_dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from);
    run_with(
        argv,
        out_dir,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

/// Runs the command line; `argv[0]` is the program name. Results go to `out`
/// (or the `--output` file), diagnostics to `err`.
pub fn run_with<I, T>(
    argv: I,
    out_dir: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let (result, target) = match &cli.command {
        Command::Spectral(a) => (spectral(a).map(Success::from), &a.out),
        Command::Covariance(a) => (covariance_cmd(a).map(Success::from), &a.out),
        Command::Kernel(a) => (kernel(a).map(Success::from), &a.out),
        Command::Specfun(a) => (specfun(a).map(Success::from), &a.out),
        Command::Simulate(a) => (simulate(a).map(Success::from), &a.out),
        Command::Validate(a) => (validate(a, err), &a.out),
        Command::Figure(a) => (figure(a).map(Success::from), &a.out),
    };
    match result.and_then(|s| emit(&s.text, target, out_dir, out).map(|()| s.code)) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn emit(
    text: &str,
    target: &OutputArgs,
    out_dir: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    match &target.output {
        Some(path) => {
            let path = resolve_output(path, out_dir.as_deref());
            std::fs::write(&path, text)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Numerical(format!("cannot write output: {e}"))),
    }
}

fn model(a: &args::ModelArgs) -> Result<ModelSpec, Failure> {
    validate_model(&a.raw()).map_err(|e| failure("model", e))
}

/// The single point when given, otherwise the grid.
fn axis(point: Option<f64>, grid: &GridArgs) -> Result<Axis, Failure> {
    axis_from(point, grid.start, grid.step, grid.count)
}

fn axis_from(point: Option<f64>, start: f64, step: f64, count: usize) -> Result<Axis, Failure> {
    if let Some(x) = point {
        return if x.is_finite() {
            Ok(Axis::single(x))
        } else {
            Err(Failure::Usage(format!("point must be finite, got {x}")))
        };
    }
    fracspec::models::Grid::new(start, step, count).map_err(|e| failure("grid", e))?;
    Ok(Axis { start, step, count })
}

fn render(
    format: Format,
    header: &[&str],
    axis: &Axis,
    record: CurveRecord,
    extra: impl Fn(usize, f64) -> Vec<f64>,
) -> String {
    match format {
        Format::Json => json(&record),
        Format::Csv => csv(header, axis.points().enumerate().map(|(k, x)| extra(k, x))),
    }
}

fn spectral(a: &SpectralArgs) -> Result<String, Failure> {
    let m = model(&a.model)?;
    let axis = axis(a.tau, &a.grid)?;
    let f: Vec<_> = axis.points().map(|t| spectral_density(&m, t)).collect();
    let complex = m.family() == Family::OddOrder;
    let record = CurveRecord {
        model: Some(m),
        quantity: "spectral",
        method: "closed-form".into(),
        grid: axis,
        values: f.iter().map(|z| z.re).collect(),
        values_imag: complex.then(|| f.iter().map(|z| z.im).collect()),
    };
    Ok(if complex {
        render(
            a.out.format,
            &["tau", "re", "im", "modulus", "phase"],
            &axis,
            record,
            |k, t| vec![t, f[k].re, f[k].im, f[k].norm(), f[k].arg()],
        )
    } else {
        render(a.out.format, &["tau", "f"], &axis, record, |k, t| {
            vec![t, f[k].re]
        })
    })
}

fn covariance_cmd(a: &CovarianceArgs) -> Result<String, Failure> {
    let m = model(&a.model)?;
    let axis = axis(a.h, &a.grid)?;
    let method = Method::from(a.method);
    let plan = if a.samples == DEFAULT_SAMPLE_COUNT {
        TransformPlan::auto(&m)
    } else {
        let cutoff = TransformPlan::auto(&m).frequency_cutoff();
        TransformPlan::new(cutoff, a.samples, Taper::TailCorrected)
            .map_err(|e| failure("transform plan", e))?
    };
    let mut values = Vec::with_capacity(axis.count);
    let mut resolved = Vec::new();
    for h in axis.points() {
        let used = resolve_method(&m, h, method);
        let v = if used == Method::FourierOracle {
            inverse_fourier_at(&m, h, &plan)
        } else {
            covariance(&m, h, used)
        };
        values
            .push(v.map_err(|e| failure(&format!("covariance of {m} at h = {h:?} by {used}"), e))?);
        if !resolved.contains(&used) {
            resolved.push(used);
        }
    }
    let method_name = match resolved.as_slice() {
        [single] => single.name().to_string(),
        _ => method.name().to_string(),
    };
    let record = CurveRecord {
        model: Some(m),
        quantity: "covariance",
        method: method_name,
        grid: axis,
        values: values.clone(),
        values_imag: None,
    };
    Ok(render(
        a.out.format,
        &["h", "cov"],
        &axis,
        record,
        |k, h| vec![h, values[k]],
    ))
}

fn kernel(a: &KernelArgs) -> Result<String, Failure> {
    let kappa = Sign::try_from(i8::try_from(a.kappa).unwrap_or(0)).map_err(Failure::Usage)?;
    let spec = KernelSpec::new(a.order, kappa).map_err(|e| failure("kernel", e))?;
    let axis = axis(a.x, &a.grid)?;
    let values = axis
        .points()
        .map(|x| {
            heat_kernel(spec, x, a.w).map_err(|e| failure(&format!("heat kernel at x = {x:?}"), e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let record = CurveRecord {
        model: None,
        quantity: "kernel",
        method: format!("order-{}", a.order),
        grid: axis,
        values: values.clone(),
        values_imag: None,
    };
    Ok(render(a.out.format, &["x", "u"], &axis, record, |k, x| {
        vec![x, values[k]]
    }))
}

fn specfun(a: &SpecfunArgs) -> Result<String, Failure> {
    let axis = axis_from(a.x, a.start, a.step, a.count)?;
    let eval = |x: f64| -> fracspec::Result<f64> {
        match a.function {
            Function::BesselK => bessel_k(a.nu, x),
            Function::AiryAi => Ok(airy_ai(x)),
            Function::AiryAiPrime => Ok(airy_ai_prime(x)),
            Function::Gamma => gamma_fn(x),
            Function::LnGamma => ln_gamma(x),
            Function::OnesidedStable => {
                onesided_stable_density(StableIndex::one_sided(a.alpha)?, x, a.s).map(|d| d.value)
            }
            Function::SymmetricStable => {
                symmetric_stable_density(StableIndex::symmetric(a.alpha)?, a.scale, x, a.w)
                    .map(|d| d.value)
            }
        }
    };
    let values = axis
        .points()
        .map(|x| eval(x).map_err(|e| failure(&format!("{:?} at x = {x:?}", a.function), e)))
        .collect::<Result<Vec<_>, _>>()?;
    let name = clap::ValueEnum::to_possible_value(&a.function)
        .map_or_else(String::new, |v| v.get_name().to_string());
    let record = CurveRecord {
        model: None,
        quantity: "specfun",
        method: name,
        grid: axis,
        values: values.clone(),
        values_imag: None,
    };
    Ok(render(
        a.out.format,
        &["x", "value"],
        &axis,
        record,
        |k, x| vec![x, values[k]],
    ))
}

fn simulate(a: &SimulateArgs) -> Result<String, Failure> {
    let m = model(&a.model)?;
    let path = synthesize_with_tolerance(&m, a.count, a.dt, a.seed, a.alias_tolerance)
        .map_err(|e| failure("simulate", e))?;
    let axis = Axis {
        start: 0.0,
        step: a.dt,
        count: path.values.len(),
    };
    let times: Vec<f64> = path.times().collect();
    let record = CurveRecord {
        model: Some(m),
        quantity: "path",
        method: format!("spectral-synthesis seed={}", a.seed),
        grid: axis,
        values: path.values.clone(),
        values_imag: None,
    };
    Ok(render(a.out.format, &["t", "x"], &axis, record, |k, _| {
        vec![times[k], path.values[k]]
    }))
}

fn validate(a: &ValidateArgs, err: &mut dyn Write) -> Result<Success, Failure> {
    let report = run_validation_suite(SuiteConfig {
        quick: a.quick,
        statistical: a.statistical,
        printed_even_form: a.include_paper_printed_even_form,
    });
    let _ = writeln!(
        err,
        "validation: {} passed, {} failed",
        report.passed, report.failed
    );
    for c in report.failures() {
        let _ = writeln!(
            err,
            "FAILED {}: observed {:?}, expected {:?}, tolerance {:?}{}",
            c.name,
            c.observed,
            c.expected,
            c.tolerance,
            c.note
                .as_deref()
                .map_or_else(String::new, |n| format!(" ({n})"))
        );
    }
    let text = match a.out.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut s = String::from("name,observed,expected,tolerance,pass\n");
            for c in &report.checks {
                s += &format!(
                    "\"{}\",{:?},{:?},{:?},{}\n",
                    c.name, c.observed, c.expected, c.tolerance, c.pass
                );
            }
            s
        }
    };
    Ok(Success {
        text,
        code: if report.all_pass() { 0 } else { 1 },
    })
}

fn figure(a: &FigureArgs) -> Result<String, Failure> {
    let axis = axis_from(None, a.start, a.step, a.count)?;
    let curves = figure::figure_data(&a.alpha, &a.beta, a.mu, a.sigma2, &axis)
        .map_err(|e| failure("figure", e))?;
    Ok(match a.out.format {
        Format::Json => {
            let records: Vec<CurveRecord> = curves
                .iter()
                .map(|c| CurveRecord {
                    model: Some(c.model),
                    quantity: "spectral",
                    method: "closed-form".into(),
                    grid: axis,
                    values: c.values.clone(),
                    values_imag: None,
                })
                .collect();
            json(&records)
        }
        Format::Csv => {
            let taus: Vec<f64> = axis.points().collect();
            csv(
                &["alpha", "beta", "tau", "f"],
                curves.iter().flat_map(|c| {
                    taus.iter()
                        .zip(&c.values)
                        .map(move |(&t, &f)| vec![c.alpha, c.beta, t, f])
                }),
            )
        }
    })
}
