//! `modegate`: truth tables, similarities and parameter sweeps for a
//! linear-optics coincidence CNOT driven by mismatched photons.

mod output;
mod settings;
mod verify;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modegate::detection::{
    pointwise_truth_table, success_probabilities, windowed_truth_table, Basis, DetectorModel,
    Window,
};
use modegate::metrics::{closed_form_similarity, ideal_cnot_table, similarity};
use modegate::network::coincidence_cnot_network;
use modegate::oracle::DEFAULT_BINS;
use modegate::sweep::{run_sweep, Axis, Dataset, Output, Parameter, Point, Preset, SweepSpec};

use output::{SimilarityReport, TableReport};
use settings::{parse_axis, Format, Settings, WindowMode};

const EXIT_INVALID: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_IO: u8 = 1;

const DEFAULT_SWEEP_WINDOW: f64 = 0.01;
const DEFAULT_SAMPLES: usize = 20;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_TOLERANCE: f64 = 1e-3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] modegate::error::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("verification failed: {0}")]
    VerifyFailed(String),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Model(_) => EXIT_INVALID,
            CliError::Io(_) => EXIT_IO,
            CliError::VerifyFailed(_) => EXIT_VERIFY,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "modegate",
    version,
    about = "Mode-mismatch simulator for a linear-optics coincidence CNOT gate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the 4x4 logical truth table with success probabilities and similarity.
    TruthTable(PointArgs),
    /// Compare the table-derived similarity with its closed form.
    Similarity(PointArgs),
    /// Run a parameter sweep from a preset or explicit axes.
    Sweep(SweepArgs),
    /// Check the closed-form model against the brute-force bin oracle.
    Verify(VerifyArgs),
}

#[derive(Args, Clone, Default)]
struct ParamArgs {
    /// Time offset of the target photon.
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    /// Frequency offset of the target photon.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    /// Control detector click time (window start).
    #[arg(long, allow_hyphen_values = true)]
    tc: Option<f64>,
    /// Target detector click time (window start).
    #[arg(long, allow_hyphen_values = true)]
    tt: Option<f64>,
    /// Detector integration window width.
    #[arg(long)]
    tw: Option<f64>,
    /// pointwise, full or finite; inferred from --tw when omitted.
    #[arg(long)]
    window: Option<WindowMode>,
    /// time-resolved or gated.
    #[arg(long)]
    model: Option<DetectorModel>,
    /// Z or X.
    #[arg(long)]
    basis: Option<Basis>,
}

#[derive(Args, Clone, Default)]
struct IoArgs {
    /// File of `key = value` lines; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<Format>,
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct PointArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args, Clone)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    io: IoArgs,
    /// fig2a, fig2b, fig3a, fig3b, fig4 or fig5.
    #[arg(long)]
    preset: Option<Preset>,
    /// PARAM:START:STOP:N, at most twice; replaces the preset's axes.
    #[arg(long, value_parser = parse_axis)]
    axis: Vec<Axis>,
    /// Comma-separated: similarity, truth_table, p_min, success_probs.
    #[arg(long, value_delimiter = ',')]
    outputs: Vec<Output>,
}

#[derive(Args, Clone)]
struct VerifyArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Grid bins for the oracle.
    #[arg(long)]
    bins: Option<usize>,
    /// Random parameter sets per randomized check.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Limit for the windowed and pointwise discrepancies.
    #[arg(long)]
    tolerance: Option<f64>,
}

impl ParamArgs {
    fn settings(&self) -> Settings {
        Settings {
            tau: self.tau,
            omega: self.omega,
            t_c: self.tc,
            t_t: self.tt,
            t_w: self.tw,
            window: self.window,
            model: self.model,
            basis: self.basis,
            ..Settings::default()
        }
    }
}

/// Flags over config file, then global checks. Non-finite flag values are
/// rejected here since clap accepts `inf` and `NaN` as floats.
fn resolve(flags: Settings, io: &IoArgs) -> Result<Settings, CliError> {
    for (name, v) in [
        ("tau", flags.tau),
        ("omega", flags.omega),
        ("tc", flags.t_c),
        ("tt", flags.t_t),
        ("tw", flags.t_w),
    ] {
        if v.is_some_and(|x| !x.is_finite()) {
            return Err(CliError::invalid(format!("--{name} must be finite")));
        }
    }
    let flags = Settings {
        format: io.format,
        ..flags
    };
    let file = match &io.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    let s = flags.over(file);
    s.validate()?;
    Ok(s)
}

/// Point, model and window for single-point commands.
struct Resolved {
    point: Point,
    model: DetectorModel,
    basis: Basis,
    /// `None` selects pointwise densities.
    window: Option<Window>,
}

fn resolve_point(s: &Settings) -> Result<Resolved, CliError> {
    let model = s.model.unwrap_or(DetectorModel::TimeResolved);
    let t_c = s.t_c.unwrap_or(0.0);
    let t_t = match (model, s.t_t) {
        (DetectorModel::Gated, Some(tt)) if tt != t_c => {
            return Err(CliError::invalid(format!(
                "gated detectors share one gate: --tt {tt} differs from --tc {t_c}"
            )))
        }
        (DetectorModel::Gated, _) => t_c,
        (DetectorModel::TimeResolved, tt) => tt.unwrap_or(0.0),
    };
    let mode = s.window.unwrap_or(if s.t_w.is_some() {
        WindowMode::Finite
    } else {
        WindowMode::Pointwise
    });
    let window = match (mode, s.t_w) {
        (WindowMode::Pointwise, None) => None,
        (WindowMode::Full, None) => Some(Window::Full),
        (WindowMode::Finite, Some(w)) => Some(Window::Finite(w)),
        (WindowMode::Finite, None) => return Err(CliError::invalid("finite windows need --tw")),
        (m, Some(_)) => {
            return Err(CliError::invalid(format!(
                "--tw conflicts with --window {}",
                window_name(m)
            )))
        }
    };
    let point = Point {
        tau: s.tau.unwrap_or(0.0),
        omega: s.omega.unwrap_or(0.0),
        t_c,
        t_t,
        window: window.unwrap_or(Window::Full),
    };
    Ok(Resolved {
        point,
        model,
        basis: s.basis.unwrap_or(Basis::Z),
        window,
    })
}

fn window_name(m: WindowMode) -> &'static str {
    match m {
        WindowMode::Pointwise => "pointwise",
        WindowMode::Full => "full",
        WindowMode::Finite => "finite",
    }
}

fn cmd_truth_table(s: &Settings) -> Result<String, CliError> {
    let r = resolve_point(s)?;
    let u = coincidence_cnot_network();
    let photons = r.point.photons();
    let (table, success) = match r.window {
        None => (
            pointwise_truth_table(&u, &photons, r.point.t_c, r.point.t_t, r.basis),
            None,
        ),
        Some(_) => {
            let t = windowed_truth_table(&u, &photons, &r.point.detection(r.model), r.basis)?;
            (t, Some(success_probabilities(&t)?))
        }
    };
    let sim = similarity(&ideal_cnot_table(r.basis), &table)?.value;
    let report = TableReport {
        point: r.point,
        window: r.window,
        model: r.model,
        basis: r.basis,
        table,
        success,
        similarity: sim,
    };
    output::truth_table(&report, s.format.unwrap_or_default())
}

fn cmd_similarity(s: &Settings) -> Result<String, CliError> {
    let r = resolve_point(s)?;
    let u = coincidence_cnot_network();
    let photons = r.point.photons();
    let ideal = ideal_cnot_table(r.basis);
    let pointwise = pointwise_truth_table(&u, &photons, r.point.t_c, r.point.t_t, r.basis);
    let from_table = similarity(&ideal, &pointwise)?.value;
    let closed_form = closed_form_similarity(r.point.tau, r.point.omega, r.point.t_c, r.point.t_t);
    let windowed = match r.window {
        None => None,
        Some(_) => {
            let t = windowed_truth_table(&u, &photons, &r.point.detection(r.model), r.basis)?;
            Some(similarity(&ideal, &t)?.value)
        }
    };
    let report = SimilarityReport {
        point: r.point,
        window: r.window,
        model: r.model,
        basis: r.basis,
        from_table,
        closed_form,
        windowed,
    };
    output::similarity(&report, s.format.unwrap_or_default())
}

/// Scalar overrides as (parameter, value) pairs.
fn scalar_overrides(s: &Settings) -> Vec<(Parameter, f64)> {
    [
        (Parameter::Tau, s.tau),
        (Parameter::Omega, s.omega),
        (Parameter::TControl, s.t_c),
        (Parameter::TTarget, s.t_t),
        (Parameter::TWindow, s.t_w),
    ]
    .into_iter()
    .filter_map(|(p, v)| v.map(|v| (p, v)))
    .collect()
}

/// Applies scalar overrides to a base spec. A scalar may not pin a swept parameter.
fn build_spec(
    s: &Settings,
    axes: Vec<Axis>,
    base: Point,
    model: DetectorModel,
    basis: Basis,
    outputs: Vec<Output>,
) -> Result<SweepSpec, CliError> {
    let mut fixed = base;
    for (param, value) in scalar_overrides(s) {
        if axes.iter().any(|a| a.parameter() == param) {
            return Err(CliError::invalid(format!(
                "{param} is swept; it cannot also be fixed"
            )));
        }
        fixed = fixed.with(param, value);
    }
    match s.window {
        Some(WindowMode::Pointwise) => {
            return Err(CliError::invalid(
                "sweeps need windows: use --tw or --window full",
            ))
        }
        Some(WindowMode::Full) => {
            if axes.iter().any(|a| a.parameter() == Parameter::TWindow) || s.t_w.is_some() {
                return Err(CliError::invalid(
                    "--window full conflicts with a window width",
                ));
            }
            fixed.window = Window::Full;
        }
        _ => {}
    }
    if model == DetectorModel::Gated {
        if let (Some(tc), Some(tt)) = (s.t_c, s.t_t) {
            if tc != tt {
                return Err(CliError::invalid(format!(
                    "gated detectors share one gate: --tt {tt} differs from --tc {tc}"
                )));
            }
        }
        if s.t_t.is_some() && s.t_c.is_none() {
            fixed.t_c = fixed.t_t;
        }
    }
    Ok(SweepSpec::new(axes, fixed, model, basis, outputs)?)
}

fn cmd_sweep(s: &Settings) -> Result<String, CliError> {
    let basis = s.basis.unwrap_or(Basis::Z);
    let outputs = s
        .outputs
        .clone()
        .unwrap_or_else(|| Preset::DEFAULT_OUTPUTS.to_vec());
    if let Some(axes) = &s.axes {
        if axes.len() > 2 {
            return Err(CliError::invalid(format!(
                "at most two axes, got {}",
                axes.len()
            )));
        }
    }
    let specs = match s.preset {
        Some(preset) => preset
            .specs(basis, &outputs)?
            .into_iter()
            .map(|spec| {
                let axes = s.axes.clone().unwrap_or_else(|| spec.axes().to_vec());
                build_spec(
                    s,
                    axes,
                    *spec.fixed(),
                    s.model.unwrap_or(spec.model()),
                    basis,
                    outputs.clone(),
                )
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => {
            let axes = s
                .axes
                .clone()
                .ok_or_else(|| CliError::invalid("sweep needs --preset or at least one --axis"))?;
            let base = Point {
                window: Window::Finite(DEFAULT_SWEEP_WINDOW),
                ..Point::default()
            };
            vec![build_spec(
                s,
                axes,
                base,
                s.model.unwrap_or(DetectorModel::TimeResolved),
                basis,
                outputs.clone(),
            )?]
        }
    };
    let mut data = Dataset {
        outputs: outputs.clone(),
        rows: Vec::new(),
    };
    for spec in &specs {
        data.extend(run_sweep(spec))?;
    }
    output::dataset(&data, basis, s.format.unwrap_or_default())
}

fn cmd_verify(s: &Settings) -> Result<(String, bool), CliError> {
    let opts = verify::VerifyOptions {
        bins: s.bins.unwrap_or(DEFAULT_BINS),
        samples: s.samples.unwrap_or(DEFAULT_SAMPLES),
        seed: s.seed.unwrap_or(DEFAULT_SEED),
        tolerance: s.tolerance.unwrap_or(DEFAULT_TOLERANCE),
    };
    let checks = verify::run(&opts)?;
    let passed = checks.iter().all(verify::Check::passed);
    Ok((
        verify::report(&checks, s.format.unwrap_or_default()),
        passed,
    ))
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::TruthTable(a) => emit(
            &cmd_truth_table(&resolve(a.params.settings(), &a.io)?)?,
            a.io.output.as_ref(),
        ),
        Command::Similarity(a) => emit(
            &cmd_similarity(&resolve(a.params.settings(), &a.io)?)?,
            a.io.output.as_ref(),
        ),
        Command::Sweep(a) => {
            let flags = Settings {
                preset: a.preset,
                axes: (!a.axis.is_empty()).then(|| a.axis.clone()),
                outputs: (!a.outputs.is_empty()).then(|| a.outputs.clone()),
                ..a.params.settings()
            };
            emit(&cmd_sweep(&resolve(flags, &a.io)?)?, a.io.output.as_ref())
        }
        Command::Verify(a) => {
            let flags = Settings {
                bins: a.bins,
                samples: a.samples,
                seed: a.seed,
                tolerance: a.tolerance,
                ..Settings::default()
            };
            let (report, passed) = cmd_verify(&resolve(flags, &a.io)?)?;
            emit(&report, a.io.output.as_ref())?;
            if passed {
                Ok(())
            } else {
                Err(CliError::VerifyFailed(
                    "a discrepancy exceeded its limit".into(),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("modegate: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
