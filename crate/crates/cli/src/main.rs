//! `floatconv` command-line tool.
//!
//! Results go to stdout and output files; diagnostics go to stderr as
//! `ERR:<kind>: <message>`. Exit status 1 means invalid input or
//! configuration, 2 means a numerical or simulation failure.

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use floatconv::export::{self, fixed6};
use floatconv::pulley::{self, CounterElement};
use floatconv::{Error, PulleyProfileF64, SvgOptions};

use crate::config::RunConfig;

/// Relative force tolerance of `verify`, before CSV quantization allowance.
const VERIFY_FORCE_TOL: f64 = 1e-9;
/// Relative energy tolerance of `verify`.
const VERIFY_ENERGY_TOL: f64 = 1e-6;
/// Half a unit in the last place of the 6-decimal mm column, in m.
const CSV_HALF_ULP_M: f64 = 0.5e-6 / 1000.0;
/// Half a unit in the last place of the 6-decimal degree column, in rad.
const CSV_HALF_ULP_RAD: f64 = 0.5e-6 * std::f64::consts::PI / 180.0;
const DEFAULT_SWEEP_POINTS: usize = 201;

#[derive(Parser)]
#[command(
    name = "floatconv",
    version,
    about = "Non-circular pulley synthesis and floating converter simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the pulley profile and write it as CSV.
    Synthesize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a profile CSV against the configured spring and counter.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        profile: PathBuf,
    },
    /// Tabulate operating forces over the converter stroke.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Override the configured offset gap, mm.
        #[arg(long = "gap-mm")]
        gap_mm: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SWEEP_POINTS)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Plan and simulate a grasp, writing the tick trace as CSV.
    Grasp {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "target-force-n")]
        target_force_n: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a profile CSV as SVG.
    ExportSvg {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Pixels per millimetre.
        #[arg(long)]
        scale: Option<f64>,
    },
}

enum CliError {
    Config(String),
    Io(String),
    Model(Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "ConfigError",
            CliError::Io(_) => "IoError",
            CliError::Model(e) => e.kind(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Model(e) => match e {
                Error::Domain { .. } | Error::Validation(_) | Error::Parse { .. } => 1,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(m) | CliError::Io(m) => m.clone(),
            CliError::Model(e) => e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_config(path: &Path) -> CliResult<RunConfig> {
    RunConfig::from_json(&read_text(path)?).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn synthesize(config: &Path, out: &Path) -> CliResult {
    let cfg = load_config(config)?;
    let profile = cfg.profile()?;
    write_text(out, &export::profile_to_csv(&profile))?;
    let (r_lo, r_hi) = profile.radius_range();
    let slope = profile
        .slope()
        .map_or_else(|| "none".to_owned(), |a| format!("{a:.9e}"));
    println!(
        "a_m_per_rad={slope} theta_max_deg={} r_min_mm={} r_max_mm={} samples={}",
        fixed6(profile.theta_max().to_degrees()),
        fixed6(r_lo * 1000.0),
        fixed6(r_hi * 1000.0),
        profile.len()
    );
    Ok(())
}

/// Largest force perturbation the 6-decimal CSV rounding of `profile` can
/// introduce, N.
fn quantization_allowance(
    profile: &PulleyProfileF64,
    counter: &CounterElement<f64>,
    cfg: &RunConfig,
) -> CliResult<f64> {
    let spring = cfg.spring()?;
    let radius = profile.radius();
    let theta_max = profile.theta_max();
    let samples = profile.samples();
    let mut tension_per_r: f64 = 0.0;
    let mut slope: f64 = 0.0;
    let mut r_peak: f64 = 0.0;
    for w in samples.windows(2) {
        let (x0, x1) = (
            (radius * w[0].0).min(spring.x_max()),
            (radius * w[1].0).min(spring.x_max()),
        );
        let df = spring.force_at(x1)? - spring.force_at(x0)?;
        if x1 > x0 {
            slope = slope.max((df / (x1 - x0)).abs());
        }
    }
    for &(theta, r) in samples {
        let t = counter.tension(profile.payout(theta)?);
        tension_per_r = tension_per_r.max(t.abs() / radius);
        r_peak = r_peak.max(r);
    }
    let k2 = match counter {
        CounterElement::Spring { stiffness, .. } => *stiffness,
        CounterElement::Weight { .. } => 0.0,
    };
    Ok(tension_per_r * CSV_HALF_ULP_M
        + slope * radius * CSV_HALF_ULP_RAD
        + r_peak / radius * k2 * theta_max * CSV_HALF_ULP_M)
}

fn verify(config: &Path, profile_path: &Path) -> CliResult {
    let cfg = load_config(config)?;
    let spring = cfg.spring()?;
    let counter = cfg.counter()?;
    let profile = export::read_profile_csv(&read_text(profile_path)?, cfg.pulley.circular_radius_m)?;
    let check = pulley::verify(&profile, &counter, &spring)?;
    let allowance = quantization_allowance(&profile, &counter, &cfg)?;
    let force_ok = check.max_residual <= VERIFY_FORCE_TOL * check.peak_force + allowance;
    let energy_ok = check.energy_relative() <= VERIFY_ENERGY_TOL;
    println!(
        "max_residual_n={:.6e} peak_force_n={} force_rel={:.6e} quantization_n={:.6e} energy_rel={:.6e}",
        check.max_residual,
        fixed6(check.peak_force),
        check.force_relative(),
        allowance,
        check.energy_relative()
    );
    if force_ok && energy_ok {
        Ok(())
    } else {
        Err(Error::Numerical(format!(
            "verification failed (force {}, energy {})",
            if force_ok { "ok" } else { "out of tolerance" },
            if energy_ok { "ok" } else { "out of tolerance" }
        ))
        .into())
    }
}

fn sweep(config: &Path, gap_mm: Option<f64>, points: usize, out: &Path) -> CliResult {
    let mut cfg = load_config(config)?;
    if let Some(g) = gap_mm {
        cfg.gap_x_m = g / 1000.0;
    }
    let converter = cfg.converter(cfg.profile()?)?;
    let table = converter.sweep(0.0, converter.u_max(), points)?;
    write_text(out, &export::sweep_to_csv(&table))?;
    let s = table.summary();
    println!(
        "op_force_const_n={} ratio_peak={}",
        fixed6(s.op_force_const),
        fixed6(s.ratio_peak)
    );
    println!(
        "op_force_spread_n={:.6e} ratio_pointwise={}",
        s.op_force_spread,
        fixed6(s.ratio_pointwise)
    );
    Ok(())
}

fn grasp(config: &Path, target: f64, out: &Path) -> CliResult {
    let cfg = load_config(config)?;
    let converter = cfg.converter(cfg.profile()?)?;
    let model = cfg
        .gripper(converter)
        .ok_or_else(|| CliError::Config(format!("{}: missing field `gripper`", config.display())))?;
    let plan = model.plan_grasp(target)?;
    let trace = model.simulate_grasp(&plan)?;
    write_text(out, &export::trace_to_csv(&trace))?;
    let amplification = trace.amplification().map_or_else(|| "inf".to_owned(), fixed6);
    println!(
        "gap_mm={} stroke_mm={} max_actuator_n={} final_grip_n={} amplification={amplification}",
        fixed6(plan.gap_x * 1000.0),
        fixed6(plan.converter_stroke * 1000.0),
        fixed6(trace.max_actuator_force()),
        fixed6(trace.final_grip_force()),
    );
    Ok(())
}

fn export_svg(profile: &Path, out: &Path, scale: Option<f64>) -> CliResult {
    let samples = export::read_profile_samples::<f64>(&read_text(profile)?)?;
    let mut opts = SvgOptions::default();
    if let Some(s) = scale {
        opts.scale = s;
    }
    write_text(out, &export::samples_to_svg(&samples, &opts)?)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Synthesize { config, out } => synthesize(&config, &out),
        Command::Verify { config, profile } => verify(&config, &profile),
        Command::Sweep {
            config,
            gap_mm,
            points,
            out,
        } => sweep(&config, gap_mm, points, &out),
        Command::Grasp {
            config,
            target_force_n,
            out,
        } => grasp(&config, target_force_n, &out),
        Command::ExportSvg { profile, out, scale } => export_svg(&profile, &out, scale),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprint!("ERR:UsageError: {e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ERR:{}: {}", e.kind(), e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
