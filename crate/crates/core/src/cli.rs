//! Command-line front end.
//!
//! Exit codes: 0 success, 2 validation or config error, 3 I/O error.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::angle::parse_angle;
use crate::composite::{Family, PhaseList};
use crate::config::HrConfig;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::metrics::{fmt17, infidelity, scan_2d, scan_area, ScanGrid, ScanMethod, ScanSettings};
use crate::npod::{composite_hr_with, householder_matrix, random_unit_vector, NPodSystem};
use crate::two_level::{PulseShape, DEFAULT_SUBSTEPS};

#[derive(Debug, Parser)]
#[command(
    name = "composite-hr",
    version,
    about = "Composite-pulse Householder reflections"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a composite phase list in units of π and in radians.
    Phases {
        #[arg(long, default_value = "bb")]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        variant: u32,
    },
    /// Simulate a composite Householder reflection from a JSON config.
    Hr(HrArgs),
    /// Infidelity versus pulse area, one column per sequence length.
    ScanArea(ScanAreaArgs),
    /// Infidelity over the (area, detuning) plane.
    #[command(name = "scan-2d")]
    Scan2d(Scan2dArgs),
}

#[derive(Debug, Args)]
pub struct HrArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Per-pulse rms area (e.g. `pi`, `1.1pi`); defaults to the config value.
    #[arg(long, allow_hyphen_values = true)]
    pub area: Option<String>,
    /// Detuning (rad/time); defaults to the config value.
    #[arg(long, allow_hyphen_values = true)]
    pub detuning: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the effective config and exit.
    #[arg(long)]
    pub dump_config: bool,
}

#[derive(Debug, Args)]
pub struct FullArgs {
    /// Cross-check with full (N+1)-level propagation.
    #[arg(long)]
    pub full: bool,
    /// Manifold dimension for `--full`.
    #[arg(long = "N", default_value_t = 3)]
    pub dim: usize,
    /// Seed for the random target vector used by `--full`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Pulse shape: rectangular or gaussian.
    #[arg(long, default_value = "rectangular")]
    pub shape: String,
    #[arg(long, default_value_t = DEFAULT_SUBSTEPS)]
    pub substeps: usize,
}

#[derive(Debug, Args)]
pub struct ScanAreaArgs {
    #[arg(long, default_value = "bb")]
    pub family: String,
    #[arg(long, value_delimiter = ',', default_value = "1,3,5,9")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub variant: u32,
    /// Reflection phase φ.
    #[arg(long, default_value = "pi", allow_hyphen_values = true)]
    pub phi: String,
    /// Smallest A/π.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub min: f64,
    /// Largest A/π.
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub max: f64,
    #[arg(long, default_value_t = 161)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub full: FullArgs,
}

#[derive(Debug, Args)]
pub struct Scan2dArgs {
    #[arg(long, default_value = "universal")]
    pub family: String,
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub variant: u32,
    #[arg(long, default_value = "pi", allow_hyphen_values = true)]
    pub phi: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub area_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub area_max: f64,
    #[arg(long, default_value_t = 101)]
    pub area_points: usize,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    pub detuning_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub detuning_max: f64,
    #[arg(long, default_value_t = 101)]
    pub detuning_points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub full: FullArgs,
}

/// Parses arguments, runs, reports errors on stderr and returns the exit code.
pub fn run_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Phases { family, n, variant } => cmd_phases(family, *n, *variant, stdout),
        Command::Hr(args) => cmd_hr(args, stdout),
        Command::ScanArea(args) => cmd_scan_area(args, stdout),
        Command::Scan2d(args) => cmd_scan_2d(args, stdout),
    }
}

pub fn cmd_phases(family: &str, n: usize, variant: u32, out: &mut dyn Write) -> Result<()> {
    let list = PhaseList::new(family.parse()?, n, variant)?;
    writeln!(out, "{} (×π)", list.format_pi())?;
    let radians: Vec<String> = list.phases().iter().map(|p| fmt17(*p)).collect();
    writeln!(out, "radians: {}", radians.join(", "))?;
    Ok(())
}

#[derive(Serialize)]
struct HrReport {
    config: HrConfig,
    area: f64,
    detuning: f64,
    infidelity: f64,
    bright_vector: Vec<[f64; 2]>,
    actual: Vec<Vec<[f64; 2]>>,
    target: Vec<Vec<[f64; 2]>>,
}

fn matrix_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

/// Applies the `--area`/`--detuning` overrides to the loaded config.
fn effective_config(args: &HrArgs) -> Result<HrConfig> {
    let mut cfg = HrConfig::load(&args.config)?;
    if let Some(area) = &args.area {
        cfg.area = parse_angle(area)? / PI;
    }
    if let Some(detuning) = args.detuning {
        cfg.detuning = detuning;
    }
    Ok(cfg)
}

pub fn cmd_hr(args: &HrArgs, stdout: &mut dyn Write) -> Result<()> {
    let cfg = effective_config(args)?;
    if args.dump_config {
        writeln!(stdout, "{}", cfg.to_json())?;
        return Ok(());
    }
    let sys = cfg.system()?;
    let target = cfg.target()?;
    let family = cfg.phase_list()?;
    let area = cfg.area * PI;
    let actual = composite_hr_with(
        &sys,
        &family,
        target.hr_phase,
        area,
        cfg.detuning,
        cfg.substeps,
    )?;
    let target_m = householder_matrix(&target)?;
    let report = HrReport {
        area,
        detuning: cfg.detuning,
        infidelity: infidelity(&actual, &target_m)?,
        bright_vector: target.v.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        actual: matrix_rows(&actual),
        target: matrix_rows(&target_m),
        config: cfg,
    };
    let text = serde_json::to_string_pretty(&report)?;
    emit(args.out.as_deref(), stdout, |w| {
        writeln!(w, "{text}")?;
        Ok(())
    })
}

fn parse_shape(name: &str) -> Result<PulseShape> {
    match name.to_ascii_lowercase().as_str() {
        "rectangular" | "rect" => Ok(PulseShape::Rectangular),
        "gaussian" => Ok(PulseShape::gaussian()),
        other => Err(Error::validation(format!("unknown pulse shape '{other}'"))),
    }
}

fn scan_settings(full: &FullArgs) -> Result<ScanSettings> {
    let shape = parse_shape(&full.shape)?;
    if full.substeps == 0 {
        return Err(Error::validation("substeps must be >= 1"));
    }
    let (system, method) = if full.full {
        if full.dim == 0 {
            return Err(Error::validation("--N must be >= 1"));
        }
        let v = random_unit_vector(full.dim, &mut ChaCha8Rng::seed_from_u64(full.seed));
        (
            NPodSystem::from_bright_vector(&v, shape, 0.0)?,
            ScanMethod::Full,
        )
    } else {
        (
            NPodSystem::new(vec![1.0], vec![0.0], shape, 0.0)?,
            ScanMethod::Shortcut,
        )
    };
    Ok(ScanSettings {
        system,
        method,
        substeps: full.substeps,
    })
}

pub fn cmd_scan_area(args: &ScanAreaArgs, stdout: &mut dyn Write) -> Result<()> {
    let family: Family = args.family.parse()?;
    let families = args
        .n
        .iter()
        .map(|&n| PhaseList::new(family, n, args.variant))
        .collect::<Result<Vec<_>>>()?;
    let grid = ScanGrid::area(args.min, args.max, args.points)?;
    let settings = scan_settings(&args.full)?;
    let result = scan_area(&families, parse_angle(&args.phi)?, &grid, &settings)?;
    emit(args.out.as_deref(), stdout, |w| result.write_csv(w))
}

pub fn cmd_scan_2d(args: &Scan2dArgs, stdout: &mut dyn Write) -> Result<()> {
    let family = PhaseList::new(args.family.parse()?, args.n, args.variant)?;
    let grid = ScanGrid::area_detuning(
        (args.area_min, args.area_max, args.area_points),
        (args.detuning_min, args.detuning_max, args.detuning_points),
    )?;
    let settings = scan_settings(&args.full)?;
    let result = scan_2d(&family, parse_angle(&args.phi)?, &grid, &settings)?;
    emit(args.out.as_deref(), stdout, |w| result.write_csv(w))
}

/// Writes to `path` when given, otherwise to `stdout`.
fn emit(
    path: Option<&Path>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}
