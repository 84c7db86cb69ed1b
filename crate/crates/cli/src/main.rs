mod certify;
mod config;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mmpfloer::ainfty::{verify_ainfty, verify_strict_unit, AInftyReport, CurvedAInftyAlgebra};
use mmpfloer::mmp::{run_mmp, Geometry};
use mmpfloer::{BigRational, Coefficient, Complex64};
use serde::Serialize;

use config::{CoeffMode, Flags, RunConfig};

/// Why a command stopped; each maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    /// Malformed or unusable input.
    Spec(String),
    /// Well-formed geometry with no moment polytope.
    Infeasible(String),
    /// A solver gave up.
    Compute(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Compute(_) => 1,
            Failure::Spec(_) => 2,
            Failure::Infeasible(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Spec(m) => write!(f, "spec error: {m}"),
            Failure::Infeasible(m) => write!(f, "infeasible: {m}"),
            Failure::Compute(m) => write!(f, "computation failed: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "mmpfloer", version, about = "MMP runnings and Floer non-triviality certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the MMP on a geometry spec and print the running as JSON
    Run {
        spec: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Certify the regular torus at a toric flip or contraction
    Certify {
        spec: PathBuf,
        /// 0-based index into the running's transitions
        #[arg(long)]
        transition: usize,
        #[command(flatten)]
        flags: Flags,
    },
    /// Render the running of a 2-d toric spec as an SVG strip
    Svg {
        spec: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Check the A∞ relations and strict unit of an algebra spec
    AinftyVerify {
        spec: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Spec(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(x: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(x).map(|s| s + "\n").map_err(|e| Failure::Compute(e.to_string()))
}

fn svg_for(geometry: &Geometry, path: &Path) -> Result<(), Failure> {
    let p = geometry.polytope()?;
    let running = run_mmp(geometry)?;
    let text = svg::render(&p, &running)?;
    write_out(Some(path), &text)
}

#[derive(Serialize)]
struct VerifyReport {
    coefficients: &'static str,
    holds: bool,
    strict_unit: Option<bool>,
    relations: AInftyReport,
}

fn verify<C: Coefficient>(value: serde_json::Value, zero_tol: f64) -> Result<VerifyReport, Failure> {
    let a: CurvedAInftyAlgebra<C> = serde_json::from_value(value).map_err(|e| Failure::Spec(e.to_string()))?;
    let relations = verify_ainfty(&a);
    let strict_unit = match a.unit() {
        Some(_) => Some(verify_strict_unit(&a)?),
        None => None,
    };
    Ok(VerifyReport {
        coefficients: C::mode_name(),
        holds: relations.max_residual <= zero_tol && strict_unit != Some(false),
        strict_unit,
        relations,
    })
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Run { spec, flags } => {
            let cfg = RunConfig::load(&spec, &flags)?;
            let geometry = cfg.geometry()?;
            let running = run_mmp(&geometry)?;
            write_out(cfg.output.as_deref(), &to_json(&running)?)?;
            if let Some(path) = &cfg.svg {
                svg_for(&geometry, path)?;
            }
            Ok(())
        }
        Command::Certify { spec, transition, flags } => {
            let cfg = RunConfig::load(&spec, &flags)?;
            let report = certify::certify(&cfg, transition)?;
            write_out(cfg.output.as_deref(), &to_json(&report)?)
        }
        Command::Svg { spec, flags } => {
            let cfg = RunConfig::load(&spec, &flags)?;
            let geometry = cfg.geometry()?;
            let path = cfg
                .svg
                .clone()
                .or(cfg.output.clone())
                .ok_or_else(|| Failure::Spec("svg needs --svg or --out".into()))?;
            svg_for(&geometry, &path)
        }
        Command::AinftyVerify { spec, flags } => {
            let cfg = RunConfig::load(&spec, &flags)?;
            let report = match cfg.coefficient_mode {
                CoeffMode::Exact => verify::<BigRational>(cfg.geometry, cfg.zero_tol)?,
                CoeffMode::Complex => verify::<Complex64>(cfg.geometry, cfg.zero_tol)?,
            };
            write_out(cfg.output.as_deref(), &to_json(&report)?)
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("MMPFLOER_THREADS") else { return Ok(()) };
    let n: usize = raw.trim().parse().map_err(|_| Failure::Spec(format!("MMPFLOER_THREADS={raw:?} is not a count")))?;
    if n == 0 {
        return Err(Failure::Spec("MMPFLOER_THREADS must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Compute(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| dispatch(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mmpfloer: {f}");
            ExitCode::from(f.code())
        }
    }
}
