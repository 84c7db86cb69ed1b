use std::path::{Path, PathBuf};

use mmpfloer::mmp::Geometry;
use mmpfloer::polytope::PolytopeSpec;
use mmpfloer::{parse_q, Error, Polytope, Q};
use serde::Deserialize;
use serde_json::Value;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CoeffMode {
    Exact,
    Complex,
}

/// Everything a subcommand needs, after merging the file with the flags.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub geometry: Value,
    pub truncation: Q,
    pub zero_tol: f64,
    pub output: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub coefficient_mode: CoeffMode,
}

/// Optional keys of a config file; flags win over these.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    geometry: Value,
    truncation: Option<Value>,
    zero_tol: Option<f64>,
    output: Option<PathBuf>,
    svg: Option<PathBuf>,
    coefficient_mode: Option<CoeffMode>,
}

#[derive(Clone, Debug, Default, clap::Args)]
pub struct Flags {
    /// Truncation order E as p/q
    #[arg(long)]
    pub truncation: Option<String>,
    /// Coefficients below this count as zero
    #[arg(long)]
    pub zero_tol: Option<f64>,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also render an SVG timeline (2-d toric only)
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub coeff: Option<CoeffMode>,
}

pub const DEFAULT_TRUNCATION: i64 = 10;
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

fn spec_error(msg: impl std::fmt::Display) -> Failure {
    Failure::Spec(msg.to_string())
}

/// Reads JSON, or TOML when the extension says so.
pub fn read_value(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| spec_error(format!("{}: {e}", path.display())))?;
    let is_toml = path.extension().is_some_and(|x| x == "toml");
    if is_toml {
        let v: toml::Value = toml::from_str(&text).map_err(|e| spec_error(format!("{}: {e}", path.display())))?;
        serde_json::to_value(v).map_err(spec_error)
    } else {
        serde_json::from_str(&text).map_err(|e| spec_error(format!("{}: {e}", path.display())))
    }
}

fn q_from_value(v: &Value) -> Result<Q, Failure> {
    match v {
        Value::Number(n) => n.as_i64().map(Q::from_integer).ok_or_else(|| spec_error(format!("truncation {n} is not p/q"))),
        Value::String(s) => parse_q(s).map_err(spec_error),
        other => Err(spec_error(format!("truncation {other} is not p/q"))),
    }
}

impl RunConfig {
    /// A file is either a bare geometry or a table with a `geometry` key.
    pub fn load(path: &Path, flags: &Flags) -> Result<Self, Failure> {
        let raw = read_value(path)?;
        let file = if raw.get("geometry").is_some() {
            serde_json::from_value::<FileConfig>(raw).map_err(spec_error)?
        } else {
            FileConfig { geometry: raw, ..FileConfig::default() }
        };
        let truncation = match (&flags.truncation, &file.truncation) {
            (Some(s), _) => parse_q(s).map_err(spec_error)?,
            (None, Some(v)) => q_from_value(v)?,
            (None, None) => Q::from_integer(DEFAULT_TRUNCATION),
        };
        if truncation <= Q::from_integer(0) {
            return Err(spec_error("truncation must be positive"));
        }
        let zero_tol = flags.zero_tol.or(file.zero_tol).unwrap_or(DEFAULT_ZERO_TOL);
        if !(zero_tol > 0.0 && zero_tol < 1e-3) {
            return Err(spec_error("zero tolerance must lie in (0, 1e-3)"));
        }
        Ok(RunConfig {
            geometry: file.geometry,
            truncation,
            zero_tol,
            output: flags.out.clone().or(file.output),
            svg: flags.svg.clone().or(file.svg),
            coefficient_mode: flags.coeff.or(file.coefficient_mode).unwrap_or(CoeffMode::Complex),
        })
    }

    /// Parses the geometry, keeping polytope errors apart from malformed input.
    pub fn geometry(&self) -> Result<Geometry, Failure> {
        if self.geometry.get("kind").and_then(Value::as_str) == Some("toric") {
            let mut spec = self.geometry.clone();
            if let Some(obj) = spec.as_object_mut() {
                obj.remove("kind");
            }
            let spec: PolytopeSpec = serde_json::from_value(spec).map_err(spec_error)?;
            return Polytope::try_from(spec).map(Geometry::Toric).map_err(Failure::from);
        }
        serde_json::from_value(self.geometry.clone()).map_err(spec_error)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unbounded | Error::EmptyPolytope | Error::Infeasible(_) => Failure::Infeasible(e.to_string()),
            Error::Parse(_) | Error::InvalidGeometry(_) | Error::InvalidPolytope(_) | Error::InvalidAlgebra(_) => {
                Failure::Spec(e.to_string())
            }
            other => Failure::Compute(other.to_string()),
        }
    }
}
