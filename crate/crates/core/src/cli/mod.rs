//! Command-line front end. Exit codes: 0 success, 1 verification failure or
//! disagreement, 2 usage error.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::conelib::{three_ellipse, ConeSpec, Strategy};
use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "derivcone", version, about = "Semidefinite representations of derivative relaxations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a representation; print its per-level size table and optionally write JSON/SDPA files.
    Represent(RepresentArgs),
    /// Decide membership of a point with the oracle and with the representation.
    Member(MemberArgs),
    /// Optimize a linear functional over a cone, or solve an SDPA file.
    Solve(SolveArgs),
    /// Boundary points of a 3-d cone sliced at one fixed coordinate.
    Boundary(BoundaryArgs),
    /// Run the randomized invariant suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Sdpa,
}

#[derive(Args, Debug, Clone)]
pub struct SpecArgs {
    /// Cone: a JSON file, inline JSON, or shorthand such as `orthant:4:1`,
    /// `psd:6:5`, `dual-psd:4:2`, `ellipse:2` (the bundled 3-ellipse pencil).
    #[arg(long)]
    pub spec: String,
    /// Overrides the strategy recorded in the spec.
    #[arg(long)]
    pub strategy: Option<String>,
}

#[derive(Args, Debug)]
pub struct RepresentArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Directory for representation.json, representation.dat-s and sizes.txt.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct MemberArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Comma-separated coordinates; matrices as packed upper triangle or all n^2 entries.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Boundary band for oracle margins.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long)]
    pub strategy: Option<String>,
    /// SDPA sparse file to solve instead of a cone program.
    #[arg(long, conflicts_with = "spec")]
    pub sdpa: Option<PathBuf>,
    /// Objective coefficients, comma-separated, in the cone's coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub objective: Option<String>,
    /// Equality `a_1,..,a_d=b`; repeatable.
    #[arg(long = "eq", allow_hyphen_values = true)]
    pub equalities: Vec<String>,
    #[arg(long)]
    pub maximize: bool,
    /// Solver tolerance on residuals and gap.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    /// Coordinate held fixed (default: the last).
    #[arg(long)]
    pub slice_coord: Option<usize>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub slice_value: f64,
    /// Draw directions at random from this seed instead of evenly spaced angles.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// One of the suite names, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    #[arg(long, default_value_t = 500)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

/// Parse a cone description: file path, inline JSON, or shorthand.
pub fn parse_spec(text: &str, strategy: Option<&str>) -> Result<ConeSpec> {
    let t = text.trim();
    let spec = if t.starts_with('{') {
        ConeSpec::from_json(t)?
    } else if let Some(s) = shorthand(t)? {
        s
    } else {
        ConeSpec::from_json(&std::fs::read_to_string(t)?)?
    };
    Ok(match strategy {
        Some(s) => spec.with_strategy(s.parse::<Strategy>()?),
        None => spec,
    })
}

fn shorthand(t: &str) -> Result<Option<ConeSpec>> {
    let parts: Vec<&str> = t.split(':').collect();
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Argument(format!("'{s}' is not a nonnegative integer")));
    let (dual, kind) = match parts[0].strip_prefix("dual-") {
        Some(k) => (true, k),
        None => (false, parts[0]),
    };
    let spec = match (kind, parts.len()) {
        ("orthant", 3) => ConeSpec::orthant(num(parts[1])?, num(parts[2])?, Strategy::Auto),
        ("psd", 3) => ConeSpec::psd(num(parts[1])?, num(parts[2])?, Strategy::Auto),
        ("ellipse", 2) => ConeSpec::spectrahedral(three_ellipse(), num(parts[1])?, Strategy::Auto),
        ("orthant" | "psd", _) | ("ellipse", _) => {
            return Err(Error::Argument(format!("malformed shorthand '{t}'")));
        }
        _ => return Ok(None),
    };
    spec.validate()?;
    Ok(Some(if dual { ConeSpec::dual(spec) } else { spec }))
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| Error::Argument(format!("'{s}' is not a number"))))
        .collect()
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match commands::dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Argument(_) | Error::Strategy(_) | Error::Parse { .. } | Error::Json(_) | Error::Io(_) => EXIT_USAGE,
                Error::NotPositiveDefinite { .. } | Error::UnsupportedForm(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}
