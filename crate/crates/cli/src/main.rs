//! `mfs`: evaluate operations on multilinear function series and run the
//! identity suites.
//!
//! Exit status is 0 on success, 1 when an identity fails and 2 on a
//! configuration, I/O or precondition error.

mod fixtures;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mfs_core::json::{scalar_array, series_from_value, series_to_string, series_to_value};
use mfs_core::ops::{Conversion, Op};
use mfs_core::suites::{run_suite, Suite, SuiteConfig};
use mfs_core::{BaseAlgebra, MultSeries, SeriesClass};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Engine(#[from] mfs_core::Error),
}

#[derive(Parser)]
#[command(
    name = "mfs",
    version,
    about = "Exact arithmetic and identity checks for multilinear function series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run identity suites and print one JSON line per identity.
    Check(CheckArgs),
    /// Apply one operation to series files.
    Eval(EvalArgs),
    /// Convert between moments, cumulants and the S-transform.
    Convert(ConvertArgs),
    /// Write a random series.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraArg {
    Scalar,
    Mat2,
    Mat3,
}

impl AlgebraArg {
    fn build(self) -> Arc<BaseAlgebra> {
        Arc::new(match self {
            AlgebraArg::Scalar => BaseAlgebra::scalar(),
            AlgebraArg::Mat2 => BaseAlgebra::matrix(2).expect("2 is a valid dimension"),
            AlgebraArg::Mat3 => BaseAlgebra::matrix(3).expect("3 is a valid dimension"),
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Ginv,
    Gdif,
    Gil,
    Gir,
    Lie,
}

impl From<ClassArg> for SeriesClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Ginv => SeriesClass::Ginv,
            ClassArg::Gdif => SeriesClass::Gdif,
            ClassArg::Gil => SeriesClass::GIl,
            ClassArg::Gir => SeriesClass::GIr,
            ClassArg::Lie => SeriesClass::GInvLie,
        }
    }
}

#[derive(Args)]
struct Scale {
    /// Truncation degree.
    #[arg(long, env = "MFS_DEFAULT_DEGREE", default_value_t = 4)]
    degree: usize,
    #[arg(long, value_enum, default_value = "mat2")]
    algebra: AlgebraArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random coefficients are p/q with |p|, q at most this bound.
    #[arg(long, default_value_t = 10)]
    coeff_bound: u32,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    scale: Scale,
    /// A suite name, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Directory of fixture files; the built-in fixtures are used otherwise.
    #[arg(long)]
    fixtures: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Operation tag, such as mul, compose, boxcon, rhd_l or S_l.
    #[arg(long)]
    op: String,
    #[arg(long)]
    lhs: PathBuf,
    #[arg(long)]
    rhs: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    /// moments-to-cumulants, cumulants-to-moments or s-transform
    direction: String,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    scale: Scale,
    #[arg(long, value_enum, default_value = "ginv")]
    class: ClassArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn read_series(path: &Path) -> Result<(MultSeries, bool), CliError> {
    let v = read_json(path)?;
    let s = series_from_value(&v).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok((s, v.is_array()))
}

fn write_out(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => writeln!(std::io::stdout(), "{text}").map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Scalar inputs given as bare arrays are answered in the same form.
fn render(s: &MultSeries, as_array: bool) -> String {
    if as_array && s.algebra().is_commutative() && s.dim() == 1 {
        serde_json::to_string(&scalar_array(s)).expect("rationals serialize")
    } else {
        series_to_string(s)
    }
}

fn check(args: &CheckArgs) -> Result<bool, CliError> {
    let suites = Suite::parse_selection(&args.suite).map_err(|e| CliError::Config(e.to_string()))?;
    let mut cfg = SuiteConfig::new(
        args.scale.algebra.build(),
        args.scale.degree,
        args.trials,
        args.scale.seed,
    );
    cfg.coeff_bound = args.scale.coeff_bound;
    cfg.fixtures = match &args.fixtures {
        Some(dir) => fixtures::from_dir(dir)?,
        None => fixtures::embedded()?,
    };
    let mut lines = Vec::new();
    let mut ok = true;
    for suite in suites {
        let report = run_suite(suite, &cfg).map_err(|e| CliError::Config(e.to_string()))?;
        ok &= report.passed();
        eprintln!(
            "{suite}: {} ({} identities, {} ms)",
            if report.passed() { "pass" } else { "FAIL" },
            report.identities.len(),
            report.elapsed_ms
        );
        lines.extend(report.json_lines());
    }
    write_out(args.output.as_deref(), &lines.join("\n"))?;
    Ok(ok)
}

fn eval(args: &EvalArgs) -> Result<(), CliError> {
    let op: Op = args
        .op
        .parse()
        .map_err(|e: mfs_core::Error| CliError::Config(e.to_string()))?;
    let (lhs, as_array) = read_series(&args.lhs)?;
    let rhs = match (&args.rhs, op.arity()) {
        (Some(p), 2) => Some(read_series(p)?.0),
        (None, 2) => return Err(CliError::Config(format!("operation {op} needs --rhs"))),
        (Some(_), _) => return Err(CliError::Config(format!("operation {op} takes no --rhs"))),
        (None, _) => None,
    };
    let out = op.apply(&lhs, rhs.as_ref())?;
    write_out(args.output.as_deref(), &render(&out, as_array))
}

fn convert(args: &ConvertArgs) -> Result<(), CliError> {
    let c: Conversion = args
        .direction
        .parse()
        .map_err(|e: mfs_core::Error| CliError::Config(e.to_string()))?;
    let (input, as_array) = read_series(&args.input)?;
    write_out(args.output.as_deref(), &render(&c.apply(&input)?, as_array))
}

fn gen(args: &GenArgs) -> Result<(), CliError> {
    let s = &args.scale;
    let series = MultSeries::random(args.class.into(), &s.algebra.build(), s.degree, s.seed, s.coeff_bound);
    let text = serde_json::to_string_pretty(&series_to_value(&series)).expect("series documents serialize");
    write_out(args.output.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(a) => check(a),
        Command::Eval(a) => eval(a).map(|()| true),
        Command::Convert(a) => convert(a).map(|()| true),
        Command::Gen(a) => gen(a).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
