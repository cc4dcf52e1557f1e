//! Command-line front end: singularity analysis, symmetry checks, variable
//! transforms, reduction verification and numeric cross-validation of ODE
//! spec files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use painleve_forge_cli::commands;

#[derive(Parser)]
#[command(
    name = "painleve-forge",
    about = "Exact singularity (ARS) analysis, Lie point-symmetry verification and \
             variable transforms for scalar polynomial ODEs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full singularity analysis and emit a JSON report.
    Analyze(AnalyzeArgs),
    /// Verify Lie point symmetries and optionally the structure-constant table.
    Symmetry(SymmetryArgs),
    /// Apply a variable transformation and write the transformed spec.
    Transform(TransformArgs),
    /// Verify that a reduced equation follows from an original under invariants.
    ReduceCheck(ReduceCheckArgs),
    /// Numeric cross-validation of a computed series (residuals, integration, scans).
    Numcheck(NumcheckArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// ODE spec file (*.ode).
    file: PathBuf,
    /// Series truncation order.
    #[arg(long = "terms", default_value_t = 8)]
    terms: usize,
    /// Free-constant overrides, `index=rational` (repeatable).
    #[arg(long = "constants", value_name = "IDX=RAT")]
    constants: Vec<String>,
    /// Write the JSON report here.
    #[arg(long = "json", value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SymmetryArgs {
    /// ODE spec file (*.ode).
    file: PathBuf,
    /// Vector field `xi=<expr>;eta=<expr>` in the base variables (repeatable).
    #[arg(long = "field", value_name = "XI;ETA", required = true)]
    fields: Vec<String>,
    /// Also print the structure-constant table of the supplied fields.
    #[arg(long = "table")]
    table: bool,
}

#[derive(Args)]
struct TransformArgs {
    /// ODE spec file (*.ode).
    file: PathBuf,
    /// Invert the dependent variable (u -> 1/v).
    #[arg(long = "invert-dep", conflicts_with = "hodograph_raise")]
    invert_dep: bool,
    /// Raise a second-order equation to autonomous third order.
    #[arg(long = "hodograph-raise")]
    hodograph_raise: bool,
    /// Output spec path (defaults to the input stem plus a suffix).
    #[arg(long = "out", value_name = "FILE")]
    out: Option<PathBuf>,
    /// Compare the transformed equation against this spec; prints a
    /// monomial-level diff in JSON and exits 4 on mismatch.
    #[arg(long = "diff-against", value_name = "FILE")]
    diff_against: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceCheckArgs {
    /// Original ODE spec file.
    file_orig: PathBuf,
    /// Reduced ODE spec file.
    file_reduced: PathBuf,
    /// Invariants `r=<expr>;w=<expr>` in the original's variables; the names
    /// must match the reduced file's indep/dep.
    #[arg(long = "invariants", value_name = "R;W", required = true)]
    invariants: String,
}

#[derive(Args)]
struct NumcheckArgs {
    /// ODE spec file (*.ode).
    file: PathBuf,
    /// Analysis report (JSON) holding a compatible series.
    #[arg(long = "series-from", value_name = "REPORT")]
    series_from: PathBuf,
    /// Integration path `a,b` (complex endpoints, e.g. `5,8` or `1+2i,3`).
    #[arg(long = "path", value_name = "A,B", allow_hyphen_values = true)]
    path: Option<String>,
    /// Residual evaluation points (comma-separated complex numbers).
    #[arg(long = "points", value_name = "LIST", allow_hyphen_values = true)]
    points: Option<String>,
    /// Blow-up scan with this many rays.
    #[arg(long = "barrier", value_name = "N", num_args = 0..=1, default_missing_value = "16")]
    barrier: Option<usize>,
    /// Residual / endpoint threshold.
    #[arg(long = "threshold", default_value_t = 1e-6)]
    threshold: f64,
    /// Scan horizon radius.
    #[arg(long = "horizon", default_value_t = 10.0)]
    horizon: f64,
    /// Output prefix for the CSV and JSON results.
    #[arg(long = "out", value_name = "PREFIX", default_value = "numcheck")]
    out: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not errors; everything else is a usage error
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => commands::analyze(&a.file, a.terms, &a.constants, a.json.as_deref()),
        Command::Symmetry(a) => commands::symmetry(&a.file, &a.fields, a.table),
        Command::Transform(a) => commands::transform(
            &a.file,
            a.invert_dep,
            a.hodograph_raise,
            a.out.as_deref(),
            a.diff_against.as_deref(),
        ),
        Command::ReduceCheck(a) => {
            commands::reduce_check(&a.file_orig, &a.file_reduced, &a.invariants)
        }
        Command::Numcheck(a) => commands::numcheck(&commands::NumcheckOptions {
            file: a.file,
            series_from: a.series_from,
            path: a.path,
            points: a.points,
            barrier: a.barrier,
            threshold: a.threshold,
            horizon: a.horizon,
            out: a.out,
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
