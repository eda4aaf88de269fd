//! Command-line front end: `basis`, `theta` and `verify <subtest>`.
//!
//! Every command prints one JSON document (also written to `--out` when
//! given). Exit codes: 0 pass, 1 verification failure, 2 input or
//! validation error, 3 truncation budget failure.

mod commands;
mod inputs;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::error::Error;

pub use inputs::{parse_c, parse_complex_matrix, parse_index, parse_lattice, parse_point, parse_rational_matrix};

#[derive(Debug, Parser)]
#[command(name = "jacobi-lift", version, about = "Pluriharmonic lifts of Jacobi forms and their numerical certification")]
pub struct Cli {
    /// Also write the JSON output to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pluriharmonic basis of degree d on m×n matrices for the form S.
    Basis(BasisArgs),
    /// Evaluate a lattice theta series at (Z, W).
    Theta(ThetaArgs),
    /// Run one of the verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long)]
    pub d: u32,
    /// `identity`, a rational multiple of the identity, inline JSON or a file.
    #[arg(long = "S", default_value = "identity")]
    pub s: String,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    /// `e8` or an even unimodular Gram matrix (inline JSON or file).
    #[arg(long, default_value = "e8")]
    pub lattice: String,
    /// Columns of c: `e1`, `e1,e2`, or an integral matrix.
    #[arg(long, default_value = "e1")]
    pub c: String,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long = "Z", default_value = "i")]
    pub z: String,
    #[arg(long = "W", default_value = "0")]
    pub w: String,
    /// Lattice norm bound; chosen from the tail budget when omitted.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Tail budget.
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Subtest {
    JacobiInvariance,
    MainTheorem,
    IdentityI,
    IdentityIi,
    Cocycle,
    Lemma43,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormChoice {
    /// Theta series of E8 with the columns given by `--c` (weight 4).
    ThetaE8,
    /// Degree-one Jacobi Eisenstein series of weight k and the given index.
    Eisenstein,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub subtest: Subtest,
    #[arg(long, value_enum, default_value_t = FormChoice::ThetaE8)]
    pub form: FormChoice,
    /// Columns of c for the E8 theta series: `e1`, `e1,e2`, or an integral matrix.
    #[arg(long, default_value = "e1")]
    pub c: String,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long)]
    pub m: Option<usize>,
    /// Weight; defaults to the weight of the form (8 for Eisenstein).
    #[arg(long)]
    pub k: Option<i32>,
    /// Polynomial degree.
    #[arg(long, default_value_t = 0)]
    pub d: u32,
    /// Index of the Eisenstein series or of the canonical factor.
    #[arg(long, default_value = "1")]
    pub index: String,
    /// Evaluation points; repeatable. A default set is used when omitted.
    #[arg(long = "Z")]
    pub z: Vec<String>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 30.0)]
    pub cmax: f64,
    #[arg(long, default_value_t = 60)]
    pub lmax: i64,
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random trials (cocycle, lemma43) or random words (main-theorem).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Negative control: use weight k − 1 instead of k.
    #[arg(long)]
    pub weight_off_by_one: bool,
}

/// Process exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::TailBudget { .. } | Error::TruncationAsymmetry(_) => 3,
        _ => 2,
    }
}

/// Run a parsed command; returns the exit code and the JSON document.
pub fn run(cli: &Cli) -> (i32, Value) {
    let result = match &cli.command {
        Command::Basis(a) => commands::basis(a),
        Command::Theta(a) => commands::theta(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(out) => out,
        Err(e) => (exit_code(&e), serde_json::json!({"error": e.to_string()})),
    }
}

/// Parse `std::env::args`, run, print and write the output; returns the exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (code, out) = run(&cli);
    let text = serde_json::to_string_pretty(&out).expect("JSON values serialize");
    // A closed pipe (for example `| head`) is not an error worth a panic.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("cannot write {}: {e}", path.display());
            return 2;
        }
    }
    if let Some(err) = out.get("error") {
        eprintln!("error: {}", err.as_str().unwrap_or_default());
    }
    code
}
