//! Library side of the `padic-tnf` command: argument model, dispatch and
//! result documents.

pub mod bench;
mod render;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use padic_tnf::eigen::{block_schur_form, eigvecs, EigenPair, SchurBlock};
use padic_tnf::matrix::{parse_matrix_file_at, MatrixFile};
use padic_tnf::solver::{parse_system_file_at, solve_system, SolutionSet};
use padic_tnf::{Error, Padic, PadicMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Solve,
    Eig,
    Schur,
    Qr,
    Svd,
    Bench,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Json,
}

/// Solve polynomial systems and run p-adic matrix routines.
#[derive(Clone, Debug, Parser)]
#[command(name = "padic-tnf", version, about)]
pub struct RunConfig {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Input file: a polynomial system for `solve`, a matrix otherwise.
    #[arg(long, required_if_eq_any([("mode", "solve"), ("mode", "eig"), ("mode", "schur"), ("mode", "qr"), ("mode", "svd")]))]
    pub input: Option<PathBuf>,
    /// Expected prime; must agree with the input header. Used as the
    /// prime for `bench`.
    #[arg(long)]
    pub prime: Option<u64>,
    /// Working precision; overrides the input header.
    #[arg(long)]
    pub prec: Option<i64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Treat precision warnings as failures (exit status 4).
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Matrix sizes for `bench`.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6")]
    pub sizes: Vec<usize>,
    /// Random instances per size for `bench`.
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Failure = 1,
    Usage = 2,
    NoSolutions = 3,
    IllConditioned = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            status: Status::Usage,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } | Error::NotPrime(_) | Error::Dimension(_) | Error::Unsupported(_) => Status::Usage,
            Error::NoSolutions(_) => Status::NoSolutions,
            _ => Status::Failure,
        };
        CliError {
            status,
            message: e.to_string(),
        }
    }
}

/// Eigenpairs of a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigReport {
    pub prime: u64,
    pub precision: i64,
    pub pairs: Vec<EigenPair>,
    /// Eigenvalues (with multiplicity) that are not in Q_p or could not be
    /// separated.
    pub unresolved_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurReport {
    pub prime: u64,
    pub precision: i64,
    pub t: PadicMatrix,
    pub v: PadicMatrix,
    pub blocks: Vec<SchurBlock>,
    pub residual_valuation: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QrReport {
    pub prime: u64,
    pub precision: i64,
    pub q: PadicMatrix,
    pub r: PadicMatrix,
    pub row_permutation: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SvdReport {
    pub prime: u64,
    pub precision: i64,
    pub u: PadicMatrix,
    pub sigma: Vec<Padic>,
    pub v: PadicMatrix,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub variables: Vec<String>,
    pub solution: SolutionSet,
}

/// Machine-readable result of one run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Document {
    Solve(SolveReport),
    Eig(EigReport),
    Schur(SchurReport),
    Qr(QrReport),
    Svd(SvdReport),
}

impl Document {
    /// Whether the result carries a precision warning that `--strict`
    /// escalates.
    pub fn has_warnings(&self) -> bool {
        match self {
            Document::Solve(r) => r.solution.has_warnings(),
            Document::Eig(r) => r.pairs.iter().any(|p| p.residual_valuation < r.precision),
            Document::Schur(r) => r.residual_valuation < r.precision,
            Document::Qr(_) | Document::Svd(_) => false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_human(&self) -> String {
        render::human(self)
    }
}

/// The text a run prints and the status it exits with.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub status: Status,
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    if let Some(p) = config.prime {
        padic_tnf::padic::check_prime(p)?;
    }
    if let Some(n) = config.prec.filter(|&n| n < 1) {
        return Err(CliError::usage(format!("--prec must be at least 1, got {n}")));
    }
    if config.mode == Mode::Bench {
        let opts = bench::BenchOptions {
            prime: config.prime.unwrap_or(7),
            precision: config.prec.unwrap_or(12),
            sizes: config.sizes.clone(),
            samples: config.samples,
            seed: config.seed,
        };
        let rows = bench::run(&opts)?;
        let text = bench::to_csv(&rows).map_err(|e| CliError {
            status: Status::Failure,
            message: e.to_string(),
        })?;
        return Ok(Outcome {
            text,
            status: Status::Ok,
        });
    }
    let doc = compute(config)?;
    let text = match config.format {
        Format::Json => doc.to_json() + "\n",
        Format::Human => doc.to_human(),
    };
    let status = match &doc {
        Document::Solve(r) if r.solution.points.is_empty() => Status::NoSolutions,
        _ if config.strict && doc.has_warnings() => Status::IllConditioned,
        _ => Status::Ok,
    };
    Ok(Outcome { text, status })
}

fn read_input(config: &RunConfig) -> Result<String, CliError> {
    let path = config
        .input
        .as_ref()
        .ok_or_else(|| CliError::usage("--input is required for this mode"))?;
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn check_prime_flag(config: &RunConfig, file_prime: u64) -> Result<(), CliError> {
    match config.prime {
        Some(p) if p != file_prime => Err(CliError::usage(format!(
            "--prime {p} disagrees with the input file (p = {file_prime})"
        ))),
        _ => Ok(()),
    }
}

/// Runs the selected mode and returns its document.
pub fn compute(config: &RunConfig) -> Result<Document, CliError> {
    let text = read_input(config)?;
    if config.mode == Mode::Solve {
        let sys = parse_system_file_at(&text, config.prec)?;
        check_prime_flag(config, sys.prime)?;
        let solution = solve_system(&sys.polynomials, config.seed)?;
        return Ok(Document::Solve(SolveReport {
            variables: sys.variables,
            solution,
        }));
    }
    let MatrixFile {
        prime,
        precision,
        matrix,
    } = parse_matrix_file_at(&text, config.prec)?;
    check_prime_flag(config, prime)?;
    let square = || -> Result<(), CliError> {
        if matrix.is_square() {
            Ok(())
        } else {
            Err(CliError::usage(format!(
                "this mode needs a square matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )))
        }
    };
    Ok(match config.mode {
        Mode::Eig => {
            square()?;
            let d = eigvecs(&matrix, precision)?;
            Document::Eig(EigReport {
                prime,
                precision,
                pairs: d.pairs,
                unresolved_dimension: d.unresolved_dimension,
            })
        }
        Mode::Schur => {
            square()?;
            let s = block_schur_form(&matrix, precision)?;
            Document::Schur(SchurReport {
                prime,
                precision,
                t: s.t,
                v: s.v,
                blocks: s.blocks,
                residual_valuation: s.residual_valuation,
            })
        }
        Mode::Qr => {
            let qr = matrix.qr()?;
            Document::Qr(QrReport {
                prime,
                precision,
                q: qr.q,
                r: qr.r,
                row_permutation: qr.row_permutation,
            })
        }
        Mode::Svd => {
            let s = matrix.svd()?;
            Document::Svd(SvdReport {
                prime,
                precision,
                u: s.u,
                sigma: s.sigma,
                v: s.v,
                rank: s.rank,
            })
        }
        Mode::Solve | Mode::Bench => unreachable!("handled above"),
    })
}
