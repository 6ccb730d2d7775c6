//! `pwcalc`: functional calculus and Lebesgue decomposition for PSD matrix
//! pairs, one JSON report per invocation.

mod commands;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pwcalc::{PwError, ToleranceConfig};

use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Lib(#[from] PwError),
    #[error("internal failure: {0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
            CliError::Lib(e) => match e {
                PwError::Input(_)
                | PwError::DimensionMismatch { .. }
                | PwError::NotHermitian { .. }
                | PwError::Precondition(_)
                | PwError::NotDominated { .. } => 2,
                PwError::Numeric(_) | PwError::NotPsd { .. } => 3,
                PwError::ExtendedValue { .. } => 4,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(PwError::ExtendedValue { function }) => {
                format!("extended value; use pair/trace ({function} is +inf on the spectrum of the pair)")
            }
            other => other.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pwcalc", version, about = "Functional calculus for pairs of PSD matrices")]
struct Cli {
    #[command(subcommand)]
    op: Op,
}

#[derive(Debug, Subcommand)]
enum Op {
    /// Representation data: R, S and the spectrum of R.
    Rep(Common),
    /// f(A, B) for a named function (--phi).
    Eval(Common),
    /// B = Bc + Bs relative to A, with the projection P.
    Lebesgue(Common),
    /// Parallel sum A:B.
    Psum(Common),
    /// (2^k A):B for k = 0, 1, ... until convergence.
    PsumLimit(Common),
    /// Whether A and B are mutually singular.
    Singular(Common),
    /// Whether B is absolutely continuous with respect to A.
    Abscont(Common),
    /// Radon-Nikodym factor H and Z with Z*Z = Bc; A must be invertible.
    Rn(Common),
    /// f(A, B) = A^{1/2} h_f(XX*) A^{1/2} for f with f(0) = 0.
    Kubo(Common),
    /// Pairing f(A, B)(rho), possibly +inf.
    Pair(Common),
    /// Tr f(A, B), possibly +inf.
    Trace(Common),
    /// Product rule for power:ALPHA or entropy pairings on A (x) A2, B (x) B2.
    TensorCheck(Common),
    /// The quadratic form xi -> xi* h(XX*) xi; A must be invertible.
    FormP(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, value_name = "FILE")]
    a: PathBuf,
    #[arg(long, value_name = "FILE")]
    b: PathBuf,
    #[arg(long, value_name = "FILE")]
    rho: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    xi: Option<PathBuf>,
    /// Function name with optional parameter, e.g. geom:0.5, power:2, entropy.
    #[arg(long, value_name = "NAME[:PARAM]")]
    phi: Option<String>,
    /// Parameter for geom/power when --phi carries none.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    tol_zero: Option<f64>,
    #[arg(long)]
    tol_one: Option<f64>,
    #[arg(long, value_name = "K")]
    max_doublings: Option<u32>,
    /// Also write the report to this file.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Second factor of the first argument (tensor-check).
    #[arg(long, value_name = "FILE")]
    a2: Option<PathBuf>,
    /// Second factor of the second argument (tensor-check).
    #[arg(long, value_name = "FILE")]
    b2: Option<PathBuf>,
    /// Second factor of the functional (tensor-check).
    #[arg(long, value_name = "FILE")]
    rho2: Option<PathBuf>,
}

impl Op {
    fn split(self) -> (&'static str, Common) {
        match self {
            Op::Rep(c) => ("rep", c),
            Op::Eval(c) => ("eval", c),
            Op::Lebesgue(c) => ("lebesgue", c),
            Op::Psum(c) => ("psum", c),
            Op::PsumLimit(c) => ("psum-limit", c),
            Op::Singular(c) => ("singular", c),
            Op::Abscont(c) => ("abscont", c),
            Op::Rn(c) => ("rn", c),
            Op::Kubo(c) => ("kubo", c),
            Op::Pair(c) => ("pair", c),
            Op::Trace(c) => ("trace", c),
            Op::TensorCheck(c) => ("tensor-check", c),
            Op::FormP(c) => ("form-p", c),
        }
    }
}

const TOL_ZERO_ENV: &str = "PWCALC_TOL_ZERO";

fn tolerances(args: &Common) -> Result<ToleranceConfig, CliError> {
    let mut tol = ToleranceConfig::default();
    if let Ok(v) = std::env::var(TOL_ZERO_ENV) {
        tol.zero_tol = v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{TOL_ZERO_ENV} is not a number: {v:?}")))?;
    }
    if let Some(z) = args.tol_zero {
        tol.zero_tol = z;
    }
    if let Some(o) = args.tol_one {
        tol.one_tol = o;
    }
    if let Some(k) = args.max_doublings {
        tol.max_doublings = k;
    }
    tol.validate()?;
    Ok(tol)
}

fn emit(report: &Report, out: Option<&PathBuf>) -> Result<(), String> {
    let text = report.render();
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let op = argv.get(1).filter(|s| !s.starts_with('-')).cloned().unwrap_or_default();
            let mut report = Report::new(&op);
            let first = e.render().to_string().lines().next().unwrap_or("").to_string();
            report.error = Some(first.trim_start_matches("error: ").to_string());
            eprint!("{}", e.render());
            let _ = emit(&report, None);
            return ExitCode::from(2);
        }
    };
    let (name, args) = cli.op.split();
    let mut report = Report::new(name);
    let result = tolerances(&args).and_then(|tol| {
        report.config = report::config(&tol);
        let run = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| commands::run(name, &args, &tol, &mut report)));
        run.unwrap_or_else(|_| Err(CliError::Internal("panic during evaluation".into())))
    });
    let code = match result {
        Ok(()) => 0,
        Err(e) => {
            report.error = Some(e.message());
            eprintln!("pwcalc {name}: {}", e.message());
            e.exit_code()
        }
    };
    if let Err(msg) = emit(&report, args.out.as_ref()) {
        eprintln!("pwcalc {name}: {msg}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
