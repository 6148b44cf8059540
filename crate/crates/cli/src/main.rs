//! `sigcert`: signatures and residual certificates from the command line.
//!
//! Exit codes: 0 PASS, 1 FAIL, 2 INCONCLUSIVE, 64 usage or configuration
//! error, 65 malformed input, 66 unreadable file.

mod problem;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sigcert::certify::{
    cauchy_check, hamiltonian_check, holonomy_check, legendrian_check, linear_vf_check,
    sphere_invariant_check, variety_check, Reducedness,
};
use sigcert::path::{backtrack_reduce, project};
use sigcert::{CheckConfig, Error, PathModel, ResidualReport, SignatureMethod, Verdict};

use crate::problem::ProblemFile;

#[derive(Debug, Parser)]
#[command(
    name = "sigcert",
    version,
    about = "Truncated path signatures and residual certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the truncated signature of a path (.csv sampled, .json piecewise linear).
    Signature {
        path: PathBuf,
        #[arg(long = "trunc", short = 'K', default_value_t = 4)]
        trunc: usize,
        #[arg(long, value_enum, default_value_t = Method::Chordal)]
        method: Method,
        /// Output file; `.bin` selects the binary format. Defaults to stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check a path against a condition and print a residual report.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        path: PathBuf,
        /// JSON problem file (polynomials, r, l, matrixA, vectorV, init, anchored).
        #[arg(long, short)]
        problem: Option<PathBuf>,
        #[command(flatten)]
        opts: CheckOpts,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Write selected coordinates of a path as CSV.
    EmitPlot {
        path: PathBuf,
        /// 1-based coordinate indices, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, clap::Args)]
struct CheckOpts {
    #[arg(long = "trunc", short = 'K', default_value_t = 5)]
    trunc: usize,
    #[arg(long = "word-len", short = 'L', default_value_t = 2)]
    word_len: usize,
    #[arg(long)]
    tol_pass: Option<f64>,
    #[arg(long)]
    tol_fail: Option<f64>,
    /// Signature approximation for sampled paths.
    #[arg(long, value_enum, default_value_t = Method::Richardson)]
    method: Method,
    /// Compare the Hamiltonian initial y block with A·x0 instead of A·p0.
    #[arg(long)]
    strict_paper: bool,
    /// Remove collinear backtracking from a piecewise-linear path first.
    #[arg(long)]
    reduce: bool,
    /// Record that the path is known to be reduced.
    #[arg(long)]
    assert_reduced: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Chordal,
    Richardson,
}

impl From<Method> for SignatureMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Chordal => SignatureMethod::Chordal,
            Method::Richardson => SignatureMethod::Richardson,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckKind {
    Variety,
    Holonomic,
    Legendrian,
    Cauchy,
    LinearVf,
    Hamiltonian,
    Sphere,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Parse(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Parse(_) => 65,
            Failure::Io(_) => 66,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Parse(e.to_string()),
            Error::Io(_) => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn io_failure(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn load_path(path: &Path) -> Result<PathModel, Failure> {
    if !path.exists() {
        return Err(Failure::Io(format!("{}: no such file", path.display())));
    }
    PathModel::load(path).map_err(|e| match e {
        Error::Parse(p) => Failure::Parse(format!("{}: {p}", path.display())),
        other => other.into(),
    })
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, bytes).map_err(io_failure(p)),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("SIGCERT_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            Failure::Usage(format!(
                "SIGCERT_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot size the thread pool: {e}")))
}

fn cmd_signature(
    path: &Path,
    trunc: usize,
    method: Method,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if trunc == 0 {
        return Err(Failure::Usage("--trunc must be positive".into()));
    }
    let x = load_path(path)?;
    let sig = sigcert::signature::signature(&x, trunc, method.into());
    let binary = out.is_some_and(|p| p.extension().is_some_and(|e| e == "bin"));
    let mut bytes = Vec::new();
    if binary {
        sig.write_binary(&mut bytes)?;
    } else {
        bytes = sig.to_json_string().into_bytes();
        bytes.push(b'\n');
    }
    write_output(out, &bytes)
}

fn check_config(x: &PathModel, opts: &CheckOpts) -> CheckConfig {
    let mut cfg = CheckConfig::for_path(x, opts.trunc, opts.word_len);
    if let Some(t) = opts.tol_pass {
        cfg.tol_pass = t;
    }
    if let Some(t) = opts.tol_fail {
        cfg.tol_fail = t;
    }
    cfg.method = opts.method.into();
    cfg.strict_paper = opts.strict_paper;
    cfg.reducedness = if opts.reduce {
        Reducedness::BacktrackReduced
    } else if opts.assert_reduced {
        Reducedness::UserAsserted
    } else {
        Reducedness::Unverified
    };
    cfg
}

fn run_check(
    kind: CheckKind,
    x: &PathModel,
    problem: Option<&ProblemFile>,
    cfg: &CheckConfig,
) -> Result<ResidualReport, Failure> {
    let need = || problem.ok_or_else(|| Failure::Usage("this check needs --problem".into()));
    let report = match kind {
        CheckKind::Variety => variety_check(x, &need()?.variety(x.dim())?, cfg)?,
        CheckKind::Holonomic => {
            let (r, l) = need()?.holonomy()?;
            holonomy_check(x, r, l, cfg)?
        }
        CheckKind::Legendrian => legendrian_check(x, cfg)?,
        CheckKind::Cauchy => cauchy_check(x, &need()?.cauchy()?, cfg)?,
        CheckKind::LinearVf => linear_vf_check(x, &need()?.linear_field()?, cfg)?,
        CheckKind::Hamiltonian => hamiltonian_check(x, &need()?.hamiltonian()?, cfg)?,
        CheckKind::Sphere => sphere_invariant_check(x, cfg)?,
    };
    Ok(report)
}

fn cmd_check(
    kind: CheckKind,
    path: &Path,
    problem: Option<&Path>,
    opts: &CheckOpts,
    out: Option<&Path>,
) -> Result<Verdict, Failure> {
    let mut x = load_path(path)?;
    if opts.reduce {
        x = match x {
            PathModel::PiecewiseLinear(p) => backtrack_reduce(&p).into(),
            PathModel::Sampled(_) => {
                return Err(Failure::Usage(
                    "--reduce applies to piecewise-linear (.json) paths only".into(),
                ))
            }
        };
    }
    let problem = match problem {
        Some(p) => Some(ProblemFile::from_json_str(
            &fs::read_to_string(p).map_err(io_failure(p))?,
        )?),
        None => None,
    };
    let cfg = check_config(&x, opts);
    let report = run_check(kind, &x, problem.as_ref(), &cfg)?;
    let mut text = report.to_json_string();
    text.push('\n');
    write_output(out, text.as_bytes())?;
    eprintln!(
        "{}: {} (max |residual| {:.3e}, K = {}, L = {})",
        report.condition, report.verdict, report.max_abs_residual, cfg.trunc, cfg.word_len
    );
    Ok(report.verdict)
}

fn cmd_emit_plot(path: &Path, indices: &[usize], out: Option<&Path>) -> Result<(), Failure> {
    let x = load_path(path)?;
    let projected = project(&x, indices)?;
    let mut bytes = Vec::new();
    projected.to_sampled().write_csv(&mut bytes)?;
    write_output(out, &bytes)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Signature {
            path,
            trunc,
            method,
            out,
        } => cmd_signature(&path, trunc, method, out.as_deref()).map(|_| ExitCode::SUCCESS),
        Command::Check {
            kind,
            path,
            problem,
            opts,
            out,
        } => {
            let verdict = cmd_check(kind, &path, problem.as_deref(), &opts, out.as_deref())?;
            Ok(ExitCode::from(match verdict {
                Verdict::Pass => 0,
                Verdict::Fail => 1,
                Verdict::Inconclusive => 2,
            }))
        }
        Command::EmitPlot { path, indices, out } => {
            cmd_emit_plot(&path, &indices, out.as_deref()).map(|_| ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("sigcert: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
