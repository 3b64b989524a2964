//! Command-line front end. [`run`] returns the process exit code:
//! 0 success, 1 identity failure, 2 usage or input error, 3 construction
//! failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::json;

use crate::cayley_dickson;
use crate::clifford::{self, ConnectingOperators, SpinMetric};
use crate::document::{read_table, write_table};
use crate::error::{Error, Result};
use crate::forge::{self, ControllingSpinor};
use crate::identities::{self, CheckOptions};
use crate::numerics::{CMat, Tolerance};
use crate::symmetry::{self, StabilizerOptions, SymmetryReport};
use crate::table::StructureTable;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONSTRUCTION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hypercomplex", version, about = "Build and verify hypercomplex algebras")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Verdict tolerance for identity checks.
    #[arg(long, global = true, default_value_t = identities::DEFAULT_TOL)]
    pub abs_tol: f64,
    /// Relative singular-value cutoff for rank and dimension counts.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub rel_tol: f64,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = identities::DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the Cayley-Dickson table of dimension 2^levels.
    CayleyDickson {
        /// Number of doublings from the reals (0..=5).
        #[arg(long)]
        levels: usize,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize a table from Clifford operators and a controlling spin-tensor.
    Forge {
        /// Base-space dimension, a multiple of 8.
        #[arg(long)]
        n: usize,
        /// "octonion" or a JSON file with "parts" or "matrix".
        #[arg(long, default_value = "octonion")]
        theta: String,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Construction log, one JSON object per line.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Run identity checks on a table document.
    Verify {
        /// Table document (JSON).
        table: PathBuf,
        /// Comma-separated identity names.
        #[arg(long, value_delimiter = ',', default_value = "weak-alternative,flexible,power-associative")]
        suite: Vec<String>,
        /// Random spot checks per identity.
        #[arg(long, default_value_t = identities::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Symmetry dimensions of a table and/or a controlling spin-tensor.
    Symmetry {
        /// Table document; reports its derivation dimension.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Base-space dimension; reports so(n) and the stabilizer.
        #[arg(long)]
        n: Option<usize>,
        /// Controlling spin-tensor for the stabilizer (default: octonion).
        #[arg(long)]
        theta: Option<String>,
        /// Skip the identity-direction constraint.
        #[arg(long)]
        no_fix_identity: bool,
        /// Skip the theta-invariance constraint.
        #[arg(long)]
        no_fix_theta: bool,
    },
    /// Eigenvalue classification of a controlling spin-tensor.
    Classify {
        /// Base-space dimension, a multiple of 8.
        #[arg(long)]
        n: usize,
        /// "octonion" or a JSON file with "parts" or "matrix".
        #[arg(long, default_value = "octonion")]
        theta: String,
    },
    /// Search zero divisors with small support.
    ZeroDivisors {
        /// Table document (JSON).
        table: PathBuf,
        /// Largest support of either factor (1 or 2).
        #[arg(long, default_value_t = 2)]
        max_support: usize,
        /// Print at most this many pairs (the count is always exact).
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
}

/// Parses arguments, runs the command, prints results to stdout and
/// diagnostics to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut out = std::io::stdout();
    match execute(&cli, &mut out) {
        Ok(code) => code,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Shape(_)
        | Error::DimensionMismatch { .. }
        | Error::InvalidInput(_)
        | Error::Domain(_)
        | Error::Io(_)
        | Error::Json(_) => EXIT_USAGE,
        _ => EXIT_CONSTRUCTION,
    }
}

/// Runs a parsed command, writing its report to `out`.
pub fn execute(cli: &Cli, out: &mut (dyn Write + Send)) -> Result<i32> {
    let g = &cli.global;
    let tol = Tolerance::new(0.0, g.rel_tol)?;
    if !(g.abs_tol >= 0.0) {
        return Err(Error::InvalidInput("--abs-tol must be non-negative".into()));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = g.jobs {
        if j == 0 {
            return Err(Error::InvalidInput("--jobs must be positive".into()));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| Error::Numerical(e.to_string()))?;
    pool.install(|| dispatch(cli, tol, out))
}

fn dispatch(cli: &Cli, tol: Tolerance, out: &mut (dyn Write + Send)) -> Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::CayleyDickson { levels, out: path } => {
            let t = cayley_dickson::algebra(*levels)?;
            emit_table(&t, path.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Forge {
            n,
            theta,
            out: path,
            log,
        } => {
            let (ops, eps) = operators_with_metric(*n)?;
            let th = load_theta(theta, &ops, &eps)?;
            let h = forge::inclusion_operator(&ops.g)?;
            let t = forge::structural_constants(&ops, &th, &h)?;
            if let Some(log_path) = log {
                write_log(log_path, &ops, &eps, &t)?;
            }
            emit_table(&t, path.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            table,
            suite,
            samples,
        } => {
            let t = read_table(table)?;
            let opts = CheckOptions {
                tolerance: g.abs_tol,
                samples: *samples,
                seed: g.seed,
            };
            let names: Vec<&str> = suite.iter().map(String::as_str).collect();
            let reports = identities::run_suite(&t, &names, &opts)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?;
            Ok(if reports.iter().all(|r| r.holds()) {
                EXIT_OK
            } else {
                EXIT_IDENTITY_FAILURE
            })
        }
        Command::Symmetry {
            table,
            n,
            theta,
            no_fix_identity,
            no_fix_theta,
        } => {
            let report = symmetry_report(
                table.as_deref(),
                *n,
                theta.as_deref(),
                !no_fix_identity,
                !no_fix_theta,
                tol,
            )?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(EXIT_OK)
        }
        Command::Classify { n, theta } => {
            let (ops, eps) = operators_with_metric(*n)?;
            let th = load_theta(theta, &ops, &eps)?;
            let class = symmetry::classify_theta(&eps, &th.theta)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&class)?)?;
            Ok(EXIT_OK)
        }
        Command::ZeroDivisors {
            table,
            max_support,
            limit,
        } => {
            let t = read_table(table)?;
            let pairs = identities::find_zero_divisors(&t, *max_support)?;
            let shown: Vec<_> = pairs.iter().take(*limit).collect();
            let report = json!({ "count": pairs.len(), "pairs": shown });
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn operators_with_metric(n: usize) -> Result<(ConnectingOperators, SpinMetric)> {
    if n % 8 != 0 {
        return Err(Error::Domain(format!(
            "synthesis from a controlling spin-tensor needs n = 0 mod 8, got {n}"
        )));
    }
    let ops = clifford::build(n)?;
    let eps = clifford::compute_spin_metric(&ops)?;
    Ok((ops, eps))
}

fn emit_table(t: &StructureTable, path: Option<&Path>, out: &mut (dyn Write + Send)) -> Result<()> {
    match path {
        Some(p) => write_table(t, p),
        None => {
            writeln!(out, "{}", crate::document::to_json(t)?)?;
            Ok(())
        }
    }
}

fn write_log(path: &Path, ops: &ConnectingOperators, eps: &SpinMetric, t: &StructureTable) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for entry in &ops.log {
        writeln!(f, "{}", serde_json::to_string(entry)?)?;
    }
    writeln!(
        f,
        "{}",
        json!({
            "step": "spin-metric",
            "n": ops.n,
            "sign": eps.sign,
            "lowering_residual": eps.lowering_residual,
        })
    )?;
    writeln!(
        f,
        "{}",
        json!({
            "step": "forge",
            "n": ops.n,
            "lambda": t.lambda.map(|l| [l.re, l.im]),
            "max_imag": t.max_imag(),
        })
    )?;
    f.flush()?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct ThetaPart {
    alpha: [f64; 2],
    x: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ThetaFile {
    Parts { parts: Vec<ThetaPart> },
    Matrix { matrix: Vec<Vec<[f64; 2]>> },
}

fn cx(p: &[f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// `"octonion"` or a JSON file holding `{"parts": [{"alpha": [re, im],
/// "x": [[re, im], ...]}]}` or `{"matrix": [[[re, im], ...], ...]}`.
pub fn load_theta(source: &str, ops: &ConnectingOperators, eps: &SpinMetric) -> Result<ControllingSpinor> {
    if source == "octonion" {
        return forge::octonion_spinor(ops, eps);
    }
    let text = std::fs::read_to_string(source)?;
    let big_n = ops.spinor_dim();
    match serde_json::from_str::<ThetaFile>(&text)? {
        ThetaFile::Parts { parts } => {
            let parts: Vec<(Complex64, Vec<Complex64>)> = parts
                .iter()
                .map(|p| (cx(&p.alpha), p.x.iter().map(cx).collect::<Vec<_>>()))
                .collect();
            if let Some((_, x)) = parts.iter().find(|(_, x)| x.len() != big_n) {
                return Err(Error::DimensionMismatch {
                    expected: big_n,
                    got: x.len(),
                });
            }
            Ok(forge::theta_from_decomposition(eps, &parts))
        }
        ThetaFile::Matrix { matrix } => {
            if matrix.len() != big_n || matrix.iter().any(|r| r.len() != big_n) {
                return Err(Error::Shape(format!("theta matrix must be {big_n}x{big_n}")));
            }
            let data = matrix.iter().flatten().map(cx).collect();
            ControllingSpinor::from_matrix(CMat::from_vec(big_n, big_n, data)?)
        }
    }
}

fn symmetry_report(
    table: Option<&Path>,
    n: Option<usize>,
    theta: Option<&str>,
    fix_identity: bool,
    fix_theta: bool,
    tol: Tolerance,
) -> Result<SymmetryReport> {
    if table.is_none() && n.is_none() {
        return Err(Error::InvalidInput("symmetry needs --table and/or --n".into()));
    }
    let mut report = SymmetryReport {
        so_dim: 0,
        derivation_dim: None,
        stabilizer_dim: None,
        theta_eigenvalues: vec![],
        class_label: None,
    };
    if let Some(p) = table {
        let t = read_table(p)?;
        report.so_dim = symmetry::so_dimension(t.dim());
        report.derivation_dim = Some(symmetry::derivation_dimension_with(&t, tol)?);
    }
    if let Some(n) = n {
        let (ops, eps) = operators_with_metric(n)?;
        let th = load_theta(theta.unwrap_or("octonion"), &ops, &eps)?;
        let h = forge::inclusion_operator(&ops.g)?;
        let forged = forge::structural_constants(&ops, &th, &h)?;
        let e = forged.identity().expect("structural_constants sets the identity");
        // identity direction in base coordinates: e^a = h_a e^i
        let e_base: Vec<Complex64> = e.coords.iter().zip(&h.h).map(|(x, hi)| x * hi).collect();
        let opts = StabilizerOptions {
            fix_direction: fix_identity.then_some(e_base),
            fix_theta: fix_theta.then(|| th.theta.clone()),
            tolerance: tol,
        };
        report.so_dim = symmetry::so_dimension(n);
        report.stabilizer_dim = Some(symmetry::stabilizer_dimension(&ops, &opts)?);
        let class = symmetry::classify_theta(&eps, &th.theta)?;
        report.theta_eigenvalues = class.eigenvalues;
        report.class_label = Some(class.label);
    }
    Ok(report)
}
