//! `g2inv`: local invariants of genus-2 curves from reduction graphs or
//! period matrices.

mod render;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use genus2_core::catalog::{classify, closed_form, graph_of_type, CatalogError, FiberTag, FiberType};
use genus2_core::format::{parse_graph, parse_method, parse_tau, write_graph, ArchDocument, NonArchDocument};
use genus2_core::invariants::{nonarch_report, total_genus, InvariantError};
use genus2_core::rational::parse_rational;
use genus2_core::theta::{arch_invariants, QuadMethod, QuadratureConfig, ThetaError, DEFAULT_THETA_TOL};
use genus2_core::PMGraph;

pub const EXIT_PARSE: u8 = 2;
pub const EXIT_GENUS: u8 = 3;
pub const EXIT_INCONSISTENT: u8 = 4;
pub const EXIT_DEGENERATE: u8 = 5;
pub const EXIT_UNSTABLE: u8 = 6;
pub const EXIT_MISMATCH: u8 = 7;

#[derive(Parser)]
#[command(name = "g2inv", version, about = "Local invariants of genus-2 curves")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Exact invariants of a reduction graph.
    Nonarch(NonarchArgs),
    /// Numerical invariants of a period matrix.
    Arch(ArchArgs),
    /// Computed and closed-form rows for every fiber type.
    Table(TableArgs),
    /// Compare computed invariants against the closed forms on random
    /// parameters.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "input")]
struct NonarchInput {
    /// Graph file.
    graph: Option<PathBuf>,
    /// Fiber type I..VII instead of a graph file.
    #[arg(long = "type")]
    fiber_type: Option<String>,
}

#[derive(Args)]
struct NonarchArgs {
    #[command(flatten)]
    input: NonarchInput,
    /// Comma-separated rational parameters for --type.
    #[arg(long, requires = "fiber_type", allow_hyphen_values = true)]
    params: Option<String>,
}

#[derive(Args)]
struct ArchArgs {
    /// Period-matrix file.
    tau: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// monte-carlo or lattice-rule.
    #[arg(long, default_value = "monte-carlo")]
    method: String,
    /// Truncation tolerance of each theta evaluation.
    #[arg(long, env = "G2INV_TOL", default_value_t = DEFAULT_THETA_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 1e-3)]
    target_stderr: f64,
    /// Spread the quadrature over all cores (output is identical).
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Parameters a,b,c; each type uses as many as it needs.
    #[arg(long, default_value = "2,3,5")]
    values: String,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Random tuples per type.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// An error that ends the run with a specific exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Nonarch(a) => run_nonarch(&a, cli.format),
        Command::Arch(a) => run_arch(&a, cli.format),
        Command::Table(a) => run_table(&a, cli.format),
        Command::Verify(a) => verify::run(&a, cli.format),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("g2inv: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

pub fn parse_params(text: &str) -> Result<Vec<genus2_core::Q>, Failure> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|p| parse_rational(p.trim()).map_err(|e| Failure::new(EXIT_PARSE, format!("parameter {p:?}: {e}"))))
        .collect()
}

fn fiber_type(tag: &str, params: Option<&str>) -> Result<FiberType, Failure> {
    let tag: FiberTag = tag.parse().map_err(|e: CatalogError| Failure::new(EXIT_PARSE, e.to_string()))?;
    let params = parse_params(params.unwrap_or(""))?;
    FiberType::new(tag, params).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))
}

fn invariant_failure(g: &PMGraph, e: InvariantError) -> Failure {
    let code = match e {
        InvariantError::GenusZero | InvariantError::GenusTooSmall(_) => EXIT_GENUS,
        _ => EXIT_INCONSISTENT,
    };
    let mut message = e.to_string();
    if code == EXIT_INCONSISTENT {
        message.push_str("\n--- graph ---\n");
        message.push_str(&write_graph(g));
    }
    Failure::new(code, message)
}

fn run_nonarch(a: &NonarchArgs, format: OutputFormat) -> Result<String, Failure> {
    let (graph, label) = match (&a.input.graph, &a.input.fiber_type) {
        (Some(path), _) => {
            let g = parse_graph(&read(path)?).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
            let label = classify(&g).ok().map(|t| t.to_string());
            (g, label)
        }
        (None, Some(tag)) => {
            let t = fiber_type(tag, a.params.as_deref())?;
            (graph_of_type(&t), Some(t.to_string()))
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let genus = total_genus(&graph);
    if genus != 2 {
        return Err(Failure::new(EXIT_GENUS, format!("graph has genus {genus}, expected 2")));
    }
    let report = nonarch_report(&graph).map_err(|e| invariant_failure(&graph, e))?;
    let doc = NonArchDocument { fiber_type: label, report };
    Ok(match format {
        OutputFormat::Human => render::nonarch(&doc),
        OutputFormat::Structured => doc.to_json(),
    })
}

fn theta_failure(e: ThetaError) -> Failure {
    let code = match e {
        ThetaError::DegenerateThetaNull { .. } => EXIT_DEGENERATE,
        ThetaError::QuadratureUnstable { .. } => EXIT_UNSTABLE,
        ThetaError::TruncationOverflow { .. } => 1,
        _ => EXIT_PARSE,
    };
    Failure::new(code, e.to_string())
}

fn run_arch(a: &ArchArgs, format: OutputFormat) -> Result<String, Failure> {
    let tau = parse_tau(&read(&a.tau)?).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", a.tau.display())))?;
    let method: QuadMethod = parse_method(&a.method).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
    let q = QuadratureConfig {
        samples: a.samples,
        seed: a.seed,
        method,
        target_stderr: a.target_stderr,
        parallel: a.parallel,
    };
    let report = arch_invariants(&tau, &q, a.tol).map_err(theta_failure)?;
    let doc = ArchDocument {
        report,
        tau: tau.entries(),
        samples: q.samples,
        seed: q.seed,
        method,
        tol: a.tol,
        target_stderr: q.target_stderr,
    };
    Ok(match format {
        OutputFormat::Human => render::arch(&doc),
        OutputFormat::Structured => doc.to_json(),
    })
}

fn run_table(a: &TableArgs, format: OutputFormat) -> Result<String, Failure> {
    let values = parse_params(&a.values)?;
    let mut rows = Vec::new();
    for tag in FiberTag::ALL {
        if values.len() < tag.arity() {
            return Err(Failure::new(EXIT_PARSE, format!("type {tag} needs {} values", tag.arity())));
        }
        let t = FiberType::new(tag, values[..tag.arity()].to_vec()).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
        let g = graph_of_type(&t);
        let report = nonarch_report(&g).map_err(|e| invariant_failure(&g, e))?;
        let agrees = report.same_values(&closed_form(&t));
        rows.push(render::TableRow { fiber_type: t, report, agrees });
    }
    let text = render::table(&rows, format);
    if rows.iter().all(|r| r.agrees) {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::new(EXIT_MISMATCH, "computed row differs from the closed form"))
    }
}
