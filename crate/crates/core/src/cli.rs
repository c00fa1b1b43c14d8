//! `rnr-spread` command-line interface.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation or I/O failure,
//! 3 conjecture counterexample found.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::balanced::{balanced_decomposition, level_set_decomposition};
use crate::dgf::{read_dgf, write_dgf};
use crate::error::Error;
use crate::families::{generate, FamilySpec};
use crate::graph::{hex_to_code, Digraph};
use crate::par::{with_threads, Execution};
use crate::rnr::{boundary_sweep_with, summarize_with, ClassifyConfig, DEFAULT_SWEEP, MIN_SWEEP};
use crate::survey::{check_conjectures, emit_csv, reports_to_json, scatter_with, Filter};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_FAILURE: u8 = 2;
pub const EXIT_COUNTEREXAMPLE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "rnr-spread", version, about = "Restricted numerical range and Laplacian spread of digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Algebraic connectivity, spread and polygonal class of one digraph.
    Compute(ComputeArgs),
    /// Emit a named family member as DGF.
    Family(FamilyArgs),
    /// Sampled boundary of the restricted numerical range as CSV.
    Boundary(BoundaryArgs),
    /// Exhaustive survey records as CSV.
    Survey(SurveyArgs),
    /// Survey followed by conjecture checks; JSON reports.
    Check(SurveyArgs),
    /// Convex decomposition of a weighted digraph; JSON.
    Decompose(DecomposeArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Tolerances {
    /// Angular samples for boundary sweeps.
    #[arg(long, default_value_t = DEFAULT_SWEEP, value_name = "M")]
    sweep: usize,
    #[arg(long, value_name = "TOL")]
    normal_tol: Option<f64>,
    #[arg(long, value_name = "TOL")]
    polygonal_tol: Option<f64>,
}

impl Tolerances {
    fn config(&self) -> Result<ClassifyConfig, CliError> {
        if self.sweep < MIN_SWEEP {
            return Err(CliError::Usage(format!("--sweep must be at least {MIN_SWEEP}")));
        }
        let mut cfg = ClassifyConfig {
            sweep: self.sweep,
            ..ClassifyConfig::default()
        };
        for (name, value, slot) in [
            ("--normal-tol", self.normal_tol, &mut cfg.normal_tol),
            ("--polygonal-tol", self.polygonal_tol, &mut cfg.polygonal_tol),
        ] {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::Usage(format!("{name} must be positive")));
                }
                *slot = v;
            }
        }
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
struct ComputeArgs {
    /// DGF file, or `-` for stdin.
    #[arg(long, default_value = "-", value_name = "PATH", conflicts_with = "id")]
    input: String,
    /// Survey id (hex arc bitstring); requires --order.
    #[arg(long, value_name = "HEX", requires = "order")]
    id: Option<String>,
    #[arg(long, value_name = "N")]
    order: Option<usize>,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    tol: Tolerances,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// cycle, complete, empty, star, pick, polygonal-extremal, pseudo-normal, balanced-extremal
    kind: String,
    params: Vec<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct BoundaryArgs {
    #[arg(long, default_value = "-", value_name = "PATH")]
    input: String,
    #[arg(long, default_value_t = DEFAULT_SWEEP, value_name = "M")]
    sweep: usize,
    #[arg(long, value_name = "K")]
    threads: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SurveyArgs {
    #[arg(long, value_name = "N")]
    order: usize,
    #[arg(long, value_enum, default_value_t = FilterArg::All)]
    filter: FilterArg,
    /// Keep one representative per isomorphism class.
    #[arg(long)]
    dedup: bool,
    /// Worker cap.
    #[arg(long, value_name = "K")]
    threads: Option<usize>,
    #[command(flatten)]
    tol: Tolerances,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FilterArg {
    All,
    Balanced,
    Polygonal,
}

impl From<FilterArg> for Filter {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::All => Filter::All,
            FilterArg::Balanced => Filter::Balanced,
            FilterArg::Polygonal => Filter::Polygonal,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    /// Balanced decomposition when the input is balanced, level sets otherwise.
    Auto,
    Balanced,
    LevelSet,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(long, default_value = "-", value_name = "PATH")]
    input: String,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_input(&mut self, path: &str) -> Result<String, CliError> {
        if path == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::Failure(format!("reading stdin: {e}")))?;
            Ok(s)
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::Failure(format!("reading {path}: {e}")))
        }
    }

    fn read_digraph(&mut self, path: &str) -> Result<Digraph, CliError> {
        let text = self.read_input(path)?;
        Ok(read_dgf(&text)?)
    }

    fn emit(&mut self, out: &Output, text: &str) -> Result<(), CliError> {
        match &out.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Failure(format!("writing {}: {e}", path.display()))),
            None => self
                .stdout
                .write_all(text.as_bytes())
                .and_then(|_| self.stdout.flush())
                .map_err(|e| CliError::Failure(format!("writing stdout: {e}"))),
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let mut io = Io { stdin, stdout };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failure(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(cmd: Command, io: &mut Io<'_>) -> Result<u8, CliError> {
    match cmd {
        Command::Compute(a) => {
            let cfg = a.tol.config()?;
            let g = match (&a.id, a.order) {
                (Some(id), Some(n)) => Digraph::from_arc_code(n, hex_to_code(n, id)?)?,
                _ => io.read_digraph(&a.input)?,
            };
            let s = summarize_with(&g, &cfg)?;
            let text = if a.json {
                format!("{}\n", s.to_json())
            } else {
                use crate::fmt::g17;
                format!(
                    "alpha  {}\nbeta   {}\nspread {}\nclass  {}\n",
                    g17(s.alpha),
                    g17(s.beta),
                    g17(s.spread),
                    s.class
                )
            };
            io.emit(&a.output, &text)?;
        }
        Command::Family(a) => {
            let spec = FamilySpec::parse(&a.kind, &a.params).map_err(|e| CliError::Usage(e.to_string()))?;
            io.emit(&a.output, &write_dgf(&generate(&spec)?))?;
        }
        Command::Boundary(a) => {
            if a.sweep < MIN_SWEEP {
                return Err(CliError::Usage(format!("--sweep must be at least {MIN_SWEEP}")));
            }
            let g = io.read_digraph(&a.input)?;
            let curve = with_threads(a.threads, || boundary_sweep_with(&g, a.sweep, Execution::default()))?;
            io.emit(&a.output, &curve.to_csv())?;
        }
        Command::Survey(a) => {
            let cfg = a.tol.config()?;
            let records = with_threads(a.threads, || {
                scatter_with(a.order, a.filter.into(), a.dedup, Execution::default(), &cfg)
            })?;
            io.emit(&a.output, &emit_csv(&records))?;
        }
        Command::Check(a) => {
            let cfg = a.tol.config()?;
            let records = with_threads(a.threads, || {
                scatter_with(a.order, a.filter.into(), a.dedup, Execution::default(), &cfg)
            })?;
            let reports = check_conjectures(&records, a.order)?;
            io.emit(&a.output, &reports_to_json(&reports))?;
            if reports.iter().any(|r| r.is_counterexample()) {
                return Ok(EXIT_COUNTEREXAMPLE);
            }
        }
        Command::Decompose(a) => {
            let g = io.read_digraph(&a.input)?;
            let d = match a.method {
                Method::Balanced => balanced_decomposition(&g)?,
                Method::LevelSet => level_set_decomposition(&g),
                Method::Auto if g.is_balanced_default() => balanced_decomposition(&g)?,
                Method::Auto => level_set_decomposition(&g),
            };
            io.emit(&a.output, &format!("{}\n", d.to_json(&g)?))?;
        }
    }
    Ok(EXIT_OK)
}
