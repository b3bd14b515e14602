//! Command-line front end for the Riccati/Newton–Puiseux solver.
//!
//! Exit codes: 0 success, 1 internal error, 2 unreadable or malformed input,
//! 3 extension depth cap reached, 4 output file not writable.

pub mod document;
pub mod report;
pub mod sugar;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use puiseux_riccati::solver::{count_check, expand_tree, SolutionTree};
use puiseux_riccati::upoly::DEFAULT_DEPTH_CAP;
use puiseux_riccati::{Error, Exponent, LinearODE, RiccatiOperator, SolverOptions};

use document::{load, parse_exponent, InputError, OdeDocument};
use report::SolveSettings;

#[derive(Parser, Debug)]
#[command(
    name = "riccati",
    version,
    about = "Puiseux solutions at infinity of Riccati equations of linear ODEs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand the solution tree and print its branches.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        /// Also write the tree in DOT format to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print the Newton polygon and characteristic polynomials.
    Polygon {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
    /// Print the solution tree in DOT format (to stdout unless --dot is given).
    Tree {
        input: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Lowest exponent to compute, e.g. -2 or -5/2.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_exponent)]
    floor: Option<Exponent>,
    /// Maximum number of terms per branch.
    #[arg(long)]
    max_terms: Option<usize>,
    /// Maximum depth of the algebraic extension tower.
    #[arg(long)]
    ext_cap: Option<usize>,
    /// Worker threads for exploring sibling subtrees.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Json,
    Text,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Solve(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Solve(Error::DepthCap { .. }) => 3,
            CliError::Solve(_) => 1,
            CliError::Output { .. } => 4,
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn settings(doc: &OdeDocument, args: &SolveArgs) -> (SolveSettings, SolverOptions) {
    let defaults = SolverOptions::default();
    let s = SolveSettings {
        floor: args.floor.or(doc.options.floor).unwrap_or(defaults.floor),
        max_terms: args
            .max_terms
            .or(doc.options.max_terms)
            .unwrap_or(defaults.max_terms),
        ext_cap: args.ext_cap.or(doc.options.ext_cap).unwrap_or(DEFAULT_DEPTH_CAP),
    };
    let opts = SolverOptions {
        floor: s.floor,
        max_terms: s.max_terms,
        depth_cap: s.ext_cap,
        parallel: args.jobs.is_some_and(|j| j > 1),
    };
    (s, opts)
}

fn solve(ode: &LinearODE, opts: &SolverOptions, jobs: Option<usize>) -> Result<SolutionTree, Error> {
    match jobs {
        Some(j) if j > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Error::Consistency(format!("thread pool: {e}")))?;
            pool.install(|| expand_tree(ode, opts))
        }
        _ => expand_tree(ode, opts),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Output {
        path: path.display().to_string(),
        source,
    })
}

fn print(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Output {
        path: "<stdout>".into(),
        source,
    })
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Solve {
            input,
            solve: args,
            emit,
            dot,
        } => {
            let doc = load(&input)?;
            let (s, opts) = settings(&doc, &args);
            let tree = solve(&doc.ode, &opts, args.jobs)?;
            let count = count_check(&tree)?;
            if let Some(path) = dot {
                write_file(&path, &tree.to_dot())?;
            }
            let text = match emit {
                Emit::Json => {
                    let v = report::solve_json(&doc.ode, &tree, count, &s);
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
                }
                Emit::Text => report::solve_text(&doc.ode, &tree, count, &s),
            };
            print(out, &text)
        }
        Command::Polygon { input, emit } => {
            let doc = load(&input)?;
            let r = RiccatiOperator::from_linear_ode(&doc.ode);
            let text = match emit {
                Emit::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report::polygon_json(&r)?).expect("serializable")
                ),
                Emit::Text => report::polygon_text(&r)?,
            };
            print(out, &text)
        }
        Command::Tree {
            input,
            solve: args,
            dot,
        } => {
            let doc = load(&input)?;
            let (_, opts) = settings(&doc, &args);
            let tree = solve(&doc.ode, &opts, args.jobs)?;
            count_check(&tree)?;
            match dot {
                Some(path) => write_file(&path, &tree.to_dot()),
                None => print(out, &tree.to_dot()),
            }
        }
    }
}
