use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bubble_cross::bounds::{bound_table, DEFAULT_TABLE_LIMIT};
use bubble_cross::export;
use bubble_cross::mesh::{oracle_crossings, total_crossings, MeshSpec};
use bubble_cross::perm_graph::{build_bn_with_limit, build_bprime_with_limit, DEFAULT_MAX_N};
use bubble_cross::recursion::{run_generations, seed_d6, PolicyKind, MAX_TRACE_N, SEED_N};
use bubble_cross::verify::{Suite, DEFAULT_SEED};
use bubble_cross::Error;
use clap::{Parser, Subcommand, ValueEnum};

/// Relative output paths are resolved against this directory when set.
const OUT_DIR_ENV: &str = "BUBBLE_CROSS_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "bubble-cross",
    version,
    about = "Crossing-number bounds for bubble-sort graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write B_n or B'_n as DOT or JSON.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bprime: bool,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
        /// Largest n accepted.
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count the crossings of a mesh two ways; optionally write it out.
    Mesh {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        /// Lost-edge anchors, comma separated.
        #[arg(long = "P", value_delimiter = ',', required = true)]
        p: Vec<u32>,
        #[arg(long, value_enum)]
        format: Option<MeshFormat>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a property suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Tabulate the bound for n = 7 ..= n_max.
    Bounds {
        #[arg(long, default_value_t = 30)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the replacement state machine from n = 6 up to `to`.
    Trace {
        #[arg(long)]
        to: usize,
        #[arg(long, value_enum, default_value_t = PolicyArg::Fixed)]
        policy: PolicyArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeshFormat {
    Svg,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Fixed,
    Roundrobin,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Oracle,
    Monotone,
    Maxima,
    States,
    Symmetry,
    Planarity,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Monotone => Suite::Monotone,
            SuiteArg::Maxima => Suite::Maxima,
            SuiteArg::States => Suite::States,
            SuiteArg::Symmetry => Suite::Symmetry,
            SuiteArg::Planarity => Suite::Planarity,
        }
    }
}

enum Failure {
    /// Exit 1.
    Property(String),
    /// Exit 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_)
            | Error::InconsistentPlan(_)
            | Error::NonInteger(_)
            | Error::TripleMismatch { .. } => Failure::Property(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Write to `output` if given, otherwise to stdout.
fn emit(output: Option<&Path>, content: &str) -> Outcome {
    match output {
        Some(path) => {
            let path = resolve(path);
            fs::write(&path, content)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            println!("wrote {}", path.display());
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serialises");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Graph {
            n,
            bprime,
            format,
            max_n,
            output,
        } => {
            let content = if bprime {
                let bp = build_bprime_with_limit(n, max_n)?;
                match format {
                    GraphFormat::Dot => export::graph_dot(&bp.graph, Some(&bp)),
                    GraphFormat::Json => pretty(&export::graph_json(&bp.graph, Some(&bp))),
                }
            } else {
                let g = build_bn_with_limit(n, max_n)?;
                match format {
                    GraphFormat::Dot => export::graph_dot(&g, None),
                    GraphFormat::Json => pretty(&export::graph_json(&g, None)),
                }
            };
            emit(output.as_deref(), &content)
        }
        Command::Mesh {
            n,
            a,
            p,
            format,
            output,
        } => {
            let spec = MeshSpec::new(n, a, p)?;
            let total = total_crossings(&spec);
            let oracle = oracle_crossings(&spec)?;
            println!("total {total}");
            println!("oracle {oracle}");
            if total != oracle {
                return Err(Failure::Property(format!(
                    "formula gives {total} but rays give {oracle}"
                )));
            }
            let content = match format {
                Some(MeshFormat::Svg) => export::mesh_svg(&spec)?,
                Some(MeshFormat::Json) => pretty(&export::mesh_json(&spec)),
                None => return Ok(()),
            };
            emit(output.as_deref(), &content)
        }
        Command::Verify { suite, seed } => {
            let report = Suite::from(suite).run(seed)?;
            for line in &report.lines {
                println!("{}: {line}", report.suite);
            }
            match report.failure {
                None => {
                    println!("{}: pass", report.suite);
                    Ok(())
                }
                Some(msg) => Err(Failure::Property(format!("{}: {msg}", report.suite))),
            }
        }
        Command::Bounds {
            n_max,
            format,
            output,
        } => {
            if n_max > DEFAULT_TABLE_LIMIT {
                return Err(Failure::Usage(format!(
                    "--n-max {n_max} exceeds the limit {DEFAULT_TABLE_LIMIT}"
                )));
            }
            let rows = bound_table(n_max)?;
            let content = match format {
                TableFormat::Csv => export::bounds_csv(&rows),
                TableFormat::Json => pretty(&export::bounds_json(&rows)),
            };
            emit(output.as_deref(), &content)
        }
        Command::Trace {
            to,
            policy,
            seed,
            format,
            output,
        } => {
            if to <= SEED_N || to > MAX_TRACE_N {
                return Err(Failure::Usage(format!(
                    "--to {to} outside {}..={MAX_TRACE_N}",
                    SEED_N + 1
                )));
            }
            let kind = match policy {
                PolicyArg::Fixed => PolicyKind::Fixed,
                PolicyArg::Roundrobin => PolicyKind::RoundRobin,
                PolicyArg::Random => PolicyKind::Random { seed },
            };
            let gens = run_generations(seed_d6(), to, kind.build().as_mut())?;
            let states: Vec<_> = gens.into_iter().map(|(g, _)| g).collect();
            let content = match format {
                TableFormat::Csv => export::trace_csv(&states),
                TableFormat::Json => pretty(&export::trace_json(&states)),
            };
            emit(output.as_deref(), &content)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
