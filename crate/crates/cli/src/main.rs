use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use msetord_cli::bench::{self, BenchConfig, BenchModel, Scheme, SymmetricMatrix, TemplateDesign};
use msetord_cli::check::{self, CheckConfig};
use msetord_cli::{fuzzy, instance, perf, CliError, Report, Result};
use msetord_core::propagators::propagate_msetord;

/// Multiset ordering constraint toolkit.
#[derive(Debug, Parser)]
#[command(name = "msetord", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare two multisets, printing LESS, EQUAL or GREATER.
    Compare {
        /// First multiset, e.g. "1 1 2"
        #[arg(required_unless_present = "file", allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(required_unless_present = "file", allow_hyphen_values = true)]
        b: Option<String>,
        /// Read the two multisets from the two lines of a file.
        #[arg(long, conflicts_with_all = ["a", "b"])]
        file: Option<PathBuf>,
    },
    /// Propagate the constraint in an instance file once.
    Propagate {
        file: PathBuf,
        /// Treat the relation as strict regardless of the file.
        #[arg(long)]
        strict: bool,
    },
    /// Compare the propagator against brute-force enumeration.
    OracleCheck {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 5)]
        max_width: usize,
    },
    /// Count solutions of a benchmark model under each symmetry scheme.
    Bench(BenchArgs),
    /// Time single propagation calls on large random instances.
    Perf {
        #[arg(long, value_delimiter = ',', default_value = "100000,200000")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "100")]
        d: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Calls per point; the median is reported.
        #[arg(long, default_value_t = perf::DEFAULT_REPS)]
        reps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank assignments of a soft-constraint problem by their cost multisets.
    Fuzzy { file: PathBuf },
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(subcommand)]
    model: ModelArgs,
    /// Comma-separated list of schemes.
    #[arg(long, global = true, value_delimiter = ',', default_value = "none,msetord,lex")]
    scheme: Vec<Scheme>,
    /// Stop each search after this many solutions.
    #[arg(long, global = true)]
    limit: Option<usize>,
    /// Accepted for interface symmetry; the models are fully determined by
    /// their parameters.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ModelArgs {
    SymmetricMatrix {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: i64,
        #[arg(long, default_value_t = 2)]
        s: i64,
    },
    TemplateDesign {
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, default_value_t = 2)]
        v: usize,
        #[arg(long = "slots", default_value_t = 2)]
        slots: i64,
        #[arg(long, default_value_t = 2)]
        runs: i64,
        #[arg(long, value_delimiter = ',', default_value = "2,2")]
        demands: Vec<i64>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(text: String, out: Option<&Path>) -> Result<Report> {
    match out {
        Some(p) => {
            fs::write(p, &text)?;
            Ok(Report::ok(String::new()))
        }
        None => Ok(Report::ok(text)),
    }
}

fn run(cmd: Command) -> Result<Report> {
    match cmd {
        Command::Compare { a, b, file } => match file {
            Some(f) => instance::cmd_compare_file(&read(&f)?),
            None => instance::cmd_compare(a.as_deref().unwrap_or(""), b.as_deref().unwrap_or("")),
        },
        Command::Propagate { file, strict } => instance::cmd_propagate(&read(&file)?, strict),
        Command::OracleCheck { seed, trials, max_n, max_width } => {
            let cfg = CheckConfig { seed, trials, max_n, max_width };
            let report = check::run_check(&cfg, propagate_msetord)?;
            Ok(check::render(&cfg, &report))
        }
        Command::Bench(args) => {
            let model = match args.model {
                ModelArgs::SymmetricMatrix { k, n, d, s } => {
                    BenchModel::SymmetricMatrix(SymmetricMatrix { k, n, d, s })
                }
                ModelArgs::TemplateDesign { t, v, slots, runs, demands } => {
                    BenchModel::TemplateDesign(TemplateDesign { t, v, slots, runs, demands })
                }
            };
            let cfg = BenchConfig { model, schemes: args.scheme, limit: args.limit };
            let rows = bench::run_bench(&cfg)?;
            emit(bench::render_csv(&rows), args.out.as_deref())
        }
        Command::Perf { n, d, seed, reps, out } => {
            let points = perf::run_perf(&n, &d, seed, reps)?;
            emit(perf::render_csv(&points), out.as_deref())
        }
        Command::Fuzzy { file } => fuzzy::cmd_fuzzy(&read(&file)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            print!("{}", report.text);
            ExitCode::from(report.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
