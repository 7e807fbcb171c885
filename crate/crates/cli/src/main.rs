//! `sparse-mds`: build and check MDS generator matrices with prescribed zeros.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{CliError, Inputs, RunReport};

#[derive(Parser, Debug)]
#[command(name = "sparse-mds", version, about = "MDS matrices with prescribed zero patterns")]
pub struct Cli {
    /// Worker threads for the inner loops (0 = one per core).
    #[arg(long, global = true, env = "SPARSE_MDS_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the MDS condition (or the distance-d condition) for a pattern.
    Check {
        pattern: PathBuf,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Construct a generator matrix realizing a pattern.
    Construct(ConstructArgs),
    /// Check a matrix for the MDS property and, optionally, a zero pattern.
    Verify {
        matrix: PathBuf,
        #[arg(long)]
        pattern: Option<PathBuf>,
        /// Only require the listed zeros; extra zeros are allowed.
        #[arg(long)]
        at_least: bool,
        #[arg(long, value_enum, default_value_t = OrderArg::Lex)]
        order: OrderArg,
    },
    /// Minimum distance of the code generated by a matrix.
    Mindist {
        matrix: PathBuf,
        /// Largest number of codewords to enumerate.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
        /// Write the run report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Smallest field order with a GRS realization of a pattern.
    Minfield {
        pattern: PathBuf,
        #[arg(long)]
        qmax: u32,
        /// Largest point-tuple count searched per field.
        #[arg(long, default_value_t = sparse_mds::verify::DEFAULT_SEARCH_CAP)]
        cap: u64,
    },
    /// Linear independence of the polynomial family of a vector system.
    Indep {
        system: PathBuf,
        #[arg(long, value_enum, default_value_t = IndepMode::Randomized)]
        mode: IndepMode,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        /// Evaluation field for randomized mode.
        #[arg(long)]
        field: Option<String>,
    },
    /// Check the V*(k) property of a vector system.
    VstarCheck {
        system: PathBuf,
        /// Check V(k) only, without the coordinate restriction.
        #[arg(long)]
        plain: bool,
    },
    /// Check the reduction lemmas on given or generated systems.
    Lemmas {
        systems: Vec<PathBuf>,
        /// Generate this many instances per lemma.
        #[arg(long)]
        generate: Option<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Timing runs.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    pub pattern: PathBuf,
    /// Field such as "7", "2^5" or "32"; defaults to the smallest adequate one.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Sequential)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 64)]
    pub max_tries: usize,
    #[arg(long, default_value_t = 12)]
    pub grid_cap: usize,
    #[arg(long, default_value_t = 64)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = EmitArg::Json)]
    pub emit: EmitArg,
    /// Target minimum distance; the pattern may have fewer than n - d + 1 rows.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, value_enum, default_value_t = CompletionArg::Greedy)]
    pub completion: CompletionArg,
    /// Write the run report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(value_enum)]
    pub target: BenchTarget,
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value = "32")]
    pub field: String,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum BenchTarget {
    Minors,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum OrderArg {
    Lex,
    RevolvingDoor,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ModeArg {
    Sequential,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitArg {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum CompletionArg {
    Greedy,
    PadOnly,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum IndepMode {
    Exact,
    Randomized,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Construct(_) => "construct",
            Command::Verify { .. } => "verify",
            Command::Mindist { .. } => "mindist",
            Command::Minfield { .. } => "minfield",
            Command::Indep { .. } => "indep",
            Command::VstarCheck { .. } => "vstar-check",
            Command::Lemmas { .. } => "lemmas",
            Command::Bench(_) => "bench",
        }
    }

    /// Where the report goes when stdout carries the primary result.
    fn report_file(&self) -> Option<&PathBuf> {
        match self {
            Command::Construct(a) => a.report.as_ref(),
            Command::Mindist { report, .. } => report.as_ref(),
            _ => None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: cannot size the thread pool: {e}");
            return ExitCode::from(report::EXIT_INPUT);
        }
    }
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = commands::run(&cli, &mut inputs);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };

    let run = RunReport {
        command: cli.command.name().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        args: std::env::args().skip(1).collect(),
        seed: cli.seed,
        inputs_digest: inputs.digest(),
        verdict: outcome.verdict.clone(),
        result: outcome.result,
        witness: outcome.witness,
        elapsed_ms,
    };
    let json = serde_json::to_string_pretty(&run).expect("reports serialize");
    match &outcome.primary {
        Some(text) => {
            print!("{text}");
            if let Some(path) = cli.command.report_file() {
                if let Err(e) = std::fs::write(path, json + "\n") {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(report::EXIT_INPUT);
                }
            }
        }
        None => println!("{json}"),
    }
    if !outcome.summary.is_empty() {
        eprintln!("{}", outcome.summary);
    }
    ExitCode::from(outcome.exit)
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {}", e.message());
    ExitCode::from(e.exit_code())
}
