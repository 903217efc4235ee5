//! `snbkit`: generate, curate, serialize, validate and run the workload.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use snbkit_serializers::CsvVariant;

#[derive(Debug, Parser)]
#[command(name = "snbkit", version, about = "Social network benchmark kit")]
struct Cli {
    /// Output and input root.
    #[arg(long, global = true, env = "SNBKIT_DIR", default_value = "snbkit_data")]
    dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct DatasetArgs {
    /// CSV layout of the dataset on disk.
    #[arg(long, default_value_t = CsvVariant::CsvBasic)]
    format: CsvVariant,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a dataset, update streams and curated parameters.
    Generate {
        /// Number of persons; overrides --scale.
        #[arg(long)]
        persons: Option<u64>,
        /// Named preset such as SF0.001, or a person count.
        #[arg(long, default_value = "SF0.001")]
        scale: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        dataset: DatasetArgs,
        /// Generator threads; the output does not depend on it.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Files per table.
        #[arg(long, default_value_t = 1)]
        parts: usize,
        /// Bindings per query template.
        #[arg(long, default_value_t = 25)]
        params: usize,
        /// Fraction of entities removed in the delete streams.
        #[arg(long, default_value_t = 0.0)]
        delete_fraction: f64,
        /// Write parameter files as JSON lines.
        #[arg(long)]
        json_params: bool,
    },
    /// Recompute parameter files from the dataset on disk.
    Curate {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[arg(long, default_value_t = 25)]
        params: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json_params: bool,
    },
    /// Rewrite the dataset in another layout.
    Write {
        #[command(flatten)]
        dataset: DatasetArgs,
        /// Layout to write.
        #[arg(long)]
        to: CsvVariant,
        /// Destination root.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        parts: usize,
    },
    /// Load the dataset, check it and print entity counts.
    Load {
        #[command(flatten)]
        dataset: DatasetArgs,
    },
    /// Compare engine results with a stored expected-result set.
    Validate {
        #[command(flatten)]
        dataset: DatasetArgs,
        /// Expected-result set; defaults to validation/validation_set.jsonl under --dir.
        #[arg(long)]
        set: Option<PathBuf>,
        /// Recompute the set from the parameter files before comparing.
        #[arg(long)]
        create: bool,
    },
    /// Execute the interactive workload and score it.
    Run {
        #[command(flatten)]
        dataset: DatasetArgs,
        /// Time compression ratio; simulation time is divided by it.
        #[arg(long, default_value_t = 1.0)]
        tcr: f64,
        #[arg(long, default_value_t = 4)]
        threads: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Frequency row to use.
        #[arg(long, default_value = "SF1")]
        frequencies: String,
        /// Leading operations excluded from scoring.
        #[arg(long, default_value_t = 0)]
        warmup_ops: usize,
        /// Warn when the simulated span of the stream is shorter (milliseconds).
        #[arg(long)]
        min_sim_span: Option<i64>,
        #[arg(long = "results_dir", alias = "results-dir")]
        results_dir: Option<PathBuf>,
    },
    /// Score an existing results log.
    Report {
        #[arg(long = "results_dir", alias = "results-dir")]
        results_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        warmup_ops: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
