use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ldpc_lab::cli::{self, CliError, RunOptions};

#[derive(Parser)]
#[command(name = "ldpc-lab", version, about = "LDPC decoder laboratory: codes, decoding and BER simulation")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code (built-in id or address-table file) and write it as alist.
    GenCode {
        /// Built-in id (e.g. dvbt2-short-r12) or address-table path.
        source: String,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
    /// Load a code and verify its structure (and encoder, for eIRA codes).
    Validate {
        /// Built-in id, *.alist path or address-table path.
        source: String,
    },
    /// Decode one LLR vector (one value per line).
    Decode {
        #[arg(long)]
        code: String,
        #[arg(long)]
        llr: PathBuf,
        /// spa | minsum | scaled:alpha=<a> | svs:S=<n>
        #[arg(long)]
        variant: String,
        #[arg(long, default_value_t = 50)]
        max_iter: u32,
    },
    /// Run a BER/FER sweep described by a config file.
    Ber {
        #[arg(short, long)]
        config: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Grid-search the scaling factor (alpha) or SVS step size (step_s).
    Optimize {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long, value_parser = ["alpha", "step_s"])]
        kind: String,
        #[command(flatten)]
        run: RunFlags,
    },
}

#[derive(clap::Args)]
struct RunFlags {
    /// Output directory for CSV, plot script and manifest.
    #[arg(short, long, default_value = "out")]
    out: PathBuf,
    /// Master seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; overrides the config.
    #[arg(long)]
    workers: Option<usize>,
}

impl From<RunFlags> for RunOptions {
    fn from(f: RunFlags) -> Self {
        RunOptions { out_dir: f.out, seed: f.seed, workers: f.workers }
    }
}

fn run(args: Args) -> Result<String, CliError> {
    match args.command {
        Command::GenCode { source, out } => cli::cmd_gen_code(&source, &out),
        Command::Validate { source } => cli::cmd_validate(&source),
        Command::Decode { code, llr, variant, max_iter } => cli::cmd_decode(&code, &llr, &variant, max_iter),
        Command::Ber { config, run } => cli::cmd_ber(&config, &run.into()),
        Command::Optimize { config, kind, run } => cli::cmd_optimize(&config, &kind, &run.into()),
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
