use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flatcusp_cli::selftest::cmd_selftest;
use flatcusp_cli::table::{cmd_table, TableKind};
use flatcusp_cli::{cmd_build, cmd_classify, cmd_pair, CliError, Format, Outcome, RunConfig};

/// Flat manifolds, their holonomy forms, and arithmetic cusp questions.
#[derive(Parser)]
#[command(name = "flatcusp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Sampled holonomy forms per family (default 200; 50 from dimension 32)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    samples: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Refuse constructions above this dimension
    #[arg(long, global = true, default_value_t = 40)]
    max_dim: usize,
    /// Lift the dimension guard and run rows marked long-running
    #[arg(long, global = true)]
    long_running: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build and verify a family, e.g. "hw", "torus:5", "F:k=0,l=0"
    Build { spec: String },
    /// Sample holonomy forms and report their projective classes
    Classify { spec: String },
    /// Compare the holonomy forms of two families of equal dimension
    Pair { first: String, second: String },
    /// Reproduce a summary table: ucc or pairs
    Table {
        #[arg(value_enum)]
        which: TableKind,
    },
    /// Run the arithmetic property suites
    Selftest,
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("FLATCUSP_THREADS") {
        let n: usize = v.parse().map_err(|_| CliError::Input(format!("FLATCUSP_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    configure_threads()?;
    let cfg = RunConfig {
        samples: cli.samples.map(|s| s as usize),
        seed: cli.seed,
        format: cli.format,
        max_dim: cli.max_dim,
        long_running: cli.long_running,
    };
    match &cli.command {
        Command::Build { spec } => cmd_build(spec, &cfg),
        Command::Classify { spec } => cmd_classify(spec, &cfg),
        Command::Pair { first, second } => cmd_pair(first, second, &cfg),
        Command::Table { which } => cmd_table(*which, &cfg),
        Command::Selftest => cmd_selftest(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(s) = &outcome.summary {
        eprintln!("{s}");
    }
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.output) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.output),
    }
    ExitCode::from(outcome.exit_code() as u8)
}
