//! Experiment front end: binds declarative TOML configs to the library
//! operations and writes CSV/JSON artifacts.
//!
//! Exit codes: 0 success, 1 io failure, 2 config error, 3 numerical error.

mod config;
mod runner;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use runner::Overrides;

#[derive(Parser)]
#[command(name = "spinbeam", version, about = "Single-excitation spin-network experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment description (TOML).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Override output.path from the config.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Override output.format from the config.
    #[arg(long, value_enum)]
    format: Option<config::Format>,

    /// Worker threads for sweep points (default: all cores).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,

    /// Also write the Hamiltonian as row,col,value triplets (debugging).
    #[arg(long, value_name = "PATH")]
    dump_hamiltonian: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Reflection factor over a grid of node couplings (ybeam topology).
    ReflectSweep(RunArgs),
    /// Maximal concurrence over a grid of node couplings (ybeam topology).
    ConcurrenceSweep(RunArgs),
    /// Interference intensity versus path difference (interferometer).
    Interfere(RunArgs),
    /// Algebraic decoupling/matching report (star or ybeam topology).
    TransformCheck(RunArgs),
    /// Per-site probability trajectories of the packet.
    EvolveDump(RunArgs),
}

fn main() {
    // One BLAS thread per worker: the sweep layer parallelizes over grid
    // points, and run-to-run determinism needs a fixed reduction order.
    if std::env::var_os("OPENBLAS_NUM_THREADS").is_none() {
        std::env::set_var("OPENBLAS_NUM_THREADS", "1");
    }

    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::ReflectSweep(args) => ("reflection", args),
        Command::ConcurrenceSweep(args) => ("concurrence", args),
        Command::Interfere(args) => ("interference", args),
        Command::TransformCheck(args) => ("transform-check", args),
        Command::EvolveDump(args) => ("evolve", args),
    };
    let overrides = Overrides {
        out: args.out.clone(),
        format: args.format,
        threads: args.threads,
        dump_hamiltonian: args.dump_hamiltonian.clone(),
    };

    match config::load(&args.config).and_then(|cfg| runner::run(kind, &cfg, &overrides)) {
        Ok(path) => eprintln!("wrote {}", path.display()),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
