//! Benchmark CLI: `run` a config, `validate` one, or re-emit `plot-data`
//! from a finished run directory.
//!
//! Exit codes: 0 success, 1 validation failure, 2 numerical failure, 3 I/O.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use obb_core::bench::{self, PlotDecimation, SummaryRow};
use obb_core::Error;

#[derive(Parser)]
#[command(
    name = "obb-bench",
    about = "Online Barzilai-Borwein regret benchmarks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every policy of a run configuration and write CSV outputs.
    Run {
        /// Path to a JSON run configuration.
        config: PathBuf,
        /// Output directory (overrides the config's `output_dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the policy matrix (1 = serial).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Suppress the summary table on stdout.
        #[arg(long)]
        quiet: bool,
    },
    /// Parse and validate a configuration without running it.
    Validate { config: PathBuf },
    /// Rebuild plot-ready CSV data from a finished run directory.
    PlotData {
        run_dir: PathBuf,
        /// Destination file.
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code_for(error: &Error) -> u8 {
    match error {
        Error::InvalidArgument(_) | Error::Validation(_) => 1,
        Error::DegenerateSecant(_)
        | Error::NumericalFailure { .. }
        | Error::InsufficientData(_) => 2,
        Error::Io(_) => 3,
    }
}

fn print_summary(rows: &[SummaryRow]) {
    println!(
        "{:<14} {:>13} {:>13} {:>8} {:>13} {:>12} {:>12} {:>14} {:>7} {:>6} {:>8}",
        "policy",
        "R_K",
        "avg_R_K",
        "slope",
        "zinkevich",
        "psi",
        "zeta",
        "cond_t1",
        "flag_P",
        "degen",
        "wall_ms"
    );
    for row in rows {
        println!(
            "{:<14} {:>13.6e} {:>13.6e} {:>8.4} {:>13.6e} {:>12.4e} {:>12.4e} {:>14} {:>7} {:>6} {:>8}",
            row.policy,
            row.r_k,
            row.avg_r_k,
            row.slope,
            row.zinkevich_bound,
            row.psi,
            row.zeta,
            row.cond_t1,
            row.flag_p,
            row.degenerate_rounds,
            row.wall_ms
        );
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Run {
            config,
            out,
            jobs,
            quiet,
        } => {
            let text = std::fs::read_to_string(&config)?;
            let parsed = bench::parse_config(&text)?;
            let rows = bench::run_matrix(&parsed, out.as_deref(), jobs.max(1))?;
            if !quiet {
                print_summary(&rows);
            }
            Ok(())
        }
        Command::Validate { config } => {
            let text = std::fs::read_to_string(&config)?;
            bench::parse_config(&text)?;
            println!("ok");
            Ok(())
        }
        Command::PlotData { run_dir, out } => {
            let series = bench::load_run_series(&run_dir)?;
            bench::emit_plot_data(&series, &out, PlotDecimation::default())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(exit_code_for(&error))
        }
    }
}
