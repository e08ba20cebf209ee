use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use smoothlearn::harness::{
    cmd_analyze, cmd_scan, cmd_simulate, write_scan_csv, AlgorithmChoice, AnalyzeOptions, EtaSpec, ExperimentConfig,
    GameSource, HarnessError, ScanConfig, Suite,
};

#[derive(Parser)]
#[command(name = "smoothlearn", version, about = "Learning dynamics and smoothness certificates for finite games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run OGD or CGD and write trajectory.csv, metrics.csv and summary.json.
    Simulate {
        /// Builtin name, `random:RxC[x…]`, or a JSON game file.
        #[arg(long)]
        game: GameSource,
        #[arg(long, default_value = "ogd")]
        alg: AlgorithmChoice,
        /// A number, or `auto` for 1/(4L) (OGD) and 1/(2L) (CGD).
        #[arg(long, default_value = "auto")]
        eta: EtaSpec,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print smoothness, Minty and dominance certificates as JSON.
    Analyze {
        #[arg(long)]
        game: GameSource,
        #[arg(long)]
        z_min: Option<f64>,
        #[arg(long)]
        ratio_bound: Option<f64>,
        #[arg(long)]
        after_elimination: bool,
        /// Seed for `random:` games.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare robust and exact price of anarchy on random bimatrix games.
    Scan {
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        rows: usize,
        #[arg(long, default_value_t = 3)]
        cols: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every acceptance criterion and print a table.
    Examples,
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Simulate { game, alg, eta, steps, seed, out } => {
            let summary = cmd_simulate(&ExperimentConfig { game, algorithm: alg, eta, steps, seed, out })?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Analyze { game, z_min, ratio_bound, after_elimination, seed } => {
            let report = cmd_analyze(&game, seed, &AnalyzeOptions { z_min, ratio_bound, after_elimination })?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Scan { count, rows, cols, seed, out } => {
            let to_stdout = out.is_none();
            let rows = cmd_scan(&ScanConfig { count, rows, cols, seed, out })?;
            if to_stdout {
                write_scan_csv(&rows, &mut std::io::stdout().lock())?;
            }
        }
        Command::Examples => {
            let reports = Suite::new().run_all();
            for r in &reports {
                println!("{r}");
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            println!("{} passed, {failed} failed", reports.len() - failed);
            if failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli).context("smoothlearn failed") {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let input = e.downcast_ref::<HarnessError>().is_some_and(HarnessError::is_input_error);
            ExitCode::from(if input { 2 } else { 1 })
        }
    }
}
