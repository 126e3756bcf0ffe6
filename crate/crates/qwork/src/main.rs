use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qwork::{run_files, Mode, RunError};

/// Work and heat sweeps for a driven Cooper-pair box.
#[derive(Parser)]
#[command(version)]
struct Cli {
    mode: Mode,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; QWORK_WORKERS takes precedence. Defaults to all cores.
    #[arg(long)]
    workers: Option<usize>,
}

fn workers(cli: Option<usize>) -> Result<Option<usize>, String> {
    match std::env::var("QWORK_WORKERS") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| format!("QWORK_WORKERS: not a count: {v:?}")),
        Err(_) => Ok(cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = match workers(cli.workers) {
        Ok(w) => w,
        Err(msg) => {
            eprintln!("qwork: {msg}");
            return ExitCode::from(1);
        }
    };
    match run_files(cli.mode, &cli.config, &cli.out, workers) {
        Ok(out) if out.failures.is_empty() => ExitCode::SUCCESS,
        Ok(out) => {
            for f in &out.failures {
                eprintln!("qwork: point {} failed [{}]: {}", f.axis_value, f.code, f.message);
            }
            ExitCode::from(2)
        }
        Err(e @ RunError::Numerics(_)) => {
            eprintln!("qwork: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("qwork: {e}");
            ExitCode::from(1)
        }
    }
}
