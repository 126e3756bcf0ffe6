//! Configuration, parameter sweeps and CSV output for `qwork-core`.

pub mod config;
mod error;
pub mod sweep;

use std::fs;
use std::path::Path;

pub use config::{parse_config, Axis, AxisKind, Initial, Mode, SweepConfig};
pub use error::{ConfigError, RunError};
pub use sweep::{run_sweep, PointFailure, SweepOutput};

/// Reads `config`, runs the sweep and writes the CSV to `out`.
pub fn run_files(mode: Mode, config: &Path, out: &Path, workers: Option<usize>) -> Result<SweepOutput, RunError> {
    let text = fs::read_to_string(config).map_err(|source| RunError::Read { path: config.into(), source })?;
    let cfg = parse_config(&text, mode)?;
    let output = run_sweep(&cfg, workers)?;
    fs::write(out, &output.csv).map_err(|source| RunError::Write { path: out.into(), source })?;
    Ok(output)
}
