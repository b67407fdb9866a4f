//! Subcommands of the `oldroyd` binary. Each returns an [`Outcome`] whose
//! code is the process exit status.

mod converge;
mod decompose;
mod run;
mod verify;

use std::fmt::Write as _;
use std::path::Path;

use oldroyd_core::io_config::{parse_config_bytes, SimulationConfig};

pub use converge::{cmd_converge, converge, parse_levels, ConvergeReport};
pub use decompose::{cmd_decompose, decomposition_verdicts, DecompositionVerdicts};
pub use run::{cmd_run, evaluate_run, RunVerdicts, MAJORANT_SLACK, MONOTONE_SLACK, ENERGY_TOL};
pub use verify::{cmd_verify_hypotheses, verify_law, HypothesisReport};

pub mod exit {
    pub const PASS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const VERDICT: i32 = 2;
    pub const BLOWUP: i32 = 3;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    /// Human-readable report for stdout (or stderr when `code != 0`).
    pub report: String,
}

impl Outcome {
    fn new(code: i32, report: impl Into<String>) -> Self {
        Self {
            code,
            report: report.into(),
        }
    }

    fn usage(report: impl Into<String>) -> Self {
        Self::new(exit::USAGE, report)
    }
}

/// Reads and validates a config file; errors become a usage outcome.
pub fn load_config(path: &Path) -> Result<SimulationConfig, Outcome> {
    let bytes = std::fs::read(path)
        .map_err(|e| Outcome::usage(format!("cannot read config {}: {e}", path.display())))?;
    let config = parse_config_bytes(&bytes).map_err(|errs| {
        let mut msg = format!("invalid config {}:\n", path.display());
        for e in &errs.0 {
            let _ = writeln!(msg, "  {e}");
        }
        Outcome::usage(msg)
    })?;
    if config.dimension != 2 {
        return Err(Outcome::usage(format!(
            "config {} requests dimension {}, but only two-dimensional runs are implemented",
            path.display(),
            config.dimension
        )));
    }
    Ok(config)
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "FAIL"
    }
}

fn create_dir(out: &Path) -> Result<(), Outcome> {
    std::fs::create_dir_all(out)
        .map_err(|e| Outcome::usage(format!("cannot create output directory {}: {e}", out.display())))
}

fn write_file(path: &Path, write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<(), Outcome> {
    let mut buf = Vec::new();
    write(&mut buf)
        .and_then(|_| std::fs::write(path, &buf))
        .map_err(|e| Outcome::usage(format!("cannot write {}: {e}", path.display())))
}
