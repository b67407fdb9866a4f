use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use oldroyd_cli::{cmd_converge, cmd_decompose, cmd_run, cmd_verify_hypotheses, exit, Outcome};

/// Fourier–Galerkin simulator for generalized Oldroyd-B flows on the torus.
#[derive(Parser)]
#[command(name = "oldroyd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a config and write the ledger, tail profile and snapshots.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides run.t_end.
        #[arg(long = "t-end")]
        t_end: Option<f64>,
    },
    /// Sample the constitutive law against its structural hypotheses.
    VerifyHypotheses {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
    },
    /// Cauchy differences of the final state across grid sizes.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "8,16,32,64")]
        levels: String,
    },
    /// Co-integrate the stress splitting and check its certificates.
    Decompose {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "R-split")]
        r_split: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::PASS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let Outcome { code, mut report } = match cli.command {
        Command::Run { config, out, t_end } => cmd_run(&config, &out, t_end),
        Command::VerifyHypotheses {
            config,
            samples,
            radius,
        } => cmd_verify_hypotheses(&config, samples, radius),
        Command::Converge { config, levels } => cmd_converge(&config, &levels),
        Command::Decompose {
            config,
            r_split,
            out,
        } => cmd_decompose(&config, r_split, &out),
    };
    if !report.ends_with('\n') {
        report.push('\n');
    }
    if code == exit::PASS {
        print!("{report}");
    } else {
        eprint!("{report}");
    }
    ExitCode::from(code as u8)
}
