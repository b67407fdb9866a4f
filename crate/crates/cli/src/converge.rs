use std::fmt::Write as _;
use std::path::Path;

use oldroyd_core::galerkin::{run, RunError, State};
use oldroyd_core::io_config::{build_initial, SimulationConfig};
use oldroyd_core::spectral::{l2_norm, GridSpec};

use crate::{exit, load_config, verdict, Outcome};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergeReport {
    pub levels: Vec<usize>,
    /// `‖v^{(next)}(T) − v^{(this)}(T)‖₂` on the coarse mode set, per pair.
    pub dv: Vec<f64>,
    pub dtau: Vec<f64>,
}

fn decreasing(d: &[f64]) -> bool {
    d.iter().all(|&x| x == 0.0) || d.windows(2).all(|w| w[1] < w[0])
}

impl ConvergeReport {
    pub fn passed(&self) -> bool {
        self.dv.iter().chain(&self.dtau).all(|x| x.is_finite())
            && decreasing(&self.dv)
            && decreasing(&self.dtau)
    }
}

/// Parses a comma-separated list of at least two increasing grid sizes.
pub fn parse_levels(text: &str) -> Result<Vec<usize>, String> {
    let levels = text
        .split(',')
        .map(|s| {
            let s = s.trim();
            let n: usize = s.parse().map_err(|_| format!("bad level {s:?}"))?;
            GridSpec::new(n).map_err(|e| format!("level {n}: {e}"))?;
            Ok(n)
        })
        .collect::<Result<Vec<_>, String>>()?;
    if levels.len() < 2 {
        return Err("--levels needs at least two grid sizes".into());
    }
    if !levels.windows(2).all(|w| w[0] < w[1]) {
        return Err("--levels must be strictly increasing".into());
    }
    Ok(levels)
}

/// Runs `config` at every level (in parallel) and compares consecutive
/// final states on the coarser mode set.
pub fn converge(config: &SimulationConfig, levels: &[usize]) -> Result<ConvergeReport, RunError> {
    let finals: Vec<Result<State, RunError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = levels
            .iter()
            .map(|&n| {
                scope.spawn(move || {
                    let c = config.with_grid(GridSpec::new(n).expect("validated level"));
                    let initial = build_initial(&c);
                    run(&initial, &c.model, &c.params, &c.run.settings(), |_, _| {})
                        .map(|r| r.final_state)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("level thread panicked")).collect()
    });
    let finals = finals.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut dv = Vec::new();
    let mut dtau = Vec::new();
    for pair in finals.windows(2) {
        let (coarse, fine) = (&pair[0], &pair[1]);
        let g = coarse.grid();
        dv.push(l2_norm(&(&fine.v.restrict_to(g) - &coarse.v)));
        dtau.push(l2_norm(&(&fine.tau.restrict_to(g) - &coarse.tau)));
    }
    Ok(ConvergeReport {
        levels: levels.to_vec(),
        dv,
        dtau,
    })
}

/// `oldroyd converge`: Cauchy differences across grid levels.
pub fn cmd_converge(config_path: &Path, levels: &str) -> Outcome {
    let levels = match parse_levels(levels) {
        Ok(l) => l,
        Err(e) => return Outcome::usage(e),
    };
    let config = match load_config(config_path) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let report = match converge(&config, &levels) {
        Ok(r) => r,
        Err(e) => return Outcome::new(exit::BLOWUP, format!("run failed: {e}\n")),
    };
    let mut out = String::from("coarse,fine,diff_v,diff_tau\n");
    for (i, (dv, dt)) in report.dv.iter().zip(&report.dtau).enumerate() {
        let _ = writeln!(out, "{},{},{dv:.16e},{dt:.16e}", levels[i], levels[i + 1]);
    }
    let passed = report.passed();
    let _ = writeln!(out, "status = {}", verdict(passed));
    Outcome::new(if passed { exit::PASS } else { exit::VERDICT }, out)
}
