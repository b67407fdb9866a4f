use std::fmt::Write as _;
use std::path::Path;

use oldroyd_core::diagnostics::{
    check_h_decay, check_psi_lp_bound, check_superposition, evolve_decomposition,
    write_decomposition_csv, DecompositionSample, DiagnosticsError, HDecayVerdict,
    PsiBoundVerdict, SuperpositionVerdict,
};
use oldroyd_core::galerkin::State;
use oldroyd_core::io_config::{build_initial, SimulationConfig};

use crate::{create_dir, exit, load_config, verdict, write_file, Outcome};

/// Relative tolerance of the superposition and ψ-bound checks.
pub const SPLIT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionVerdicts {
    pub superposition: SuperpositionVerdict,
    pub h_decay: HDecayVerdict,
    pub psi_bound: PsiBoundVerdict,
}

impl DecompositionVerdicts {
    /// The `e^{−at}` envelope is advisory and does not enter.
    pub fn passed(&self) -> bool {
        self.superposition.passed && self.h_decay.passed && self.psi_bound.passed
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "superposition = {} max_relative = {:.6e}",
            verdict(self.superposition.passed),
            self.superposition.max_relative
        );
        let _ = writeln!(
            s,
            "h_decay = {} max_ratio = {:.6e}",
            verdict(self.h_decay.passed),
            self.h_decay.max_ratio
        );
        let _ = writeln!(
            s,
            "h_envelope = {} max_deviation = {:.6e}{}",
            if self.h_decay.envelope_passed { "pass" } else { "warning" },
            self.h_decay.max_envelope_deviation,
            if self.h_decay.envelope_passed {
                ""
            } else {
                " (exp(-a t) envelope missed; stronger than the monotone bound)"
            }
        );
        let _ = writeln!(
            s,
            "psi_lp_bound = {} max_relative_excess = {:.6e}",
            verdict(self.psi_bound.passed),
            self.psi_bound.max_relative_excess
        );
        s
    }
}

pub fn decomposition_verdicts(
    samples: &[DecompositionSample],
    config: &SimulationConfig,
) -> DecompositionVerdicts {
    DecompositionVerdicts {
        superposition: check_superposition(samples, SPLIT_TOL),
        h_decay: check_h_decay(samples, config.params.a()),
        psi_bound: check_psi_lp_bound(
            samples,
            config.model.p_exp(),
            config.model.mu_tilde_bound(&config.params),
            SPLIT_TOL,
        ),
    }
}

pub(crate) fn decompose_with(
    config: &SimulationConfig,
    initial: &State,
    r_split: f64,
    out: &Path,
) -> Result<DecompositionVerdicts, Outcome> {
    let run = evolve_decomposition(
        initial,
        r_split,
        &config.model,
        &config.params,
        &config.run.settings(),
    )
    .map_err(|e| match e {
        DiagnosticsError::StepFailure { .. } | DiagnosticsError::BlowUp { .. } => {
            Outcome::new(exit::BLOWUP, format!("decomposition: {e}\n"))
        }
        _ => Outcome::usage(format!("decomposition: {e}\n")),
    })?;
    write_file(&out.join("decomposition.csv"), |w| {
        write_decomposition_csv(w, &run.samples)
    })?;
    Ok(decomposition_verdicts(&run.samples, config))
}

/// `oldroyd decompose`: co-integrate `ψ` and `H`, write `decomposition.csv`.
pub fn cmd_decompose(config_path: &Path, r_split: f64, out: &Path) -> Outcome {
    let config = match load_config(config_path) {
        Ok(c) => c,
        Err(o) => return o,
    };
    if !(r_split > 0.0 && r_split.is_finite()) {
        return Outcome::usage(format!("--R-split must be a finite value > 0, got {r_split}"));
    }
    if let Err(o) = create_dir(out) {
        return o;
    }
    let initial = build_initial(&config);
    match decompose_with(&config, &initial, r_split, out) {
        Ok(v) => {
            let mut report = format!("R_split = {r_split}\n");
            report.push_str(&v.summary());
            let passed = v.passed();
            let _ = writeln!(report, "status = {}", verdict(passed));
            Outcome::new(if passed { exit::PASS } else { exit::VERDICT }, report)
        }
        Err(o) => o,
    }
}
