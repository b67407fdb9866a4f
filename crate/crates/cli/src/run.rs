use std::fmt::Write as _;
use std::path::Path;

use oldroyd_core::constitutive::{AdmissibilityCase, SystemVariant};
use oldroyd_core::diagnostics::{
    check_energy_inequality, check_energy_monotone, check_young_majorant, tail_profile,
    write_ledger_csv, write_tail_csv, EnergyTerms, EnergyVerdict, LedgerRow, MajorantVerdict,
    MonotoneVerdict, TailRow, INTERPOLATION_CONSTANT,
};
use oldroyd_core::galerkin::{run, RunError, RunResult, State};
use oldroyd_core::io_config::{build_initial, write_snapshot, SimulationConfig};
use oldroyd_core::spectral::l2_norm;

use crate::decompose::decompose_with;
use crate::{create_dir, exit, load_config, verdict, write_file, Outcome};

/// Energy-inequality tolerance, relative to the initial energy.
pub const ENERGY_TOL: f64 = 1e-6;
/// Slack of the monotone-energy check, relative to the initial energy.
pub const MONOTONE_SLACK: f64 = 1e-8;
/// Absolute slack of the Young majorant.
pub const MAJORANT_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct RunVerdicts {
    pub initial_energy: f64,
    pub energy: EnergyVerdict,
    /// Only checked for `λ = 0` with variant `S2`.
    pub monotone: Option<MonotoneVerdict>,
    pub majorant: MajorantVerdict,
    pub tail_ok: bool,
}

impl RunVerdicts {
    pub fn passed(&self) -> bool {
        self.energy.passed
            && self.monotone.map_or(true, |m| m.passed)
            && self.majorant.max_excess_net <= MAJORANT_SLACK
            && self.tail_ok
    }
}

fn tails_consistent(row: &TailRow, tau_sq: f64) -> bool {
    row.tails.windows(2).all(|w| w[1] <= w[0])
        && row.tails.iter().all(|&t| t <= tau_sq * (1.0 + 1e-12) + 1e-300)
}

/// Energy, majorant and tail verdicts for a finished run.
pub fn evaluate_run(
    config: &SimulationConfig,
    initial: &State,
    ledger: &[LedgerRow],
    tails: &[(TailRow, f64)],
) -> RunVerdicts {
    let (model, params) = (&config.model, &config.params);
    let e0 = EnergyTerms::of(initial, model, params).total();
    let energy = check_energy_inequality(ledger, params, INTERPOLATION_CONSTANT, ENERGY_TOL * e0)
        .expect("validated parameters are admissible");
    let monotone = (params.lambda() == 0.0 && model.variant() == SystemVariant::S2)
        .then(|| check_energy_monotone(e0, ledger, MONOTONE_SLACK * e0));
    RunVerdicts {
        initial_energy: e0,
        energy,
        monotone,
        majorant: check_young_majorant(ledger, MAJORANT_SLACK),
        tail_ok: tails.iter().all(|(row, sq)| tails_consistent(row, *sq)),
    }
}

fn case_label(case: AdmissibilityCase) -> &'static str {
    match case {
        AdmissibilityCase::StrongDissipation => "i",
        AdmissibilityCase::SmallCoupling => "ii",
    }
}

fn thin(ledger: &[LedgerRow], t0: f64, interval: Option<f64>) -> Vec<LedgerRow> {
    let Some(dt) = interval else {
        return ledger.to_vec();
    };
    let mut next = t0 + dt;
    let mut out = Vec::new();
    for (i, row) in ledger.iter().enumerate() {
        if row.t >= next - 1e-12 * dt || i + 1 == ledger.len() {
            out.push(*row);
            while next <= row.t + 1e-12 * dt {
                next += dt;
            }
        }
    }
    out
}

fn header(config: &SimulationConfig) -> String {
    let p = &config.params;
    let m = &config.model;
    let mut s = String::new();
    let _ = writeln!(s, "gamma = {:.16e}", p.gamma());
    let _ = writeln!(
        s,
        "admissibility = case ({}) {}",
        case_label(p.admissibility()),
        p.admissibility().describe()
    );
    let _ = writeln!(
        s,
        "model = {} p = {} variant = {} lambda = {} r = {}",
        m.law().kind.name(),
        m.p_exp(),
        m.variant().name(),
        m.lambda(),
        m.r_exp()
    );
    let _ = writeln!(
        s,
        "a = {:.16e} b = {:.16e} nu = {} grid = {} (K = {})",
        p.a(),
        p.b(),
        p.nu_mono(),
        config.grid.n(),
        config.grid.cutoff()
    );
    s
}

fn write_outputs(
    out: &Path,
    config: &SimulationConfig,
    result: &RunResult,
    tails: &[(TailRow, f64)],
) -> Result<(), Outcome> {
    let rows = thin(&result.ledger, 0.0, config.run.ledger_interval);
    write_file(&out.join("ledger.csv"), |w| write_ledger_csv(w, &rows))?;
    let tail_rows: Vec<TailRow> = tails.iter().map(|(r, _)| r.clone()).collect();
    write_file(&out.join("tail.csv"), |w| write_tail_csv(w, &tail_rows))?;
    for (i, snap) in result.snapshots.iter().enumerate() {
        let path = out.join(format!("snapshot_{i:04}.bin"));
        write_snapshot(&path, snap)
            .map_err(|e| Outcome::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let path = out.join("final.bin");
    write_snapshot(&path, &result.final_state)
        .map_err(|e| Outcome::usage(format!("cannot write {}: {e}", path.display())))
}

/// `oldroyd run`: integrate, write `ledger.csv`, `tail.csv`, snapshots and
/// `run_summary.txt`.
pub fn cmd_run(config_path: &Path, out: &Path, t_end: Option<f64>) -> Outcome {
    let mut config = match load_config(config_path) {
        Ok(c) => c,
        Err(o) => return o,
    };
    if let Some(t) = t_end {
        if !(t >= 0.0 && t.is_finite()) {
            return Outcome::usage(format!("--t-end must be a finite value >= 0, got {t}"));
        }
        config.run.t_end = t;
    }
    if let Err(o) = create_dir(out) {
        return o;
    }
    let (model, params) = (&config.model, &config.params);
    let initial = build_initial(&config);
    let thresholds = config.diagnostics.tail_thresholds.clone();
    let tail_of = |s: &State| (tail_profile(s.t, &s.tau, &thresholds), l2_norm(&s.tau).powi(2));
    let mut tails = vec![tail_of(&initial)];
    let outcome = run(&initial, model, params, &config.run.settings(), |s, _| {
        tails.push(tail_of(s))
    });

    let mut summary = header(&config);
    let result = match outcome {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(summary, "status = blow-up: {e}");
            if let Some(partial) = e.partial() {
                let _ = write_outputs(out, &config, partial, &tails);
            }
            let _ = std::fs::write(out.join("run_summary.txt"), &summary);
            let code = match e {
                RunError::InvalidHorizon { .. } => exit::USAGE,
                _ => exit::BLOWUP,
            };
            return Outcome::new(code, summary);
        }
    };
    if let Err(o) = write_outputs(out, &config, &result, &tails) {
        return o;
    }

    let v = evaluate_run(&config, &initial, &result.ledger, &tails);
    let last = EnergyTerms::of(&result.final_state, model, params);
    let _ = writeln!(
        summary,
        "t_end = {} accepted_steps = {} rejected_steps = {}",
        result.final_state.t, result.accepted_steps, result.rejected_steps
    );
    let _ = writeln!(
        summary,
        "final |v|_2 = {:.16e} |tau|_2 = {:.16e} energy = {:.16e} (initial {:.16e})",
        l2_norm(&result.final_state.v),
        l2_norm(&result.final_state.tau),
        last.total(),
        v.initial_energy
    );
    let _ = writeln!(
        summary,
        "energy_inequality = {} max_violation = {:.6e} tol = {:.6e} bound = {:.6e}",
        verdict(v.energy.passed),
        v.energy.max_violation,
        v.energy.tol,
        v.energy.bound
    );
    if let Some(m) = v.monotone {
        let _ = writeln!(
            summary,
            "energy_monotone = {} max_increase = {:.6e}",
            verdict(m.passed),
            m.max_increase
        );
    }
    let _ = writeln!(
        summary,
        "young_majorant = {} max_excess_net = {:.6e} max_excess_g_work = {:.6e}",
        verdict(v.majorant.max_excess_net <= MAJORANT_SLACK),
        v.majorant.max_excess_net,
        v.majorant.max_excess
    );
    let _ = writeln!(summary, "tail_profile = {}", verdict(v.tail_ok));

    let mut passed = v.passed();
    if config.diagnostics.enable_decomposition {
        match decompose_with(&config, &initial, config.diagnostics.r_split, out) {
            Ok(d) => {
                summary.push_str(&d.summary());
                passed &= d.passed();
            }
            Err(o) => {
                summary.push_str(&o.report);
                let _ = std::fs::write(out.join("run_summary.txt"), &summary);
                return Outcome::new(o.code, summary);
            }
        }
    }
    let _ = writeln!(summary, "status = {}", verdict(passed));
    if let Err(o) = write_file(&out.join("run_summary.txt"), |w| {
        w.extend_from_slice(summary.as_bytes());
        Ok(())
    }) {
        return o;
    }
    Outcome::new(if passed { exit::PASS } else { exit::VERDICT }, summary)
}

