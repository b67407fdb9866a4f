use crate::constitutive::{ConstitutiveModel, PhysicalParams};
use crate::diagnostics::{EnergyTerms, LedgerRow};

use super::integrator::{Accepted, DormandPrince, OdeVector, StepError};
use super::{full_rhs, GalerkinError, State, StepControl};

#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub t_end: f64,
    pub control: StepControl,
    /// Time between stored snapshots; `None` stores only the initial state.
    pub snapshot_interval: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_state: State,
    /// One row per accepted step.
    pub ledger: Vec<LedgerRow>,
    pub snapshots: Vec<State>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error("t_end = {t_end} precedes the initial time {t0}")]
    InvalidHorizon { t0: f64, t_end: f64 },
    #[error("step size {dt:e} fell below dt_min at t = {t}")]
    StepFailure {
        t: f64,
        dt: f64,
        partial: Box<RunResult>,
    },
    #[error("blow-up at t = {t}: {reason}")]
    BlowUp {
        t: f64,
        reason: String,
        partial: Box<RunResult>,
    },
}

impl RunError {
    pub fn partial(&self) -> Option<&RunResult> {
        match self {
            RunError::InvalidHorizon { .. } => None,
            RunError::StepFailure { partial, .. } | RunError::BlowUp { partial, .. } => Some(partial),
        }
    }
}

/// Why the driver stopped early.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Halt {
    Rhs { t: f64, error: GalerkinError },
    TooSmall { t: f64, dt: f64 },
    BlowUp { t: f64, energy: f64 },
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct DriveStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates from `t0` to `t_end`, calling `on_accept(t_prev, y_prev, step)`
/// after every accepted step.
pub(crate) fn drive<T: OdeVector>(
    y0: &T,
    t0: f64,
    t_end: f64,
    control: StepControl,
    mut rhs: impl FnMut(f64, &T) -> Result<T, GalerkinError>,
    mut on_accept: impl FnMut(f64, &T, &Accepted<T>) -> Result<(), Halt>,
) -> (Result<T, Halt>, DriveStats) {
    let mut stats = DriveStats::default();
    let mut stepper = DormandPrince::new(control);
    let (mut t, mut y) = (t0, y0.clone());
    while t < t_end {
        match stepper.step(t, &y, t_end, &mut rhs) {
            Ok(acc) => {
                stats.accepted += 1;
                stats.rejected += acc.rejected;
                if let Err(h) = on_accept(t, &y, &acc) {
                    return (Err(h), stats);
                }
                t = acc.t;
                y = acc.y;
            }
            Err(StepError::Rhs(error)) => return (Err(Halt::Rhs { t, error }), stats),
            Err(StepError::TooSmall { t, dt }) => return (Err(Halt::TooSmall { t, dt }), stats),
        }
    }
    (Ok(y), stats)
}

fn blown_up(terms: &EnergyTerms, control: &StepControl) -> bool {
    let e = terms.total();
    !e.is_finite() || e > control.blowup_threshold
}

/// Integrates the Galerkin system to `settings.t_end`, recording an energy
/// ledger row per accepted step. `observer` sees every accepted state.
pub fn run(
    initial: &State,
    model: &ConstitutiveModel,
    params: &PhysicalParams,
    settings: &RunSettings,
    mut observer: impl FnMut(&State, &LedgerRow),
) -> Result<RunResult, RunError> {
    let t0 = initial.t;
    if !(settings.t_end >= t0) {
        return Err(RunError::InvalidHorizon {
            t0,
            t_end: settings.t_end,
        });
    }
    let mut ledger = Vec::new();
    let mut snapshots = vec![initial.clone()];
    let mut next_snap = settings.snapshot_interval.map(|dt| t0 + dt);
    let mut last_valid = initial.clone();
    let mut prev_terms = EnergyTerms::of(initial, model, params);

    let (outcome, stats) = drive(
        initial,
        t0,
        settings.t_end,
        settings.control,
        |_, y: &State| full_rhs(y, model, params),
        |t_prev, _, acc| {
            let terms = EnergyTerms::of(&acc.y, model, params);
            if blown_up(&terms, &settings.control) {
                return Err(Halt::BlowUp {
                    t: acc.t,
                    energy: terms.total(),
                });
            }
            let mid = EnergyTerms::of(&acc.midpoint, model, params);
            let row = LedgerRow::from_terms(acc.t, acc.t - t_prev, &prev_terms, &mid, &terms, params);
            observer(&acc.y, &row);
            ledger.push(row);
            prev_terms = terms;
            last_valid = acc.y.clone();
            if let (Some(next), Some(dt)) = (next_snap.as_mut(), settings.snapshot_interval) {
                if acc.t >= *next - 1e-12 * dt {
                    snapshots.push(acc.y.clone());
                    while *next <= acc.t + 1e-12 * dt {
                        *next += dt;
                    }
                }
            }
            Ok(())
        },
    );

    let result = |final_state: State, ledger, snapshots| RunResult {
        final_state,
        ledger,
        snapshots,
        accepted_steps: stats.accepted,
        rejected_steps: stats.rejected,
    };
    match outcome {
        Ok(final_state) => Ok(result(final_state, ledger, snapshots)),
        Err(halt) => {
            let partial = Box::new(result(last_valid, ledger, snapshots));
            Err(match halt {
                Halt::TooSmall { t, dt } => RunError::StepFailure { t, dt, partial },
                Halt::Rhs { t, error } => RunError::BlowUp {
                    t,
                    reason: error.to_string(),
                    partial,
                },
                Halt::BlowUp { t, energy } => RunError::BlowUp {
                    t,
                    reason: format!("total energy {energy:e} exceeds the blow-up threshold"),
                    partial,
                },
            })
        }
    }
}

/// One accepted adaptive step from `state`, starting with `dt_init`.
pub fn step(
    state: &State,
    model: &ConstitutiveModel,
    params: &PhysicalParams,
    control: &StepControl,
) -> Result<(State, f64, LedgerRow), GalerkinError> {
    let mut stepper = DormandPrince::new(*control);
    let acc = stepper
        .step(state.t, state, f64::INFINITY, &mut |_, y: &State| full_rhs(y, model, params))
        .map_err(|e| match e {
            StepError::Rhs(e) => e,
            StepError::TooSmall { t, dt } => GalerkinError::StepFailure { t, dt },
        })?;
    let before = EnergyTerms::of(state, model, params);
    let after = EnergyTerms::of(&acc.y, model, params);
    if blown_up(&after, control) {
        return Err(GalerkinError::BlowUp {
            t: acc.t,
            energy: after.total(),
        });
    }
    let mid = EnergyTerms::of(&acc.midpoint, model, params);
    let row = LedgerRow::from_terms(acc.t, acc.dt, &before, &mid, &after, params);
    Ok((acc.y, acc.dt, row))
}
