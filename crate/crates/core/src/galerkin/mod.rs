//! Galerkin ODE system for `(v, τ)` and its time integration.

mod integrator;
mod pressure;
mod rhs;
mod run;
mod state;

pub use integrator::{Accepted, DormandPrince, OdeVector, StepError};
pub use pressure::{pressure_source, reconstruct_pressure};
pub use rhs::{momentum_rhs, stress_rhs, transport_rhs};
pub use run::{run, step, RunError, RunResult, RunSettings};
pub use state::State;

pub(crate) use rhs::{full_rhs, momentum_with, stress_with, Forcing, Kinematics};
pub(crate) use run::{drive, Halt};
pub(crate) use state::weighted_sq;

/// Adaptive step-size settings. Setting `dt_min == dt_max` selects fixed
/// steps of that size with error control disabled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub dt_init: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Total energy above which a run is aborted.
    pub blowup_threshold: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            dt_init: 1e-3,
            dt_min: 1e-10,
            dt_max: 0.1,
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            blowup_threshold: 1e12,
        }
    }
}

impl StepControl {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.dt_min > 0.0 && self.dt_min <= self.dt_init && self.dt_init <= self.dt_max) {
            return Err(format!(
                "step sizes must satisfy 0 < dt_min <= dt_init <= dt_max (got {}, {}, {})",
                self.dt_min, self.dt_init, self.dt_max
            ));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err("rel_tol and abs_tol must be > 0".into());
        }
        if !(self.blowup_threshold > 0.0) {
            return Err("blowup_threshold must be > 0".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GalerkinError {
    #[error("non-finite values in {0}")]
    NonFinite(&'static str),
    #[error("step size {dt:e} fell below dt_min at t = {t}")]
    StepFailure { t: f64, dt: f64 },
    #[error("blow-up at t = {t}: total energy {energy:e}")]
    BlowUp { t: f64, energy: f64 },
}
