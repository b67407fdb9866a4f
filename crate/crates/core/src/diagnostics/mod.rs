//! Runtime checks of the energy estimate, the stress splitting `τ = ψ + H`
//! and the equi-integrability tail, plus their CSV output.

mod csv;
mod decomposition;
mod ledger;
mod tail;

pub use csv::{write_decomposition_csv, write_ledger_csv, write_tail_csv};
pub use decomposition::{
    check_h_decay, check_psi_lp_bound, check_superposition, evolve_decomposition, split_initial,
    DecompositionRun, DecompositionSample, HDecayVerdict, PsiBoundVerdict, SplitState,
    SuperpositionVerdict,
};
pub use ledger::{
    check_energy_inequality, check_energy_monotone, check_young_majorant, ledger_row, EnergyTerms,
    EnergyVerdict, LedgerRow, MajorantVerdict, MonotoneVerdict, INTERPOLATION_CONSTANT,
};
pub use tail::{tail_profile, TailRow};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiagnosticsError {
    #[error("parameters are not admissible: gamma = {0} must be < 1")]
    Inadmissible(f64),
    #[error("R_split must be > 0, got {0}")]
    InvalidSplit(f64),
    #[error("t_end = {t_end} precedes the initial time {t0}")]
    InvalidHorizon { t0: f64, t_end: f64 },
    #[error("step size {dt:e} fell below dt_min at t = {t}")]
    StepFailure { t: f64, dt: f64 },
    #[error("blow-up at t = {t}: {reason}")]
    BlowUp { t: f64, reason: String },
}
