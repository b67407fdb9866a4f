//! Constitutive laws `f` and `g`, the shear-dependent viscosity `μ`, the
//! physical parameter set and sampling verifiers for the growth,
//! monotonicity, coercivity and potential hypotheses on `f`.

mod law;
mod params;
mod verify;

pub use law::{mu, ConstitutiveModel, FKind, FLaw, SystemVariant, Table};
pub use params::{AdmissibilityCase, PhysicalParams};
pub use verify::{
    sample_symmetric, verify_coercivity, verify_growth, verify_monotonicity, verify_potential,
    CoercivityReport, GrowthReport, MonotonicityReport, PotentialReport, SamplingSpec, Violation,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstitutiveError {
    #[error("{name} = {value}: {rule}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        rule: String,
    },
    #[error("mu is undefined for |D|^2 = {0} < 0")]
    NegativeArgument(f64),
    #[error("invalid tabulated law: {0}")]
    InvalidTable(String),
    #[error("no closed-form potential is known for the {0} law")]
    UnsupportedPotential(&'static str),
}
