//! Fourier–Galerkin simulation of generalized Oldroyd-B flows on the
//! two-dimensional torus, with runtime checks of the energy estimate, the
//! stress splitting `τ = ψ + H` and the constitutive hypotheses.

pub mod spectral;
pub mod constitutive;
pub mod tensor;
pub mod galerkin;
pub mod diagnostics;
pub mod io_config;
