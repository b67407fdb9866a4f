//! Truncated Fourier representation on the torus `[0, 2π)²`.

mod field;
mod grid;
mod ops;
mod transform;

pub use field::{PhysicalField, ScalarField, SpectralField, TensorField, VectorField};
pub use grid::GridSpec;
pub use ops::{
    antisym_grad, divergence_residual, double_divergence, gradient, inner_product_l2, l2_norm,
    laplacian, leray_project, lp_norm, project_symmetric, sym_grad, tensor_divergence,
    tensor_partials,
};
pub use transform::{to_physical, to_spectral};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("grid size {0} must be an even integer >= 4")]
    InvalidGrid(usize),
    #[error("expected {expected} entries, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("Lp exponent must be >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("wavevector ({0}, {1}) is outside the retained set")]
    ModeOutOfRange(i64, i64),
}
