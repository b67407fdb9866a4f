use crate::constitutive::ConstitutiveModel;
use crate::spectral::{
    double_divergence, sym_grad, to_physical, to_spectral, ScalarField, TensorField,
};
use crate::tensor::Mat2;

use super::State;

/// The tensor `F = f(D(v)) − v⊗v + τ` whose double divergence drives the
/// pressure.
pub fn pressure_source(state: &State, model: &ConstitutiveModel) -> TensorField {
    let d = to_physical(&sym_grad(&state.v));
    let v = to_physical(&state.v);
    let mut pointwise = d.map(|d| model.f_of_d(&Mat2(*d)).0);
    for (f, u) in pointwise.values_mut().iter_mut().zip(v.values()) {
        f[0] -= u[0] * u[0];
        f[1] -= u[0] * u[1];
        f[2] -= u[1] * u[0];
        f[3] -= u[1] * u[1];
    }
    let mut source = to_spectral(&pointwise);
    source.axpy(1.0, &state.tau);
    source
}

/// Zero-mean solution of `Δp = div div F`. Used for output only; the
/// dynamics eliminate the pressure by projection.
pub fn reconstruct_pressure(state: &State, model: &ConstitutiveModel) -> ScalarField {
    let rhs = double_divergence(&pressure_source(state, model));
    rhs.map_modes(|(k1, k2), c| {
        let k2n = (k1 * k1 + k2 * k2) as f64;
        if k2n == 0.0 {
            [Default::default()]
        } else {
            [-c[0] / k2n]
        }
    })
}
