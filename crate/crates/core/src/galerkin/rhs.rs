//! Pseudo-spectral assembly of the Galerkin right-hand side.
//!
//! Products are formed on the collocation grid and truncated back to the
//! retained square; the momentum equation is Leray-projected and the stress
//! equation is projected onto zero-mean symmetric tensors.

use crate::constitutive::{ConstitutiveModel, PhysicalParams, SystemVariant};
use crate::spectral::{
    leray_project, project_symmetric, sym_grad, tensor_divergence, tensor_partials, to_physical,
    to_spectral, PhysicalField, TensorField, VectorField,
};
use crate::tensor::Mat2;

use super::{GalerkinError, State};

/// Pointwise kinematics of a velocity field on the collocation grid.
pub(crate) struct Kinematics {
    pub v: PhysicalField<2>,
    pub strain_hat: TensorField,
    pub strain: PhysicalField<4>,
    pub spin: PhysicalField<4>,
    grad: PhysicalField<4>,
}

impl Kinematics {
    pub fn new(v: &VectorField) -> Self {
        let grad = to_physical(&crate::spectral::gradient(v));
        let strain = grad.map(|g| {
            let off = 0.5 * (g[1] + g[2]);
            [g[0], off, off, g[3]]
        });
        let spin = grad.map(|g| {
            let off = 0.5 * (g[1] - g[2]);
            [0.0, off, -off, 0.0]
        });
        Self {
            v: to_physical(v),
            strain_hat: sym_grad(v),
            strain,
            spin,
            grad,
        }
    }

    /// `(v·∇)v` on the grid.
    fn convection(&self) -> PhysicalField<2> {
        let mut out = PhysicalField::<2>::zeros(self.v.grid());
        for ((o, v), g) in out
            .values_mut()
            .iter_mut()
            .zip(self.v.values())
            .zip(self.grad.values())
        {
            o[0] = v[0] * g[0] + v[1] * g[1];
            o[1] = v[0] * g[2] + v[1] * g[3];
        }
        out
    }
}

fn non_finite(what: &'static str) -> GalerkinError {
    GalerkinError::NonFinite(what)
}

/// `P[−v·∇v + div f(D(v)) + div τ]`.
pub(crate) fn momentum_with(
    kin: &Kinematics,
    tau: &TensorField,
    model: &ConstitutiveModel,
) -> Result<VectorField, GalerkinError> {
    let stress = kin.strain.map(|d| model.f_of_d(&Mat2(*d)).0);
    if stress.values().iter().flatten().any(|x| !x.is_finite()) {
        return Err(non_finite("f(D(v))"));
    }
    let mut rhs = tensor_divergence(&to_spectral(&stress));
    rhs.axpy(1.0, &tensor_divergence(tau));
    rhs.axpy(-1.0, &to_spectral(&kin.convection()));
    let out = leray_project(&rhs);
    if !out.is_finite() {
        return Err(non_finite("momentum right-hand side"));
    }
    Ok(out)
}

/// Which source term drives a stress-type equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Forcing {
    /// `g(D(v))` (or `bD(v)` for `S2`).
    Source,
    /// Homogeneous equation.
    None,
}

/// `−v·∇σ − aσ − (σw − wσ) + g(D)` with the rotation bracket only for
/// variant `S`, projected onto zero-mean symmetric tensors.
pub(crate) fn stress_with(
    kin: &Kinematics,
    sigma: &TensorField,
    model: &ConstitutiveModel,
    params: &PhysicalParams,
    forcing: Forcing,
) -> Result<TensorField, GalerkinError> {
    let variant = model.variant();
    let [dx, dy] = tensor_partials(sigma);
    let (dx, dy) = (to_physical(&dx), to_physical(&dy));
    let sigma_phys = variant.has_rotation().then(|| to_physical(sigma));
    let pointwise_g = forcing == Forcing::Source && variant != SystemVariant::S2;

    let mut acc = PhysicalField::<4>::zeros(sigma.grid());
    for (idx, out) in acc.values_mut().iter_mut().enumerate() {
        let v = kin.v.values()[idx];
        let (gx, gy) = (dx.values()[idx], dy.values()[idx]);
        let mut m = Mat2([
            -(v[0] * gx[0] + v[1] * gy[0]),
            -(v[0] * gx[1] + v[1] * gy[1]),
            -(v[0] * gx[2] + v[1] * gy[2]),
            -(v[0] * gx[3] + v[1] * gy[3]),
        ]);
        if let Some(s) = &sigma_phys {
            let w = Mat2(kin.spin.values()[idx]);
            m = m - Mat2(s.values()[idx]).corotation(&w);
        }
        if pointwise_g {
            m = m + model.g_of_d(&Mat2(kin.strain.values()[idx]), params);
        }
        *out = m.0;
    }
    if acc.values().iter().flatten().any(|x| !x.is_finite()) {
        return Err(non_finite("stress right-hand side"));
    }
    let mut rhs = to_spectral(&acc);
    rhs.axpy(-params.a(), sigma);
    if forcing == Forcing::Source && variant == SystemVariant::S2 {
        rhs.axpy(params.b(), &kin.strain_hat);
    }
    Ok(project_symmetric(&rhs))
}

/// Leray-projected momentum right-hand side.
pub fn momentum_rhs(state: &State, model: &ConstitutiveModel) -> Result<VectorField, GalerkinError> {
    momentum_with(&Kinematics::new(&state.v), &state.tau, model)
}

/// Stress right-hand side, symmetric and zero-mean.
pub fn stress_rhs(
    state: &State,
    model: &ConstitutiveModel,
    params: &PhysicalParams,
) -> Result<TensorField, GalerkinError> {
    stress_with(&Kinematics::new(&state.v), &state.tau, model, params, Forcing::Source)
}

/// Both right-hand sides sharing one kinematics evaluation.
pub(crate) fn full_rhs(
    state: &State,
    model: &ConstitutiveModel,
    params: &PhysicalParams,
) -> Result<State, GalerkinError> {
    let kin = Kinematics::new(&state.v);
    Ok(State {
        v: momentum_with(&kin, &state.tau, model)?,
        tau: stress_with(&kin, &state.tau, model, params, Forcing::Source)?,
        t: state.t,
    })
}

/// Pure transport `−v·∇σ`, projected onto zero-mean symmetric tensors.
pub fn transport_rhs(v: &VectorField, sigma: &TensorField) -> TensorField {
    let kin = Kinematics::new(v);
    let [dx, dy] = tensor_partials(sigma);
    let (dx, dy) = (to_physical(&dx), to_physical(&dy));
    let mut acc = PhysicalField::<4>::zeros(sigma.grid());
    for (idx, out) in acc.values_mut().iter_mut().enumerate() {
        let v = kin.v.values()[idx];
        let (gx, gy) = (dx.values()[idx], dy.values()[idx]);
        for c in 0..4 {
            out[c] = -(v[0] * gx[c] + v[1] * gy[c]);
        }
    }
    project_symmetric(&to_spectral(&acc))
}
