//! Differential operators, projections and L² / Lᵖ functionals on truncated
//! fields.

use num_complex::Complex64;

use super::{to_physical, ScalarField, SpectralError, SpectralField, TensorField, VectorField};
use super::GridSpec;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Leray projection `P = I − k kᵀ/|k|²`; also removes the mean.
pub fn leray_project(u: &VectorField) -> VectorField {
    u.map_modes(|(k1, k2), c| {
        if k1 == 0 && k2 == 0 {
            return [Complex64::default(); 2];
        }
        let (k1, k2) = (k1 as f64, k2 as f64);
        let kdotu = c[0] * k1 + c[1] * k2;
        let s = kdotu / (k1 * k1 + k2 * k2);
        [c[0] - s * k1, c[1] - s * k2]
    })
}

/// Largest `|k·û(k)|`.
pub fn divergence_residual(u: &VectorField) -> f64 {
    u.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (k1, k2) = u.grid().wavevector(i);
            (c[0] * k1 as f64 + c[1] * k2 as f64).norm()
        })
        .fold(0.0, f64::max)
}

/// Full velocity gradient `(∇v)_{ij} = ∂_j v_i`.
pub fn gradient(v: &VectorField) -> TensorField {
    v.map_modes(|(k1, k2), c| {
        let (k1, k2) = (k1 as f64, k2 as f64);
        [I * k1 * c[0], I * k2 * c[0], I * k1 * c[1], I * k2 * c[1]]
    })
}

/// Strain rate `D(v) = (∇v + ∇vᵀ)/2`.
pub fn sym_grad(v: &VectorField) -> TensorField {
    v.map_modes(|(k1, k2), c| {
        let (k1, k2) = (k1 as f64, k2 as f64);
        let off = I * 0.5 * (k2 * c[0] + k1 * c[1]);
        [I * k1 * c[0], off, off, I * k2 * c[1]]
    })
}

/// Spin `w(v) = (∇v − ∇vᵀ)/2`.
pub fn antisym_grad(v: &VectorField) -> TensorField {
    v.map_modes(|(k1, k2), c| {
        let (k1, k2) = (k1 as f64, k2 as f64);
        let off = I * 0.5 * (k2 * c[0] - k1 * c[1]);
        let zero = Complex64::default();
        [zero, off, -off, zero]
    })
}

/// Row divergence `(div τ)_i = Σ_j ∂_j τ_{ij}`.
pub fn tensor_divergence(tau: &TensorField) -> VectorField {
    tau.map_modes(|(k1, k2), c| {
        let (k1, k2) = (k1 as f64, k2 as f64);
        [I * (k1 * c[0] + k2 * c[1]), I * (k1 * c[2] + k2 * c[3])]
    })
}

/// `(div div F)` for a tensor field.
pub fn double_divergence(tau: &TensorField) -> ScalarField {
    tau.map_modes(|(k1, k2), c| {
        let (k1, k2) = (k1 as f64, k2 as f64);
        [-(c[0] * (k1 * k1) + (c[1] + c[2]) * (k1 * k2) + c[3] * (k2 * k2))]
    })
}

/// Spectral Laplacian.
pub fn laplacian<const C: usize>(u: &SpectralField<C>) -> SpectralField<C> {
    u.map_modes(|(k1, k2), c| {
        let k2n = (k1 * k1 + k2 * k2) as f64;
        c.map(|z| -z * k2n)
    })
}

/// Spatial gradient of each tensor component: result `[l]` holds `∂_l τ`.
pub fn tensor_partials(tau: &TensorField) -> [TensorField; 2] {
    let dx = tau.map_modes(|(k1, _), c| c.map(|z| I * k1 as f64 * z));
    let dy = tau.map_modes(|(_, k2), c| c.map(|z| I * k2 as f64 * z));
    [dx, dy]
}

/// Projection onto zero-mean symmetric tensors.
pub fn project_symmetric(tau: &TensorField) -> TensorField {
    let mut out = tau.clone();
    out.symmetrize();
    out.remove_mean();
    out
}

/// `(a, b) = ∫ a·b dx` evaluated by Parseval, `(2π)² Σ_k â(k)·conj(b̂(k))`.
pub fn inner_product_l2<const C: usize>(
    a: &SpectralField<C>,
    b: &SpectralField<C>,
) -> Result<f64, SpectralError> {
    a.check_same_grid(b)?;
    let mut sum = Complex64::default();
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        for c in 0..C {
            sum += x[c] * y[c].conj();
        }
    }
    let scale = GridSpec::domain_area();
    debug_assert!(
        sum.im.abs() <= 1e-12 * (1.0 + sum.norm()),
        "inner product of Hermitian fields has imaginary part {}",
        sum.im
    );
    Ok(scale * sum.re)
}

pub fn l2_norm<const C: usize>(a: &SpectralField<C>) -> f64 {
    let s: f64 = a
        .coeffs()
        .iter()
        .flat_map(|c| c.iter())
        .map(|z| z.norm_sqr())
        .sum();
    (GridSpec::domain_area() * s).sqrt()
}

/// Collocation Lᵖ norm with the Frobenius magnitude for tensors.
pub fn lp_norm<const C: usize>(field: &SpectralField<C>, p_exp: f64) -> Result<f64, SpectralError> {
    if !(p_exp >= 1.0) {
        return Err(SpectralError::InvalidExponent(p_exp));
    }
    to_physical(field).lp_norm(p_exp)
}
