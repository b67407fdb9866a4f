use num_complex::Complex64;

use crate::spectral::{
    divergence_residual, leray_project, project_symmetric, GridSpec, TensorField, VectorField,
};

use super::integrator::OdeVector;

/// Galerkin state: velocity and extra-stress coefficients at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub v: VectorField,
    pub tau: TensorField,
    pub t: f64,
}

impl State {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            v: VectorField::zeros(grid),
            tau: TensorField::zeros(grid),
            t: 0.0,
        }
    }

    /// Projects arbitrary coefficients onto the admissible space
    /// (divergence-free zero-mean `v`, symmetric zero-mean `τ`).
    pub fn new(v: &VectorField, tau: &TensorField, t: f64) -> Self {
        let mut v = leray_project(v);
        v.enforce_hermitian();
        let mut tau = project_symmetric(tau);
        tau.enforce_hermitian();
        Self { v, tau, t }
    }

    pub fn grid(&self) -> GridSpec {
        self.v.grid()
    }

    /// `max_k |k·v̂(k)| / max_k |v̂(k)|` (zero for the zero field).
    pub fn divergence_defect(&self) -> f64 {
        relative(divergence_residual(&self.v), self.v.max_abs())
    }

    pub fn symmetry_defect(&self) -> f64 {
        relative(self.tau.symmetry_defect(), self.tau.max_abs())
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.tau.is_finite() && self.t.is_finite()
    }
}

fn relative(x: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        x
    } else {
        x / scale
    }
}

pub(crate) fn weighted_sq<const C: usize>(
    err: &[[Complex64; C]],
    y0: &[[Complex64; C]],
    y1: &[[Complex64; C]],
    rtol: f64,
    atol: f64,
) -> f64 {
    let mut s = 0.0;
    for ((e, a), b) in err.iter().zip(y0).zip(y1) {
        for c in 0..C {
            let sc = atol + rtol * a[c].norm().max(b[c].norm());
            s += (e[c].norm() / sc).powi(2);
        }
    }
    s
}

impl OdeVector for State {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        self.v.axpy(alpha, &x.v);
        self.tau.axpy(alpha, &x.tau);
    }

    fn error_norm(err: &Self, y0: &Self, y1: &Self, rtol: f64, atol: f64) -> f64 {
        let n = (err.v.coeffs().len() * 2 + err.tau.coeffs().len() * 4) as f64;
        let s = weighted_sq(err.v.coeffs(), y0.v.coeffs(), y1.v.coeffs(), rtol, atol)
            + weighted_sq(err.tau.coeffs(), y0.tau.coeffs(), y1.tau.coeffs(), rtol, atol);
        (s / n).sqrt()
    }

    fn project(&mut self) {
        self.v = leray_project(&self.v);
        self.tau.symmetrize();
        self.tau.remove_mean();
    }

    fn set_time(&mut self, t: f64) {
        self.t = t;
    }
}
