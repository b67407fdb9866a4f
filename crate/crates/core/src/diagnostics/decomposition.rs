use crate::constitutive::{ConstitutiveModel, PhysicalParams};
use crate::galerkin::{
    drive, momentum_with, stress_with, weighted_sq, Forcing, Halt, Kinematics, OdeVector,
    RunSettings, State,
};
use crate::spectral::{
    l2_norm, leray_project, lp_norm, project_symmetric, sym_grad, to_physical, to_spectral,
    TensorField, VectorField,
};

use super::DiagnosticsError;

/// Main state augmented with the two parts of the stress splitting.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitState {
    pub v: VectorField,
    pub tau: TensorField,
    /// Forced part, started from the small values of `τ₀`.
    pub psi: TensorField,
    /// Homogeneous part, started from the large values of `τ₀`.
    pub h: TensorField,
    pub t: f64,
}

impl SplitState {
    pub fn main(&self) -> State {
        State {
            v: self.v.clone(),
            tau: self.tau.clone(),
            t: self.t,
        }
    }
}

impl OdeVector for SplitState {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        self.v.axpy(alpha, &x.v);
        self.tau.axpy(alpha, &x.tau);
        self.psi.axpy(alpha, &x.psi);
        self.h.axpy(alpha, &x.h);
    }

    /// Only `(v, τ)` enter, so the accepted time grid matches a plain run.
    fn error_norm(err: &Self, y0: &Self, y1: &Self, rtol: f64, atol: f64) -> f64 {
        let n = (err.v.coeffs().len() * 2 + err.tau.coeffs().len() * 4) as f64;
        let s = weighted_sq(err.v.coeffs(), y0.v.coeffs(), y1.v.coeffs(), rtol, atol)
            + weighted_sq(err.tau.coeffs(), y0.tau.coeffs(), y1.tau.coeffs(), rtol, atol);
        (s / n).sqrt()
    }

    fn project(&mut self) {
        self.v = leray_project(&self.v);
        for s in [&mut self.tau, &mut self.psi, &mut self.h] {
            s.symmetrize();
            s.remove_mean();
        }
    }

    fn set_time(&mut self, t: f64) {
        self.t = t;
    }
}

/// `ψ(0) = P̃[τ₀ χ{|τ₀| < R}]` on the collocation grid and `H(0) = τ₀ − ψ(0)`.
pub fn split_initial(initial: &State, r_split: f64) -> Result<SplitState, DiagnosticsError> {
    if !(r_split > 0.0) {
        return Err(DiagnosticsError::InvalidSplit(r_split));
    }
    let phys = to_physical(&initial.tau);
    let below = phys.magnitudes().filter(|&m| m < r_split).count();
    let total = phys.values().len();
    let psi = if below == total {
        initial.tau.clone()
    } else if below == 0 {
        TensorField::zeros(initial.grid())
    } else {
        let cut = phys.map(|x| {
            let m = crate::tensor::Mat2(*x).norm();
            if m < r_split {
                *x
            } else {
                [0.0; 4]
            }
        });
        let mut psi = project_symmetric(&to_spectral::<4>(&cut));
        psi.enforce_hermitian();
        psi
    };
    let h = &initial.tau - &psi;
    Ok(SplitState {
        v: initial.v.clone(),
        tau: initial.tau.clone(),
        psi,
        h,
        t: initial.t,
    })
}

fn split_rhs(
    y: &SplitState,
    model: &ConstitutiveModel,
    params: &PhysicalParams,
) -> Result<SplitState, crate::galerkin::GalerkinError> {
    let kin = Kinematics::new(&y.v);
    Ok(SplitState {
        v: momentum_with(&kin, &y.tau, model)?,
        tau: stress_with(&kin, &y.tau, model, params, Forcing::Source)?,
        psi: stress_with(&kin, &y.psi, model, params, Forcing::Source)?,
        h: stress_with(&kin, &y.h, model, params, Forcing::None)?,
        t: y.t,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionSample {
    pub t: f64,
    /// `‖τ‖₂`.
    pub norm_tau: f64,
    /// `‖ψ‖_p` with `p` the law exponent.
    pub norm_psi_p: f64,
    /// `‖H‖₂`.
    pub norm_h_2: f64,
    /// `‖ψ + H − τ‖₂`.
    pub superposition_residual: f64,
    /// `∫₀ᵗ ‖D(v)‖_p^p ds`.
    pub strain_lp_integral: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionRun {
    pub samples: Vec<DecompositionSample>,
    pub final_state: SplitState,
    pub r_split: f64,
}

fn strain_lp_pow(v: &VectorField, p_exp: f64) -> f64 {
    to_physical(&sym_grad(v)).lp_norm_pow(p_exp).unwrap_or(f64::NAN)
}

fn sample(y: &SplitState, p_exp: f64, strain_lp_integral: f64) -> DecompositionSample {
    let mut res = y.psi.clone();
    res.axpy(1.0, &y.h);
    res.axpy(-1.0, &y.tau);
    DecompositionSample {
        t: y.t,
        norm_tau: l2_norm(&y.tau),
        norm_psi_p: lp_norm(&y.psi, p_exp).unwrap_or(f64::NAN),
        norm_h_2: l2_norm(&y.h),
        superposition_residual: l2_norm(&res),
        strain_lp_integral,
    }
}

/// Co-integrates `(v, τ, ψ, H)` to `settings.t_end`, sampling after every
/// accepted step.
pub fn evolve_decomposition(
    initial: &State,
    r_split: f64,
    model: &ConstitutiveModel,
    params: &PhysicalParams,
    settings: &RunSettings,
) -> Result<DecompositionRun, DiagnosticsError> {
    let y0 = split_initial(initial, r_split)?;
    if !(settings.t_end >= initial.t) {
        return Err(DiagnosticsError::InvalidHorizon {
            t0: initial.t,
            t_end: settings.t_end,
        });
    }
    let p = model.p_exp();
    let mut samples = vec![sample(&y0, p, 0.0)];
    let mut integral = 0.0;
    let mut prev_rate = strain_lp_pow(&y0.v, p);
    let threshold = settings.control.blowup_threshold;

    let (outcome, _) = drive(
        &y0,
        initial.t,
        settings.t_end,
        settings.control,
        |_, y: &SplitState| split_rhs(y, model, params),
        |_, _, acc| {
            let energy = 0.5 * l2_norm(&acc.y.v).powi(2)
                + l2_norm(&acc.y.tau).powi(2) / (2.0 * params.b());
            if !energy.is_finite() || energy > threshold {
                return Err(Halt::BlowUp { t: acc.t, energy });
            }
            let mid = strain_lp_pow(&acc.midpoint.v, p);
            let end = strain_lp_pow(&acc.y.v, p);
            integral += acc.dt * (prev_rate + 4.0 * mid + end) / 6.0;
            prev_rate = end;
            samples.push(sample(&acc.y, p, integral));
            Ok(())
        },
    );
    match outcome {
        Ok(final_state) => Ok(DecompositionRun {
            samples,
            final_state,
            r_split,
        }),
        Err(Halt::TooSmall { t, dt }) => Err(DiagnosticsError::StepFailure { t, dt }),
        Err(Halt::Rhs { t, error }) => Err(DiagnosticsError::BlowUp {
            t,
            reason: error.to_string(),
        }),
        Err(Halt::BlowUp { t, energy }) => Err(DiagnosticsError::BlowUp {
            t,
            reason: format!("total energy {energy:e} exceeds the blow-up threshold"),
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionVerdict {
    pub passed: bool,
    /// Largest `‖ψ + H − τ‖₂ / ‖τ‖₂` (absolute where `τ = 0`).
    pub max_relative: f64,
}

pub fn check_superposition(samples: &[DecompositionSample], rel_tol: f64) -> SuperpositionVerdict {
    let mut passed = true;
    let mut max_relative = 0.0f64;
    for s in samples {
        passed &= s.superposition_residual <= rel_tol * s.norm_tau;
        let rel = if s.norm_tau > 0.0 {
            s.superposition_residual / s.norm_tau
        } else {
            s.superposition_residual
        };
        max_relative = max_relative.max(rel);
    }
    SuperpositionVerdict {
        passed: passed && max_relative.is_finite(),
        max_relative,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HDecayVerdict {
    /// `‖H(t)‖₂ ≤ ‖H(0)‖₂ (1 + 1e−8)` at every sample.
    pub passed: bool,
    pub max_ratio: f64,
    /// `‖H(t)‖₂` within `1e−4` relative of `e^{−at}‖H(0)‖₂`. Advisory only.
    pub envelope_passed: bool,
    pub max_envelope_deviation: f64,
}

pub fn check_h_decay(samples: &[DecompositionSample], a: f64) -> HDecayVerdict {
    let Some(first) = samples.first() else {
        return HDecayVerdict {
            passed: true,
            max_ratio: 0.0,
            envelope_passed: true,
            max_envelope_deviation: 0.0,
        };
    };
    let h0 = first.norm_h_2;
    let mut passed = true;
    let mut envelope_passed = true;
    let mut max_ratio = 0.0f64;
    let mut max_dev = 0.0f64;
    for s in samples {
        passed &= s.norm_h_2 <= h0 * (1.0 + 1e-8);
        let env = (-a * (s.t - first.t)).exp() * h0;
        let dev = (s.norm_h_2 - env).abs();
        envelope_passed &= dev <= 1e-4 * env;
        if h0 > 0.0 {
            max_ratio = max_ratio.max(s.norm_h_2 / h0);
            max_dev = max_dev.max(dev / env);
        } else {
            max_ratio = max_ratio.max(s.norm_h_2);
            max_dev = max_dev.max(dev);
        }
    }
    HDecayVerdict {
        passed,
        max_ratio,
        envelope_passed,
        max_envelope_deviation: max_dev,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiBoundVerdict {
    pub passed: bool,
    /// Largest `(‖ψ(t)‖_p − bound) / bound`.
    pub max_relative_excess: f64,
}

/// `‖ψ(t)‖_p ≤ ‖ψ(0)‖_p + sup|μ̃| t^{1−1/p} ‖D‖_{Lᵖ([0,t]×Ω)}` with
/// `rel_slack` relative to the right-hand side.
pub fn check_psi_lp_bound(
    samples: &[DecompositionSample],
    p_exp: f64,
    mu_tilde_sup: f64,
    rel_slack: f64,
) -> PsiBoundVerdict {
    let Some(first) = samples.first() else {
        return PsiBoundVerdict {
            passed: true,
            max_relative_excess: 0.0,
        };
    };
    let mut passed = true;
    let mut worst = f64::NEG_INFINITY;
    // the first sample meets the bound with equality
    let rest = if samples.len() > 1 { &samples[1..] } else { samples };
    for s in rest {
        let elapsed = s.t - first.t;
        let bound = first.norm_psi_p
            + mu_tilde_sup * elapsed.powf(1.0 - 1.0 / p_exp) * s.strain_lp_integral.powf(1.0 / p_exp);
        passed &= s.norm_psi_p <= bound * (1.0 + rel_slack);
        let excess = if bound > 0.0 {
            (s.norm_psi_p - bound) / bound
        } else {
            s.norm_psi_p
        };
        worst = worst.max(excess);
    }
    PsiBoundVerdict {
        passed: passed && worst.is_finite(),
        max_relative_excess: worst,
    }
}

