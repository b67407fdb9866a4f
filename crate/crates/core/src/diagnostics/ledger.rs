use std::f64::consts::PI;

use crate::constitutive::{ConstitutiveModel, PhysicalParams};
use crate::galerkin::State;
use crate::spectral::{inner_product_l2, l2_norm, sym_grad, to_physical};
use crate::tensor::Mat2;

use super::DiagnosticsError;

/// `C(|Ω|)` in `‖D‖₂² ≤ C(|Ω|) + ‖D‖_p^p`.
///
/// Pointwise `s² ≤ 1 + s^p` for `p ≥ 2` (split at `s = 1`), so integrating
/// over the torus gives the constant `|Ω| = 4π²`.
pub const INTERPOLATION_CONSTANT: f64 = 4.0 * PI * PI;

/// Energy functionals of one state.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EnergyTerms {
    pub kinetic: f64,
    pub stress_energy: f64,
    pub dissipation_p: f64,
    pub dissipation_2: f64,
    pub relax: f64,
    pub coupling: f64,
    pub g_work: f64,
}

impl EnergyTerms {
    pub fn of(state: &State, model: &ConstitutiveModel, params: &PhysicalParams) -> Self {
        let nu = params.nu_mono();
        let (a, b) = (params.a(), params.b());
        let d_hat = sym_grad(&state.v);
        let d = to_physical(&d_hat);
        let tau = to_physical(&state.tau);
        let cell = state.grid().cell_area();

        let mut dp = 0.0;
        let mut gw = 0.0;
        for (dv, tv) in d.values().iter().zip(tau.values()) {
            let dm = Mat2(*dv);
            dp += dm.norm().powf(model.p_exp());
            gw += model.g_of_d(&dm, params).ddot(&Mat2(*tv));
        }
        let tau_sq = l2_norm(&state.tau).powi(2);
        let d_sq = l2_norm(&d_hat).powi(2);
        Self {
            kinetic: 0.5 * l2_norm(&state.v).powi(2),
            stress_energy: tau_sq / (2.0 * b),
            dissipation_p: nu * dp * cell,
            dissipation_2: nu * d_sq,
            relax: a / b * tau_sq,
            coupling: -inner_product_l2(&state.tau, &d_hat).expect("same grid"),
            g_work: gw * cell / b,
        }
    }

    /// `½‖v‖₂² + (1/2b)‖τ‖₂²`.
    pub fn total(&self) -> f64 {
        self.kinetic + self.stress_energy
    }
}

/// One ledger row. Energies are end-of-step values; rate terms are Simpson
/// averages over the step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LedgerRow {
    pub t: f64,
    pub dt: f64,
    pub kinetic: f64,
    pub stress_energy: f64,
    pub dissipation_p: f64,
    pub dissipation_2: f64,
    pub relax: f64,
    pub coupling: f64,
    pub g_work: f64,
    /// Difference quotient of `kinetic + stress_energy`.
    pub energy_rate: f64,
    /// `energy_rate + dissipation_p + dissipation_2 + relax − coupling − g_work`.
    pub budget_residual: f64,
    /// `γ(ν‖D‖₂² + (a/b)‖τ‖₂²)`.
    pub majorant: f64,
}

fn simpson(a: f64, m: f64, b: f64) -> f64 {
    (a + 4.0 * m + b) / 6.0
}

impl LedgerRow {
    pub fn from_terms(
        t: f64,
        dt: f64,
        before: &EnergyTerms,
        mid: &EnergyTerms,
        after: &EnergyTerms,
        params: &PhysicalParams,
    ) -> Self {
        let avg = |f: fn(&EnergyTerms) -> f64| simpson(f(before), f(mid), f(after));
        let dissipation_p = avg(|e| e.dissipation_p);
        let dissipation_2 = avg(|e| e.dissipation_2);
        let relax = avg(|e| e.relax);
        let coupling = avg(|e| e.coupling);
        let g_work = avg(|e| e.g_work);
        let energy_rate = if dt > 0.0 {
            (after.total() - before.total()) / dt
        } else {
            0.0
        };
        Self {
            t,
            dt,
            kinetic: after.kinetic,
            stress_energy: after.stress_energy,
            dissipation_p,
            dissipation_2,
            relax,
            coupling,
            g_work,
            energy_rate,
            budget_residual: energy_rate + dissipation_p + dissipation_2 + relax - coupling - g_work,
            majorant: params.gamma() * (dissipation_2 + relax),
        }
    }
}

/// Ledger row for two consecutive states, with a midpoint state for the
/// rate averages (pass `None` to use the trapezoidal rule).
pub fn ledger_row(
    before: &State,
    mid: Option<&State>,
    after: &State,
    model: &ConstitutiveModel,
    params: &PhysicalParams,
) -> LedgerRow {
    let b = EnergyTerms::of(before, model, params);
    let a = EnergyTerms::of(after, model, params);
    let m = match mid {
        Some(s) => EnergyTerms::of(s, model, params),
        None => {
            let mut m = EnergyTerms::default();
            for (dst, x, y) in [
                (&mut m.kinetic, b.kinetic, a.kinetic),
                (&mut m.stress_energy, b.stress_energy, a.stress_energy),
                (&mut m.dissipation_p, b.dissipation_p, a.dissipation_p),
                (&mut m.dissipation_2, b.dissipation_2, a.dissipation_2),
                (&mut m.relax, b.relax, a.relax),
                (&mut m.coupling, b.coupling, a.coupling),
                (&mut m.g_work, b.g_work, a.g_work),
            ] {
                *dst = 0.5 * (x + y);
            }
            m
        }
    };
    LedgerRow::from_terms(after.t, after.t - before.t, &b, &m, &a, params)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyVerdict {
    pub passed: bool,
    pub max_violation: f64,
    /// `γ·ν·C(|Ω|)`.
    pub bound: f64,
    pub tol: f64,
}

/// Checks `dE/dt + (1−γ)ν‖D‖_p^p + (1−γ)(a/b)‖τ‖₂² ≤ γνC + tol` on every row.
pub fn check_energy_inequality(
    ledger: &[LedgerRow],
    params: &PhysicalParams,
    interp_const: f64,
    tol: f64,
) -> Result<EnergyVerdict, DiagnosticsError> {
    let gamma = params.gamma();
    if !(gamma < 1.0) {
        return Err(DiagnosticsError::Inadmissible(gamma));
    }
    let bound = gamma * params.nu_mono() * interp_const;
    let max_violation = ledger
        .iter()
        .map(|r| r.energy_rate + (1.0 - gamma) * (r.dissipation_p + r.relax) - bound)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_violation = if ledger.is_empty() { 0.0 } else { max_violation };
    Ok(EnergyVerdict {
        passed: max_violation <= tol,
        max_violation,
        bound,
        tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneVerdict {
    pub passed: bool,
    /// Largest single-step increase of the total energy.
    pub max_increase: f64,
}

/// Total energy nonincreasing from step to step, up to `slack`.
pub fn check_energy_monotone(initial_energy: f64, ledger: &[LedgerRow], slack: f64) -> MonotoneVerdict {
    let mut prev = initial_energy;
    let mut max_increase = 0.0f64;
    for r in ledger {
        let e = r.kinetic + r.stress_energy;
        max_increase = max_increase.max(e - prev);
        prev = e;
    }
    MonotoneVerdict {
        passed: max_increase <= slack,
        max_increase,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorantVerdict {
    pub passed: bool,
    /// Largest `|g_work| − majorant`.
    pub max_excess: f64,
    /// Largest `coupling + g_work − majorant`.
    pub max_excess_net: f64,
}

/// `|g_work| ≤ majorant + slack` and `coupling + g_work ≤ majorant + slack` per row.
pub fn check_young_majorant(ledger: &[LedgerRow], slack: f64) -> MajorantVerdict {
    let mut max_excess = f64::NEG_INFINITY;
    let mut max_excess_net = f64::NEG_INFINITY;
    for r in ledger {
        max_excess = max_excess.max(r.g_work.abs() - r.majorant);
        max_excess_net = max_excess_net.max(r.coupling + r.g_work - r.majorant);
    }
    if ledger.is_empty() {
        max_excess = 0.0;
        max_excess_net = 0.0;
    }
    MajorantVerdict {
        passed: max_excess <= slack && max_excess_net <= slack,
        max_excess,
        max_excess_net,
    }
}
