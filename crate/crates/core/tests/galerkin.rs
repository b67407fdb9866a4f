mod common;

use common::{model, params, random_state, taylor_green};
use num_complex::Complex64;
use oldroyd_core::constitutive::SystemVariant;
use oldroyd_core::diagnostics::{check_energy_monotone, EnergyTerms};
use oldroyd_core::galerkin::{
    momentum_rhs, reconstruct_pressure, pressure_source, run, step, transport_rhs, DormandPrince,
    OdeVector, RunSettings, State, StepControl,
};
use oldroyd_core::spectral::{
    double_divergence, l2_norm, laplacian, to_physical, GridSpec, TensorField, VectorField,
};
use oldroyd_core::tensor::Mat2;

fn identity_mode(grid: GridSpec, amp: f64) -> TensorField {
    let mut tau = TensorField::zeros(grid);
    let c = Complex64::new(0.5 * amp, 0.0);
    let z = Complex64::default();
    tau.set_mode_pair(1, 2, [c, z, z, c]).unwrap();
    tau
}

fn settings(t_end: f64) -> RunSettings {
    RunSettings {
        t_end,
        control: StepControl::default(),
        snapshot_interval: None,
    }
}

#[test]
fn relaxation_of_isotropic_mode() {
    let grid = GridSpec::new(12).unwrap();
    let state = State::new(&VectorField::zeros(grid), &identity_mode(grid, 1.0), 0.0);
    let (m, p) = (model(SystemVariant::S1, 0.5, 1.5), params(0.5));
    let out = run(&state, &m, &p, &settings(1.0), |_, _| {}).unwrap();
    let expected = (-p.a()).exp() * l2_norm(&state.tau);
    let got = l2_norm(&out.final_state.tau);
    assert!(((got - expected) / expected).abs() < 1e-6, "{got} vs {expected}");
    assert!(out.final_state.v.max_abs() < 1e-15);
    for row in &out.ledger {
        assert!(row.kinetic < 1e-28);
        assert!(row.coupling.abs() < 1e-14);
        assert!(row.relax > 0.0);
        assert!(row.budget_residual.abs() < 1e-7 * row.relax, "{row:?}");
    }
    assert!(out.ledger.windows(2).all(|w| w[1].stress_energy < w[0].stress_energy));
}

#[test]
fn zero_is_a_fixed_point() {
    let grid = GridSpec::new(8).unwrap();
    let state = State::zeros(grid);
    for variant in [SystemVariant::S, SystemVariant::S1, SystemVariant::S2] {
        let out = run(&state, &model(variant, 0.5, 1.5), &params(0.5), &settings(0.5), |_, _| {}).unwrap();
        assert_eq!(out.final_state.v.max_abs(), 0.0);
        assert_eq!(out.final_state.tau.max_abs(), 0.0);
        for row in &out.ledger {
            assert_eq!(row.kinetic + row.stress_energy + row.dissipation_p + row.g_work, 0.0);
            assert_eq!(row.budget_residual, 0.0);
        }
    }
}

#[test]
fn empty_horizon_returns_input() {
    let grid = GridSpec::new(8).unwrap();
    let state = random_state(grid, 1, 0.3);
    let out = run(&state, &model(SystemVariant::S, 0.5, 1.5), &params(0.5), &settings(0.0), |_, _| {}).unwrap();
    assert_eq!(out.final_state, state);
    assert!(out.ledger.is_empty());
    assert!(run(&state, &model(SystemVariant::S, 0.5, 1.5), &params(0.5), &settings(-1.0), |_, _| {}).is_err());
}

#[derive(Clone)]
struct Frozen(TensorField);

impl OdeVector for Frozen {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        self.0.axpy(alpha, &x.0);
    }
    fn error_norm(err: &Self, _: &Self, y1: &Self, rtol: f64, atol: f64) -> f64 {
        err.0.max_abs() / (atol + rtol * y1.0.max_abs())
    }
}

#[test]
fn transport_is_an_isometry() {
    let grid = GridSpec::new(16).unwrap();
    let s = random_state(grid, 7, 1.0);
    let ctrl = StepControl {
        rel_tol: 1e-11,
        abs_tol: 1e-14,
        ..StepControl::default()
    };
    let mut stepper = DormandPrince::new(ctrl);
    let mut y = Frozen(s.tau.clone());
    let mut t = 0.0;
    let mut f = |_: f64, y: &Frozen| Ok::<_, ()>(Frozen(transport_rhs(&s.v, &y.0)));
    while t < 1.0 {
        let acc = stepper.step(t, &y, 1.0, &mut f).unwrap();
        t = acc.t;
        y = acc.y;
    }
    let (n0, n1) = (l2_norm(&s.tau), l2_norm(&y.0));
    assert!(((n1 - n0) / n0).abs() < 1e-8, "{n0} {n1}");
    assert!((&y.0 - &s.tau).max_abs() > 1e-3);
}

#[test]
fn rotation_is_energy_neutral_pointwise() {
    let grid = GridSpec::new(16).unwrap();
    for seed in 0..5 {
        let s = random_state(grid, seed, 1.0);
        let tau = to_physical(&s.tau);
        let w = to_physical(&oldroyd_core::spectral::antisym_grad(&s.v));
        for (t, w) in tau.values().iter().zip(w.values()) {
            let (t, w) = (Mat2(*t), Mat2(*w));
            let r = t.corotation(&w);
            assert!(r.ddot(&t).abs() <= 1e-12 * t.norm2() * w.norm() + 1e-300);
            assert!((r.0[1] - r.0[2]).abs() <= 1e-14 * (1.0 + r.norm()));
        }
    }
}

#[test]
fn invariants_hold_after_steps() {
    let grid = GridSpec::new(16).unwrap();
    let state = random_state(grid, 3, 0.5);
    let mut seen = 0;
    let out = run(&state, &model(SystemVariant::S, 0.5, 1.5), &params(0.5), &settings(0.2), |s, _| {
        assert!(s.divergence_defect() < 1e-12);
        assert!(s.symmetry_defect() < 1e-12);
        assert!(s.v.hermitian_defect() == 0.0 || s.v.hermitian_defect() < 1e-14);
        seen += 1;
    })
    .unwrap();
    assert_eq!(seen, out.accepted_steps);
    assert_eq!(out.ledger.len(), out.accepted_steps);
    assert!((out.final_state.t - 0.2).abs() < 1e-15);
}

#[test]
fn single_step_matches_run_prefix() {
    let grid = GridSpec::new(8).unwrap();
    let state = random_state(grid, 4, 0.5);
    let (m, p) = (model(SystemVariant::S1, 0.5, 1.5), params(0.5));
    let ctrl = StepControl::default();
    let (next, dt, row) = step(&state, &m, &p, &ctrl).unwrap();
    assert!(dt > 0.0 && dt <= ctrl.dt_max);
    assert!((next.t - dt).abs() < 1e-15);
    assert_eq!(row.t, next.t);
}

#[test]
fn fixed_step_order() {
    let grid = GridSpec::new(12).unwrap();
    let state = State::new(&taylor_green(grid), &random_state(grid, 9, 0.3).tau, 0.0);
    let (m, p) = (model(SystemVariant::S, 0.5, 1.5), params(0.5));
    let fixed = |dt: f64| {
        let ctrl = StepControl {
            dt_init: dt,
            dt_min: dt,
            dt_max: dt,
            ..StepControl::default()
        };
        let s = RunSettings {
            t_end: 0.4,
            control: ctrl,
            snapshot_interval: None,
        };
        run(&state, &m, &p, &s, |_, _| {}).unwrap().final_state
    };
    let reference = fixed(0.4 / 320.0);
    let err = |s: &State| l2_norm(&(&s.v - &reference.v)) + l2_norm(&(&s.tau - &reference.tau));
    let e1 = err(&fixed(0.04));
    let e2 = err(&fixed(0.02));
    let order = (e1 / e2).log2();
    assert!(order >= 4.0, "observed order {order} ({e1:e}, {e2:e})");
}

#[test]
fn tighter_tolerance_reduces_error() {
    let grid = GridSpec::new(16).unwrap();
    let state = State::new(&taylor_green(grid), &random_state(grid, 5, 0.3).tau, 0.0);
    let (m, p) = (model(SystemVariant::S1, 0.5, 1.5), params(0.5));
    let with_tol = |rtol: f64| {
        let s = RunSettings {
            t_end: 0.5,
            control: StepControl {
                rel_tol: rtol,
                abs_tol: rtol * 1e-3,
                ..StepControl::default()
            },
            snapshot_interval: None,
        };
        run(&state, &m, &p, &s, |_, _| {}).unwrap().final_state
    };
    let reference = with_tol(1e-12);
    let err = |s: &State| l2_norm(&(&s.v - &reference.v)) + l2_norm(&(&s.tau - &reference.tau));
    let (e1, e2) = (err(&with_tol(1e-5)), err(&with_tol(5e-6)));
    assert!(e2 < e1, "{e1:e} {e2:e}");
}

#[test]
fn snapshots_follow_interval() {
    let grid = GridSpec::new(8).unwrap();
    let state = random_state(grid, 2, 0.3);
    let s = RunSettings {
        t_end: 1.0,
        control: StepControl::default(),
        snapshot_interval: Some(0.25),
    };
    let out = run(&state, &model(SystemVariant::S2, 0.0, 2.0), &params(0.0), &s, |_, _| {}).unwrap();
    assert_eq!(out.snapshots[0], state);
    assert!(out.snapshots.len() >= 4 && out.snapshots.len() <= 5, "{}", out.snapshots.len());
}

#[test]
fn taylor_green_s2_energy_decreases() {
    let grid = GridSpec::new(16).unwrap();
    let state = State::new(&taylor_green(grid), &random_state(grid, 11, 0.1).tau, 0.0);
    let (m, p) = (model(SystemVariant::S2, 0.0, 2.0), params(0.0));
    let e0 = EnergyTerms::of(&state, &m, &p).total();
    let out = run(&state, &m, &p, &settings(0.5), |_, _| {}).unwrap();
    let verdict = check_energy_monotone(e0, &out.ledger, 1e-8 * e0);
    assert!(verdict.passed, "{verdict:?}");
    for row in &out.ledger {
        assert!((row.coupling + row.g_work).abs() < 1e-12 * (1.0 + row.g_work.abs()));
    }
}

#[test]
fn pressure_single_mode() {
    let grid = GridSpec::new(8).unwrap();
    let mut tau = TensorField::zeros(grid);
    let h = Complex64::new(0.5, 0.0);
    let z = Complex64::default();
    tau.set_mode_pair(1, 0, [h, z, z, z]).unwrap();
    let state = State {
        v: VectorField::zeros(grid),
        tau,
        t: 0.0,
    };
    let p = reconstruct_pressure(&state, &model(SystemVariant::S, 0.5, 1.5));
    let c = p.coeff(1, 0).unwrap()[0];
    assert!((c - Complex64::new(0.5, 0.0)).norm() < 1e-15, "{c}");
    assert!(reconstruct_pressure(&State::zeros(grid), &model(SystemVariant::S, 0.5, 1.5)).max_abs() == 0.0);
}

#[test]
fn pressure_residual_on_random_states() {
    let grid = GridSpec::new(16).unwrap();
    let m = model(SystemVariant::S, 0.5, 1.5);
    for seed in 0..10 {
        let s = random_state(grid, 100 + seed, 1.0);
        let f = pressure_source(&s, &m);
        let p = reconstruct_pressure(&s, &m);
        let res = &laplacian(&p) - &double_divergence(&f);
        assert!(l2_norm(&res) < 1e-10 * l2_norm(&f));
        assert!(p.mean_coeff()[0].norm() == 0.0);
    }
}

#[test]
fn momentum_is_divergence_free() {
    let grid = GridSpec::new(16).unwrap();
    let s = random_state(grid, 12, 1.0);
    let r = momentum_rhs(&s, &model(SystemVariant::S, 0.5, 1.5)).unwrap();
    assert!(oldroyd_core::spectral::divergence_residual(&r) < 1e-12 * r.max_abs());
}
