//! Embedded Dormand–Prince 5(4) pair with a PI step-size controller.

use super::StepControl;

/// Vector-space operations the integrator needs from a state.
pub trait OdeVector: Clone {
    /// `self += alpha * x`
    fn axpy(&mut self, alpha: f64, x: &Self);

    /// RMS of `err` weighted by `atol + rtol·max(|y0|, |y1|)` over the
    /// components that take part in step-size control.
    fn error_norm(err: &Self, y0: &Self, y1: &Self, rtol: f64, atol: f64) -> f64;

    /// Re-imposes structural constraints on a stage value.
    fn project(&mut self) {}

    /// Records the time a value belongs to, for types that carry one.
    fn set_time(&mut self, _t: f64) {}
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// difference between the 5th and embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO: f64 = 0.2 - 0.75 * BETA;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub enum StepError<E> {
    /// The right-hand side could not be evaluated (non-finite values).
    Rhs(E),
    /// Error control asked for a step below `dt_min`.
    TooSmall { t: f64, dt: f64 },
}

/// Result of one accepted step.
#[derive(Debug, Clone)]
pub struct Accepted<T> {
    pub t: f64,
    pub y: T,
    pub dt: f64,
    pub rejected: usize,
    /// Cubic Hermite value at `t − dt/2`.
    pub midpoint: T,
}

fn hermite_midpoint<T: OdeVector>(y0: &T, y1: &T, f0: &T, f1: &T, h: f64, t_mid: f64) -> T {
    let mut m = y0.clone();
    m.axpy(-0.5, y0);
    m.axpy(0.5, y1);
    m.axpy(0.125 * h, f0);
    m.axpy(-0.125 * h, f1);
    m.project();
    m.set_time(t_mid);
    m
}

/// Stateful stepper: carries the step-size history and the FSAL stage.
#[derive(Debug, Clone)]
pub struct DormandPrince<T> {
    h: f64,
    err_old: f64,
    fsal: Option<(f64, T)>,
    control: StepControl,
}

impl<T: OdeVector> DormandPrince<T> {
    pub fn new(control: StepControl) -> Self {
        Self {
            h: control.dt_init,
            err_old: 1e-4,
            fsal: None,
            control,
        }
    }

    /// Step size the next call will try.
    pub fn next_dt(&self) -> f64 {
        self.h
    }

    fn fixed(&self) -> bool {
        self.control.dt_min == self.control.dt_max
    }

    fn stage(y: &T, h: f64, terms: &[(f64, &T)]) -> T {
        let mut out = y.clone();
        for (c, k) in terms {
            if *c != 0.0 {
                out.axpy(h * c, k);
            }
        }
        out.project();
        out
    }

    /// Advances `(t, y)` by one accepted step no longer than `t_stop − t`.
    pub fn step<E>(
        &mut self,
        t: f64,
        y: &T,
        t_stop: f64,
        rhs: &mut impl FnMut(f64, &T) -> Result<T, E>,
    ) -> Result<Accepted<T>, StepError<E>> {
        let k1 = match self.fsal.take() {
            Some((tf, k)) if tf == t => k,
            _ => rhs(t, y).map_err(StepError::Rhs)?,
        };
        let mut rejected = 0;
        loop {
            let remaining = t_stop - t;
            let clipped = self.h >= remaining;
            let h = if clipped { remaining } else { self.h };

            let y2 = Self::stage(y, h, &[(A21, &k1)]);
            let k2 = rhs(t + C2 * h, &y2).map_err(StepError::Rhs)?;
            let y3 = Self::stage(y, h, &[(A31, &k1), (A32, &k2)]);
            let k3 = rhs(t + C3 * h, &y3).map_err(StepError::Rhs)?;
            let y4 = Self::stage(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            let k4 = rhs(t + C4 * h, &y4).map_err(StepError::Rhs)?;
            let y5 = Self::stage(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            let k5 = rhs(t + C5 * h, &y5).map_err(StepError::Rhs)?;
            let y6 = Self::stage(
                y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            );
            let k6 = rhs(t + h, &y6).map_err(StepError::Rhs)?;
            let y_new = Self::stage(
                y,
                h,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let t_new = if clipped { t_stop } else { t + h };
            let mut y_new = y_new;
            y_new.set_time(t_new);
            let k7 = rhs(t_new, &y_new).map_err(StepError::Rhs)?;

            if self.fixed() {
                let midpoint = hermite_midpoint(y, &y_new, &k1, &k7, h, t + 0.5 * h);
                self.fsal = Some((t_new, k7));
                return Ok(Accepted {
                    t: t_new,
                    y: y_new,
                    dt: h,
                    rejected,
                    midpoint,
                });
            }

            // h·Σ eᵢkᵢ, built on top of a copy of k1
            let mut err_vec = k1.clone();
            err_vec.axpy(h * E1 - 1.0, &k1);
            err_vec.axpy(h * E3, &k3);
            err_vec.axpy(h * E4, &k4);
            err_vec.axpy(h * E5, &k5);
            err_vec.axpy(h * E6, &k6);
            err_vec.axpy(h * E7, &k7);
            let err = T::error_norm(&err_vec, y, &y_new, self.control.rel_tol, self.control.abs_tol);

            if err.is_finite() && err <= 1.0 {
                let err = err.max(1e-10);
                let fac = (err.powf(EXPO) / self.err_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                self.err_old = err.max(1e-4);
                if !clipped || h >= self.h {
                    self.h = h / fac;
                }
                self.h = self.h.min(self.control.dt_max);
                let midpoint = hermite_midpoint(y, &y_new, &k1, &k7, h, t + 0.5 * h);
                self.fsal = Some((t_new, k7));
                return Ok(Accepted {
                    t: t_new,
                    y: y_new,
                    dt: h,
                    rejected,
                    midpoint,
                });
            }

            rejected += 1;
            let fac = if err.is_finite() {
                (err.powf(EXPO) / SAFETY).min(1.0 / FAC_MIN)
            } else {
                1.0 / FAC_MIN
            };
            self.h = h / fac.max(1.0);
            if self.h < self.control.dt_min {
                return Err(StepError::TooSmall { t, dt: self.h });
            }
        }
    }
}
