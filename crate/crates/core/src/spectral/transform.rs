//! Modal ⇄ collocation transforms.
//!
//! `to_spectral` keeps only the retained square `max(|k₁|,|k₂|) ≤ K`, so any
//! quadratic product of retained fields is recovered without aliasing.
//! Non-polynomial pointwise terms are still aliased by whatever spectrum
//! they have beyond `N/2`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{PhysicalField, SpectralField};

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

thread_local! {
    static PLANS: RefCell<HashMap<usize, Arc<Plans>>> = RefCell::new(HashMap::new());
}

fn plans(n: usize) -> Arc<Plans> {
    PLANS.with(|cache| {
        cache
            .borrow_mut()
            .entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                Arc::new(Plans {
                    forward: planner.plan_fft_forward(n),
                    inverse: planner.plan_fft_inverse(n),
                })
            })
            .clone()
    })
}

fn transpose(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}

/// Unnormalized 2D transform of an `n × n` row-major buffer.
fn fft2(buf: &mut [Complex64], n: usize, fft: &dyn Fft<f64>) {
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(buf, &mut scratch);
    transpose(buf, n);
    fft.process_with_scratch(buf, &mut scratch);
    transpose(buf, n);
}

fn wrap(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

/// Evaluates a truncated field on the collocation grid.
pub fn to_physical<const C: usize>(field: &SpectralField<C>) -> PhysicalField<C> {
    let grid = field.grid();
    let n = grid.n();
    let plans = plans(n);
    let mut out = PhysicalField::zeros(grid);
    let mut buf = vec![Complex64::default(); n * n];
    for c in 0..C {
        buf.iter_mut().for_each(|z| *z = Complex64::default());
        for (idx, coeff) in field.coeffs().iter().enumerate() {
            let (k1, k2) = grid.wavevector(idx);
            buf[wrap(k1, n) * n + wrap(k2, n)] = coeff[c];
        }
        fft2(&mut buf, n, plans.inverse.as_ref());
        for (v, z) in out.values_mut().iter_mut().zip(&buf) {
            v[c] = z.re;
        }
    }
    out
}

/// Discrete Fourier coefficients of collocation values, truncated to the
/// retained square and made exactly Hermitian.
pub fn to_spectral<const C: usize>(values: &PhysicalField<C>) -> SpectralField<C> {
    let grid = values.grid();
    let n = grid.n();
    let plans = plans(n);
    let norm = 1.0 / (n * n) as f64;
    let mut out = SpectralField::zeros(grid);
    let mut buf = vec![Complex64::default(); n * n];
    for c in 0..C {
        for (z, v) in buf.iter_mut().zip(values.values()) {
            *z = Complex64::new(v[c], 0.0);
        }
        fft2(&mut buf, n, plans.forward.as_ref());
        for (idx, coeff) in out.coeffs_mut().iter_mut().enumerate() {
            let (k1, k2) = grid.wavevector(idx);
            coeff[c] = buf[wrap(k1, n) * n + wrap(k2, n)] * norm;
        }
    }
    out.enforce_hermitian();
    out
}
