#![allow(dead_code)]

use num_complex::Complex64;
use oldroyd_core::constitutive::{ConstitutiveModel, FKind, FLaw, PhysicalParams, SystemVariant};
use oldroyd_core::galerkin::State;
use oldroyd_core::spectral::{to_spectral, GridSpec, PhysicalField, SpectralField};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Random Hermitian coefficients with decaying spectrum.
pub fn random_field<const C: usize>(grid: GridSpec, rng: &mut StdRng, amp: f64) -> SpectralField<C> {
    let mut f = SpectralField::<C>::zeros(grid);
    let k = grid.cutoff() as i64;
    for k1 in -k..=k {
        for k2 in -k..=k {
            let w = amp / (1.0 + (k1 * k1 + k2 * k2) as f64);
            let mut c = [Complex64::default(); C];
            for z in c.iter_mut() {
                *z = Complex64::new(rng.gen_range(-w..w), rng.gen_range(-w..w));
            }
            f.coeffs_mut()[grid.index_of(k1, k2).unwrap()] = c;
        }
    }
    f.enforce_hermitian();
    f
}

pub fn random_state(grid: GridSpec, seed: u64, amp: f64) -> State {
    let mut rng = StdRng::seed_from_u64(seed);
    let v = random_field::<2>(grid, &mut rng, amp);
    let tau = random_field::<4>(grid, &mut rng, amp);
    State::new(&v, &tau, 0.0)
}

pub fn taylor_green(grid: GridSpec) -> SpectralField<2> {
    to_spectral(&PhysicalField::from_fn(grid, |x, y| {
        [x.sin() * y.cos(), -x.cos() * y.sin()]
    }))
}

pub fn model(variant: SystemVariant, lambda: f64, r: f64) -> ConstitutiveModel {
    ConstitutiveModel::new(FLaw::new(FKind::PowerAdditive, 3.0), lambda, r, variant).unwrap()
}

pub fn params(lambda: f64) -> PhysicalParams {
    PhysicalParams::new(2.0, 0.5, 1.0, lambda).unwrap()
}
