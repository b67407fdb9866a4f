use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::galerkin::State;
use crate::spectral::{GridSpec, SpectralField, TensorField, VectorField};

use super::{SimulationConfig, StressKind, VelocityKind};

/// Stream id of the wavevector `k`, independent of the grid.
fn stream_of(k1: i64, k2: i64) -> u64 {
    ((k1 as i32 as u32 as u64) << 32) | (k2 as i32 as u32 as u64)
}

/// Random Hermitian field with `|ĉ(k)| ~ amplitude (1 + |k|²)^{−slope/2}`.
///
/// Each wavevector draws from its own ChaCha8 stream keyed by `(seed, k)`,
/// so the shared modes of two grids receive identical coefficients.
pub fn random_smooth<const C: usize>(
    grid: GridSpec,
    seed: u64,
    spectrum_slope: f64,
    amplitude: f64,
) -> SpectralField<C> {
    let mut field = SpectralField::<C>::zeros(grid);
    let k = grid.cutoff() as i64;
    for k1 in -k..=k {
        for k2 in -k..=k {
            // one representative per conjugate pair, skipping the mean
            if (k1, k2) <= (0, 0) {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream_of(k1, k2));
            let scale = amplitude * (1.0 + (k1 * k1 + k2 * k2) as f64).powf(-0.5 * spectrum_slope)
                * std::f64::consts::FRAC_1_SQRT_2;
            let mut c = [Complex64::default(); C];
            for z in c.iter_mut() {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                *z = Complex64::new(re, im) * scale;
            }
            field
                .set_mode_pair(k1, k2, c)
                .expect("mode inside the retained square");
        }
    }
    field
}

/// `(sin x cos y, −cos x sin y)` from its four Fourier modes.
fn taylor_green(grid: GridSpec) -> VectorField {
    let mut v = VectorField::zeros(grid);
    let q = Complex64::new(0.0, 0.25);
    v.set_mode_pair(1, 1, [-q, q]).expect("grid has N >= 4");
    v.set_mode_pair(1, -1, [-q, -q]).expect("grid has N >= 4");
    v
}

fn identity_mode(grid: GridSpec, amplitude: f64, (k1, k2): (i64, i64)) -> TensorField {
    let mut tau = TensorField::zeros(grid);
    let c = Complex64::new(0.5 * amplitude, 0.0);
    let z = Complex64::default();
    tau.set_mode_pair(k1, k2, [c, z, z, c])
        .expect("validated mode");
    tau
}

/// Initial state: the configured fields, truncated and projected onto
/// divergence-free velocities and symmetric zero-mean stresses.
pub fn build_initial(config: &SimulationConfig) -> State {
    let grid = config.grid;
    let v = match &config.initial.velocity {
        VelocityKind::Zero => VectorField::zeros(grid),
        VelocityKind::TaylorGreen => taylor_green(grid),
        VelocityKind::RandomSmooth {
            seed,
            spectrum_slope,
            amplitude,
        } => random_smooth(grid, *seed, *spectrum_slope, *amplitude),
    };
    let tau = match &config.initial.stress {
        StressKind::Zero => TensorField::zeros(grid),
        StressKind::RandomSmooth {
            seed,
            spectrum_slope,
            amplitude,
        } => random_smooth(grid, *seed, *spectrum_slope, *amplitude),
        StressKind::ScaledIdentityMode { amplitude, mode } => identity_mode(grid, *amplitude, *mode),
    };
    State::new(&v, &tau, 0.0)
}
