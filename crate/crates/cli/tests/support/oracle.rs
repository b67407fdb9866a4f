//! Independent evaluation of the Galerkin right-hand sides by direct
//! trigonometric sums. Nothing here goes through the FFT or the spectral
//! operators of the library.
//!
//! Polynomial terms are integrated on a dense uniform grid where the
//! quadrature is exact. The non-polynomial `f(D)` and `g(D)` are
//! integrated with the `N_g`-point rule that defines the discrete system.

use std::f64::consts::PI;

use num_complex::Complex64;
use oldroyd_core::constitutive::{ConstitutiveModel, FKind, PhysicalParams, SystemVariant};
use oldroyd_core::galerkin::State;
use oldroyd_core::spectral::SpectralField;

type C = Complex64;

fn modes(k: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for k1 in -k..=k {
        for k2 in -k..=k {
            out.push((k1, k2));
        }
    }
    out
}

/// Value and partial derivatives of a truncated Fourier series at `(x, y)`.
fn eval<const N: usize>(f: &SpectralField<N>, k: i64, x: f64, y: f64) -> ([f64; N], [f64; N], [f64; N]) {
    let (mut u, mut ux, mut uy) = ([0.0; N], [0.0; N], [0.0; N]);
    for (idx, (k1, k2)) in modes(k).into_iter().enumerate() {
        let e = C::from_polar(1.0, k1 as f64 * x + k2 as f64 * y);
        for c in 0..N {
            let z = f.coeffs()[idx][c] * e;
            u[c] += z.re;
            ux[c] += (z * C::new(0.0, k1 as f64)).re;
            uy[c] += (z * C::new(0.0, k2 as f64)).re;
        }
    }
    (u, ux, uy)
}

/// `(1/M²) Σ F(x) e^{−ik·x}` over the uniform `M × M` grid, for every mode.
fn project<const N: usize>(k: i64, m: usize, mut field: impl FnMut(f64, f64) -> [f64; N]) -> Vec<[C; N]> {
    let h = 2.0 * PI / m as f64;
    let mut values = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let (x, y) = (i as f64 * h, j as f64 * h);
            values.push((x, y, field(x, y)));
        }
    }
    modes(k)
        .into_iter()
        .map(|(k1, k2)| {
            let mut acc = [C::default(); N];
            for (x, y, f) in &values {
                let e = C::from_polar(1.0, -(k1 as f64 * x + k2 as f64 * y));
                for c in 0..N {
                    acc[c] += e * f[c];
                }
            }
            acc.map(|z| z / (m * m) as f64)
        })
        .collect()
}

fn strain(g: &[[f64; 2]; 2]) -> [f64; 4] {
    let off = 0.5 * (g[0][1] + g[1][0]);
    [g[0][0], off, off, g[1][1]]
}

fn frob(a: &[f64; 4]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn f_law(model: &ConstitutiveModel, d: &[f64; 4]) -> [f64; 4] {
    let p = model.p_exp();
    let s = frob(d);
    let factor = match &model.law().kind {
        FKind::PowerAdditive => (1.0 + s).powf(p - 2.0),
        FKind::PowerQuadratic => (1.0 + s * s).powf(0.5 * (p - 2.0)),
        FKind::Linear { nu0 } => 2.0 * nu0,
        FKind::Tabulated(_) => panic!("oracle does not cover tabulated laws"),
    };
    d.map(|x| factor * x)
}

fn g_law(model: &ConstitutiveModel, params: &PhysicalParams, d: &[f64; 4]) -> [f64; 4] {
    let (lambda, r) = (model.lambda(), model.r_exp());
    let d2 = d.iter().map(|x| x * x).sum::<f64>();
    let mu = 1.0 - lambda + lambda * (1.0 + d2).powf(0.5 * (r - 2.0));
    let theta = params.theta();
    let factor = params.b() / (1.0 - theta) * (mu - theta);
    d.map(|x| factor * x)
}

fn velocity_gradient(v: &SpectralField<2>, k: i64, x: f64, y: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let (u, ux, uy) = eval(v, k, x, y);
    // g[i][j] = ∂_j v_i
    (u, [[ux[0], uy[0]], [ux[1], uy[1]]])
}

/// Oracle for `P[−v·∇v + div f(D) + div τ]`.
pub fn momentum(state: &State, model: &ConstitutiveModel) -> Vec<[C; 2]> {
    let grid = state.grid();
    let (k, n) = (grid.cutoff() as i64, grid.n());
    let dense = 4 * k as usize + 4;
    let conv = project::<2>(k, dense, |x, y| {
        let (u, g) = velocity_gradient(&state.v, k, x, y);
        [
            -(u[0] * g[0][0] + u[1] * g[0][1]),
            -(u[0] * g[1][0] + u[1] * g[1][1]),
        ]
    });
    let stress = project::<4>(k, n, |x, y| {
        let (_, g) = velocity_gradient(&state.v, k, x, y);
        f_law(model, &strain(&g))
    });
    modes(k)
        .into_iter()
        .enumerate()
        .map(|(idx, (k1, k2))| {
            if (k1, k2) == (0, 0) {
                return [C::default(); 2];
            }
            let kv = [k1 as f64, k2 as f64];
            let tau = state.tau.coeffs()[idx];
            let s = stress[idx];
            let mut r = conv[idx];
            for i in 0..2 {
                for j in 0..2 {
                    // −∫ σ_ij ∂_j e^{−ik·x} = i k_j σ̂_ij
                    r[i] += C::new(0.0, kv[j]) * (s[2 * i + j] + tau[2 * i + j]);
                }
            }
            let kk = kv[0] * kv[0] + kv[1] * kv[1];
            let dot = r[0] * kv[0] + r[1] * kv[1];
            [r[0] - dot * kv[0] / kk, r[1] - dot * kv[1] / kk]
        })
        .collect()
}

/// Oracle for the stress right-hand side of the given variant.
pub fn stress(state: &State, model: &ConstitutiveModel, params: &PhysicalParams) -> Vec<[C; 4]> {
    let grid = state.grid();
    let (k, n) = (grid.cutoff() as i64, grid.n());
    let dense = 4 * k as usize + 4;
    let rotation = model.variant() == SystemVariant::S;
    let poly = project::<4>(k, dense, |x, y| {
        let (u, g) = velocity_gradient(&state.v, k, x, y);
        let (t, tx, ty) = eval(&state.tau, k, x, y);
        let mut out = [0.0; 4];
        for c in 0..4 {
            out[c] = -(u[0] * tx[c] + u[1] * ty[c]);
        }
        if rotation {
            let w = 0.5 * (g[0][1] - g[1][0]);
            let wm = [[0.0, w], [-w, 0.0]];
            let tm = [[t[0], t[1]], [t[2], t[3]]];
            for i in 0..2 {
                for j in 0..2 {
                    let mut tw = 0.0;
                    let mut wt = 0.0;
                    for l in 0..2 {
                        tw += tm[i][l] * wm[l][j];
                        wt += wm[i][l] * tm[l][j];
                    }
                    out[2 * i + j] -= tw - wt;
                }
            }
        }
        out
    });
    let source = match model.variant() {
        SystemVariant::S2 => None,
        _ => Some(project::<4>(k, n, |x, y| {
            let (_, g) = velocity_gradient(&state.v, k, x, y);
            g_law(model, params, &strain(&g))
        })),
    };
    modes(k)
        .into_iter()
        .enumerate()
        .map(|(idx, (k1, k2))| {
            if (k1, k2) == (0, 0) {
                return [C::default(); 4];
            }
            let tau = state.tau.coeffs()[idx];
            let mut r = poly[idx];
            for c in 0..4 {
                r[c] -= params.a() * tau[c];
            }
            match &source {
                Some(g) => {
                    for c in 0..4 {
                        r[c] += g[idx][c];
                    }
                }
                None => {
                    let v = state.v.coeffs()[idx];
                    let kv = [k1 as f64, k2 as f64];
                    for i in 0..2 {
                        for j in 0..2 {
                            let d = C::new(0.0, 0.5) * (kv[j] * v[i] + kv[i] * v[j]);
                            r[2 * i + j] += params.b() * d;
                        }
                    }
                }
            }
            let off = 0.5 * (r[1] + r[2]);
            [r[0], off, off, r[3]]
        })
        .collect()
}

/// `max |a − b| / max |b|`.
pub fn relative_error<const N: usize>(a: &[[C; N]], b: &[[C; N]]) -> f64 {
    let mut diff = 0.0f64;
    let mut scale = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        for c in 0..N {
            diff = diff.max((x[c] - y[c]).norm());
            scale = scale.max(y[c].norm());
        }
    }
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}
