use crate::spectral::{to_physical, TensorField};

/// `∫ |τ|² χ{|τ| ≥ M} dx` for each threshold `M`, at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailRow {
    pub t: f64,
    pub thresholds: Vec<f64>,
    pub tails: Vec<f64>,
}

/// Collocation quadrature of the tail functional.
pub fn tail_profile(t: f64, tau: &TensorField, thresholds: &[f64]) -> TailRow {
    let phys = to_physical(tau);
    let cell = tau.grid().cell_area();
    let mags: Vec<f64> = phys.magnitudes().collect();
    let tails = thresholds
        .iter()
        .map(|&m| mags.iter().filter(|&&s| s >= m).fold(0.0, |acc, s| acc + s * s) * cell)
        .collect();
    TailRow {
        t,
        thresholds: thresholds.to_vec(),
        tails,
    }
}
