use std::f64::consts::PI;

use super::SpectralError;

/// Collocation grid on the periodic square `[0, 2π)²` together with the
/// retained wavevector set `max(|k₁|, |k₂|) ≤ K`, `K = ⌊N/3⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    n: usize,
    cutoff: usize,
}

impl GridSpec {
    pub fn new(modes_per_axis: usize) -> Result<Self, SpectralError> {
        if modes_per_axis < 4 || modes_per_axis % 2 != 0 {
            return Err(SpectralError::InvalidGrid(modes_per_axis));
        }
        Ok(Self {
            n: modes_per_axis,
            cutoff: modes_per_axis / 3,
        })
    }

    /// Points per axis of the collocation grid.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dealiasing cutoff `K`.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Side length `2K + 1` of the retained square.
    pub fn side(&self) -> usize {
        2 * self.cutoff + 1
    }

    pub fn mode_count(&self) -> usize {
        self.side() * self.side()
    }

    pub fn point_count(&self) -> usize {
        self.n * self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Quadrature weight of one collocation point.
    pub fn cell_area(&self) -> f64 {
        self.spacing() * self.spacing()
    }

    /// `|Ω| = 4π²`.
    pub fn domain_area() -> f64 {
        4.0 * PI * PI
    }

    /// Wavevector stored at mode index `idx` (row-major over the retained
    /// square, `k₁` outer).
    pub fn wavevector(&self, idx: usize) -> (i64, i64) {
        let side = self.side();
        let k = self.cutoff as i64;
        ((idx / side) as i64 - k, (idx % side) as i64 - k)
    }

    pub fn index_of(&self, k1: i64, k2: i64) -> Option<usize> {
        let k = self.cutoff as i64;
        if k1.abs() > k || k2.abs() > k {
            return None;
        }
        Some(((k1 + k) as usize) * self.side() + (k2 + k) as usize)
    }

    /// Index of `-k` for the mode stored at `idx`.
    pub fn mirror(&self, idx: usize) -> usize {
        self.mode_count() - 1 - idx
    }

    pub fn zero_mode(&self) -> usize {
        self.mode_count() / 2
    }

    pub fn wavevectors(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (0..self.mode_count()).map(move |i| self.wavevector(i))
    }

    /// Coordinates of collocation point `(i, j)`.
    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (i as f64 * self.spacing(), j as f64 * self.spacing())
    }
}
