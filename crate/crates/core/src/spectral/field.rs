use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{GridSpec, SpectralError};

/// Truncated Fourier coefficients of a `C`-component real field,
/// `u(x) = Σ_k û(k) e^{i k·x}` over the retained square of `grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<const C: usize> {
    grid: GridSpec,
    coeffs: Vec<[Complex64; C]>,
}

/// Velocity-like field, components `(1, 2)`.
pub type VectorField = SpectralField<2>;
/// 2×2 tensor field, components stored as `[11, 12, 21, 22]`.
pub type TensorField = SpectralField<4>;
pub type ScalarField = SpectralField<1>;

impl<const C: usize> SpectralField<C> {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            coeffs: vec![[Complex64::new(0.0, 0.0); C]; grid.mode_count()],
        }
    }

    pub fn from_coeffs(grid: GridSpec, coeffs: Vec<[Complex64; C]>) -> Result<Self, SpectralError> {
        if coeffs.len() != grid.mode_count() {
            return Err(SpectralError::ShapeMismatch {
                expected: grid.mode_count(),
                found: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn coeffs(&self) -> &[[Complex64; C]] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [[Complex64; C]] {
        &mut self.coeffs
    }

    pub fn coeff(&self, k1: i64, k2: i64) -> Option<[Complex64; C]> {
        self.grid.index_of(k1, k2).map(|i| self.coeffs[i])
    }

    /// Sets the coefficient at `k` and its Hermitian partner at `-k`.
    pub fn set_mode_pair(&mut self, k1: i64, k2: i64, value: [Complex64; C]) -> Result<(), SpectralError> {
        let idx = self
            .grid
            .index_of(k1, k2)
            .ok_or(SpectralError::ModeOutOfRange(k1, k2))?;
        let mirror = self.grid.mirror(idx);
        self.coeffs[idx] = value;
        self.coeffs[mirror] = value.map(|c| c.conj());
        if idx == mirror {
            self.coeffs[idx] = value.map(|c| Complex64::new(c.re, 0.0));
        }
        Ok(())
    }

    /// Builds a new field mode by mode from `(k, û(k))`.
    pub fn map_modes<const D: usize>(
        &self,
        mut f: impl FnMut((i64, i64), &[Complex64; C]) -> [Complex64; D],
    ) -> SpectralField<D> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| f(self.grid.wavevector(i), c))
            .collect();
        SpectralField { grid: self.grid, coeffs }
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        debug_assert_eq!(self.grid, other.grid);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            for c in 0..C {
                a[c] += b[c] * alpha;
            }
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        for a in self.coeffs.iter_mut() {
            for c in a.iter_mut() {
                *c *= alpha;
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|a| a.iter())
            .fold(0.0_f64, |m, c| m.max(c.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .flat_map(|a| a.iter())
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest `|û(−k) − conj(û(k))|` over retained modes.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, a) in self.coeffs.iter().enumerate() {
            let b = &self.coeffs[self.grid.mirror(i)];
            for c in 0..C {
                worst = worst.max((b[c] - a[c].conj()).norm());
            }
        }
        worst
    }

    /// Replaces each coefficient pair by its Hermitian average.
    pub fn enforce_hermitian(&mut self) {
        let n = self.coeffs.len();
        for i in 0..=n / 2 {
            let j = n - 1 - i;
            for c in 0..C {
                let avg = (self.coeffs[i][c] + self.coeffs[j][c].conj()) * 0.5;
                self.coeffs[i][c] = avg;
                self.coeffs[j][c] = avg.conj();
            }
        }
    }

    pub fn mean_coeff(&self) -> [Complex64; C] {
        self.coeffs[self.grid.zero_mode()]
    }

    pub fn remove_mean(&mut self) {
        let z = self.grid.zero_mode();
        self.coeffs[z] = [Complex64::new(0.0, 0.0); C];
    }

    /// Restriction to the retained square of a coarser (or equal) grid.
    pub fn restrict_to(&self, coarse: GridSpec) -> Self {
        let mut out = Self::zeros(coarse);
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let (k1, k2) = coarse.wavevector(i);
            if let Some(j) = self.grid.index_of(k1, k2) {
                *c = self.coeffs[j];
            }
        }
        out
    }

    /// Zero-padded copy on a finer (or equal) grid.
    pub fn prolong_to(&self, fine: GridSpec) -> Self {
        let mut out = Self::zeros(fine);
        for (i, c) in self.coeffs.iter().enumerate() {
            let (k1, k2) = self.grid.wavevector(i);
            if let Some(j) = fine.index_of(k1, k2) {
                out.coeffs[j] = *c;
            }
        }
        out
    }

    pub(crate) fn check_same_grid(&self, other: &Self) -> Result<(), SpectralError> {
        if self.grid != other.grid {
            return Err(SpectralError::GridMismatch);
        }
        Ok(())
    }
}

impl TensorField {
    /// Largest `|τ̂₁₂ − τ̂₂₁|`.
    pub fn symmetry_defect(&self) -> f64 {
        self.coeffs
            .iter()
            .fold(0.0_f64, |m, c| m.max((c[1] - c[2]).norm()))
    }

    pub fn symmetrize(&mut self) {
        for c in self.coeffs.iter_mut() {
            let off = (c[1] + c[2]) * 0.5;
            c[1] = off;
            c[2] = off;
        }
    }
}

impl<const C: usize> Add for &SpectralField<C> {
    type Output = SpectralField<C>;
    fn add(self, rhs: Self) -> SpectralField<C> {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl<const C: usize> Sub for &SpectralField<C> {
    type Output = SpectralField<C>;
    fn sub(self, rhs: Self) -> SpectralField<C> {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl<const C: usize> Mul<f64> for &SpectralField<C> {
    type Output = SpectralField<C>;
    fn mul(self, rhs: f64) -> SpectralField<C> {
        let mut out = self.clone();
        out.scale(rhs);
        out
    }
}

impl<const C: usize> Neg for &SpectralField<C> {
    type Output = SpectralField<C>;
    fn neg(self) -> SpectralField<C> {
        self * -1.0
    }
}

/// Collocation values of a `C`-component field; point `(i, j)` sits at
/// `(2πi/N, 2πj/N)` and is stored at `i·N + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField<const C: usize> {
    grid: GridSpec,
    values: Vec<[f64; C]>,
}

impl<const C: usize> PhysicalField<C> {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![[0.0; C]; grid.point_count()],
        }
    }

    pub fn from_values(grid: GridSpec, values: Vec<[f64; C]>) -> Result<Self, SpectralError> {
        if values.len() != grid.point_count() {
            return Err(SpectralError::ShapeMismatch {
                expected: grid.point_count(),
                found: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(x, y)` at every collocation point.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> [f64; C]) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.point_count());
        for i in 0..n {
            for j in 0..n {
                let (x, y) = grid.point(i, j);
                values.push(f(x, y));
            }
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[[f64; C]] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [[f64; C]] {
        &mut self.values
    }

    pub fn at(&self, i: usize, j: usize) -> [f64; C] {
        self.values[i * self.grid.n() + j]
    }

    pub fn map<const D: usize>(&self, f: impl Fn(&[f64; C]) -> [f64; D]) -> PhysicalField<D> {
        PhysicalField {
            grid: self.grid,
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Pointwise Euclidean (Frobenius for tensors) magnitude.
    pub fn magnitudes(&self) -> impl Iterator<Item = f64> + '_ {
        self.values
            .iter()
            .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
    }

    /// `∫ |u|^p dx` by the trapezoidal rule on the collocation grid.
    pub fn lp_norm_pow(&self, p_exp: f64) -> Result<f64, SpectralError> {
        if !(p_exp >= 1.0) {
            return Err(SpectralError::InvalidExponent(p_exp));
        }
        let sum: f64 = self.magnitudes().fold(0.0, |acc, m| acc + m.powf(p_exp));
        Ok(sum * self.grid.cell_area())
    }

    pub fn lp_norm(&self, p_exp: f64) -> Result<f64, SpectralError> {
        Ok(self.lp_norm_pow(p_exp)?.powf(1.0 / p_exp))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.magnitudes().fold(0.0, f64::max)
    }
}
