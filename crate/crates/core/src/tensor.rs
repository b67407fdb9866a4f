//! Pointwise 2×2 matrix algebra, entries stored as `[11, 12, 21, 22]`.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2(pub [f64; 4]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([0.0; 4]);
    pub const IDENTITY: Mat2 = Mat2([1.0, 0.0, 0.0, 1.0]);

    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2([a11, a12, a21, a22])
    }

    pub fn symmetric(a11: f64, a12: f64, a22: f64) -> Self {
        Mat2([a11, a12, a12, a22])
    }

    /// Double contraction `A : B`.
    pub fn ddot(&self, other: &Mat2) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Squared Frobenius norm `|A|² = A : A`.
    pub fn norm2(&self) -> f64 {
        self.ddot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn transpose(&self) -> Mat2 {
        let a = self.0;
        Mat2([a[0], a[2], a[1], a[3]])
    }

    /// Matrix product `A·B`.
    pub fn matmul(&self, other: &Mat2) -> Mat2 {
        let (a, b) = (self.0, other.0);
        Mat2([
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ])
    }

    /// Commutator-type rotation term `S·W − W·S`.
    pub fn corotation(&self, spin: &Mat2) -> Mat2 {
        self.matmul(spin) - spin.matmul(self)
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        Mat2(self.0.map(|x| x * s))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
            self.0[3] + rhs.0[3],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: f64) -> Mat2 {
        self.scale(rhs)
    }
}

impl From<[f64; 4]> for Mat2 {
    fn from(a: [f64; 4]) -> Self {
        Mat2(a)
    }
}
