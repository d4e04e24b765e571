use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

/// A complex 2×2 matrix acting on `(ψ, ψ′)` column vectors.
///
/// Used for boundary matrices, free propagators, chain transfer matrices and
/// plane-wave amplitude maps alike.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex2x2 {
    pub a11: Complex64,
    pub a12: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
}

impl Complex2x2 {
    pub const fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diag(d1: Complex64, d2: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(d1, zero, zero, d2)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.a11 * c, self.a12 * c, self.a21 * c, self.a22 * c)
    }

    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> Complex64 {
        self.a11 + self.a22
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a11, self.a21, self.a12, self.a22)
    }

    /// Inverse by the adjugate formula; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 || !det.is_finite() {
            return None;
        }
        let inv = 1.0 / det;
        Some(Self::new(self.a22 * inv, -self.a12 * inv, -self.a21 * inv, self.a11 * inv))
    }

    pub fn sub_identity(&self) -> Self {
        Self::new(self.a11 - 1.0, self.a12, self.a21, self.a22 - 1.0)
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [self.a11 * v[0] + self.a12 * v[1], self.a21 * v[0] + self.a22 * v[1]]
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries().iter().zip(other.entries().iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.is_finite())
    }

    /// True when every entry has a vanishing imaginary part.
    pub fn is_real(&self, tol: f64) -> bool {
        self.entries().iter().all(|z| z.im.abs() <= tol)
    }
}

impl Mul for Complex2x2 {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.a11 * rhs.a11 + self.a12 * rhs.a21,
            self.a11 * rhs.a12 + self.a12 * rhs.a22,
            self.a21 * rhs.a11 + self.a22 * rhs.a21,
            self.a21 * rhs.a12 + self.a22 * rhs.a22,
        )
    }
}

impl fmt::Display for Complex2x2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a11, self.a12, self.a21, self.a22)
    }
}
