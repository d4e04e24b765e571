//! Shared numerical kernels: real root finding, adaptive quadrature,
//! second-order linear ODE propagation, a symmetric tridiagonal eigensolver
//! and complex 2×2 matrix algebra.
//!
//! Everything here is plain `f64` arithmetic over immutable inputs.

mod matrix;
mod ode;
mod quadrature;
mod roots;
mod tridiag;

pub use matrix::Complex2x2;
pub use ode::{propagate, propagate_flux};
pub use quadrature::quadrature;
pub use roots::{bisect, find_roots, golden_max, golden_min};
pub use tridiag::tridiag_eigs;

use crate::error::{Error, Result};

/// A closed real interval together with a sampling resolution.
///
/// `grid_n` is the number of sample points used by routines that scan the
/// interval (root bracketing, initial quadrature panels, maximum ODE step).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealInterval {
    lo: f64,
    hi: f64,
    grid_n: usize,
}

impl RealInterval {
    pub fn new(lo: f64, hi: f64, grid_n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::invalid(format!("interval bounds must be finite: [{lo}, {hi}]")));
        }
        if lo >= hi {
            return Err(Error::invalid(format!("interval requires lo < hi, got [{lo}, {hi}]")));
        }
        if grid_n < 2 {
            return Err(Error::invalid(format!("grid_n must be at least 2, got {grid_n}")));
        }
        Ok(Self { lo, hi, grid_n })
    }

    /// Interval whose grid spacing does not exceed `max_spacing`.
    pub fn with_spacing(lo: f64, hi: f64, max_spacing: f64) -> Result<Self> {
        if !(max_spacing > 0.0) {
            return Err(Error::invalid("grid spacing must be positive"));
        }
        let cells = ((hi - lo) / max_spacing).ceil();
        let grid_n = if cells.is_finite() && cells >= 1.0 { cells as usize + 1 } else { 2 };
        Self::new(lo, hi, grid_n)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn spacing(&self) -> f64 {
        self.width() / (self.grid_n - 1) as f64
    }

    /// The `i`-th grid point; the last one is exactly `hi`.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 >= self.grid_n {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.grid_n).map(|i| self.point(i))
    }
}
