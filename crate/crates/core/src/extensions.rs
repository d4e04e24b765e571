//! The four single-parameter point interactions and their boundary matrices.
//!
//! A point interaction at `x = 0` is fixed by a 2×2 matrix `M` with
//!
//! ```text
//! (ψ(0+), ψ′(0+))ᵀ = M · (ψ(0−), ψ′(0−))ᵀ
//! ```
//!
//! | kind | matrix                                             | physics |
//! |------|----------------------------------------------------|---------|
//! | X₁   | `[[1, 0], [X₁, 1]]`                                | δ-potential |
//! | X₂   | `diag((2+X₂)/(2−X₂), (2−X₂)/(2+X₂))`               | mass-jump with quantized flux |
//! | X₃   | `(2+iX₃)/(2−iX₃) · I`                              | localized magnetic flux |
//! | X₄   | `[[1, −X₄], [0, 1]]`                               | mass-bump |
//!
//! The module also converts the physical parameters, the mass ratio
//! `μ = m₋/m₊` and the flux `γ = Φ/2π`, to and from the extension parameters.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Complex2x2;

/// One of the four single-parameter extensions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param", rename_all = "lowercase")]
pub enum ExtensionKind {
    /// δ-potential of the given strength.
    X1(f64),
    /// Mass-jump; `|X₂| ≠ 2`.
    X2(f64),
    /// Localized magnetic flux.
    X3(f64),
    /// Mass-bump.
    X4(f64),
}

impl ExtensionKind {
    pub fn param(&self) -> f64 {
        match *self {
            ExtensionKind::X1(v) | ExtensionKind::X2(v) | ExtensionKind::X3(v) | ExtensionKind::X4(v) => v,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ExtensionKind::X1(_) => "x1",
            ExtensionKind::X2(_) => "x2",
            ExtensionKind::X3(_) => "x3",
            ExtensionKind::X4(_) => "x4",
        }
    }

    /// X₂ and X₃ carry a magnetic flux; X₁ and X₄ are potential-like.
    pub fn is_magnetic(&self) -> bool {
        matches!(self, ExtensionKind::X2(_) | ExtensionKind::X3(_))
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.param();
        if !v.is_finite() {
            return Err(Error::invalid(format!("{} parameter must be finite, got {v}", self.label())));
        }
        if let ExtensionKind::X2(x2) = self {
            if x2.abs() == 2.0 {
                return Err(Error::invalid("X2 boundary matrix diverges at |X2| = 2"));
            }
        }
        Ok(())
    }
}

/// Where a boundary matrix came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BcKind {
    Extension(ExtensionKind),
    Custom,
}

/// A boundary-condition matrix, tagged with its origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryMatrix {
    matrix: Complex2x2,
    kind: BcKind,
    det: Complex64,
}

impl BoundaryMatrix {
    /// Closed-form matrix of a single-parameter extension.
    pub fn new(kind: ExtensionKind) -> Result<Self> {
        kind.validate()?;
        let one = Complex64::new(1.0, 0.0);
        let (matrix, det) = match kind {
            ExtensionKind::X1(x1) => (Complex2x2::real(1.0, 0.0, x1, 1.0), one),
            ExtensionKind::X4(x4) => (Complex2x2::real(1.0, -x4, 0.0, 1.0), one),
            ExtensionKind::X2(x2) => {
                let up = (2.0 + x2) / (2.0 - x2);
                let down = (2.0 - x2) / (2.0 + x2);
                (Complex2x2::real(up, 0.0, 0.0, down), one)
            }
            ExtensionKind::X3(x3) => {
                // Power-of-two scaling is exact and keeps |X₃|² from overflowing.
                let s = 2f64.powi(x3.abs().max(2.0).log2().ceil() as i32);
                let phase = Complex64::new(2.0 / s, x3 / s) / Complex64::new(2.0 / s, -x3 / s);
                (Complex2x2::diag(phase, phase), phase * phase)
            }
        };
        Ok(Self { matrix, kind: BcKind::Extension(kind), det })
    }

    /// An arbitrary matrix; the determinant is computed from the entries.
    pub fn custom(matrix: Complex2x2) -> Self {
        Self { matrix, kind: BcKind::Custom, det: matrix.det() }
    }

    pub fn matrix(&self) -> &Complex2x2 {
        &self.matrix
    }

    pub fn kind(&self) -> BcKind {
        self.kind
    }

    pub fn extension(&self) -> Option<ExtensionKind> {
        match self.kind {
            BcKind::Extension(k) => Some(k),
            BcKind::Custom => None,
        }
    }

    /// Determinant; exact closed form for the single-parameter extensions.
    pub fn det(&self) -> Complex64 {
        self.det
    }
}

/// Closed-form boundary matrix of `kind`.
pub fn boundary_matrix(kind: ExtensionKind) -> Result<BoundaryMatrix> {
    BoundaryMatrix::new(kind)
}

/// Mass ratio `μ = m₋/m₊` across a mass-jump.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct MassRatio(f64);

impl MassRatio {
    pub fn new(mu: f64) -> Result<Self> {
        if mu > 0.0 && mu.is_finite() {
            Ok(Self(mu))
        } else {
            Err(Error::invalid(format!("mass ratio must be positive and finite, got {mu}")))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn inverse(&self) -> Self {
        Self(1.0 / self.0)
    }
}

/// Magnetic flux in units of the flux quantum, `γ = Φ/2π`.
///
/// Stored unreduced: an integer part is physically meaningful ("hidden"
/// flux) even though no boundary matrix can see it. Use [`FluxParam::reduced`]
/// to map into `(−1/2, 1/2]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct FluxParam(f64);

impl FluxParam {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() {
            Ok(Self(gamma))
        } else {
            Err(Error::invalid(format!("flux must be finite, got {gamma}")))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// Representative of `γ mod 1` in `(−1/2, 1/2]`.
    pub fn reduced(&self) -> Self {
        let mut r = self.0 - self.0.round();
        if r == -0.5 {
            r = 0.5;
        }
        Self(r)
    }

    /// `e^{i2πγ}`.
    pub fn phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.0)
    }
}

/// Sign choice in `X₂ = ±2(√μ − 1)/(√μ + 1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

/// `X₂ = ±2(√μ − 1)/(√μ + 1)`; always `|X₂| < 2`.
pub fn mass_ratio_to_x2(mu: MassRatio, branch: Branch) -> f64 {
    let s = mu.value().sqrt();
    let x2 = 2.0 * (s - 1.0) / (s + 1.0);
    match branch {
        Branch::Plus => x2,
        Branch::Minus => -x2,
    }
}

/// Inverse of [`mass_ratio_to_x2`] on the `+` branch: `√μ = (2 + X₂)/(2 − X₂)`.
///
/// Only `|X₂| < 2` corresponds to a mass ratio; beyond it the matrix differs
/// by an extra π-phase, which has no mass-ratio representation.
pub fn x2_to_mass_ratio(x2: f64) -> Result<MassRatio> {
    if !(x2.abs() < 2.0) {
        return Err(Error::invalid(format!("|X2| must be below 2 to define a mass ratio, got {x2}")));
    }
    let s = (2.0 + x2) / (2.0 - x2);
    MassRatio::new(s * s)
}

/// `X₃ = 2 tan(πγ)`, from `e^{i2πγ} = (2 + iX₃)/(2 − iX₃)`.
///
/// Fails for half-integer flux, where `X₃` diverges.
pub fn flux_to_x3(gamma: FluxParam) -> Result<f64> {
    let r = gamma.reduced().value();
    if r.abs() == 0.5 {
        return Err(Error::invalid(format!("X3 diverges for half-integer flux γ = {}", gamma.value())));
    }
    Ok(2.0 * (PI * r).tan())
}

/// `γ = arctan(X₃/2)/π ∈ (−1/2, 1/2)`.
pub fn x3_to_flux(x3: f64) -> Result<FluxParam> {
    FluxParam::new((0.5 * x3).atan() / PI)
}

/// Boundary conditions of a singular mass-jump with ratio `μ = m₋/m₊`.
///
/// Unscaled, the matrix is `diag(μ^{1/4}, μ^{−5/4})` with determinant `1/μ`.
/// Rescaling the right semiaxis by `λ = √μ` makes it unimodular,
/// `diag(√μ, 1/√μ)`, which is the X₂ matrix with `X₂ = mass_ratio_to_x2(μ)`;
/// the scaled form is tagged accordingly.
pub fn balian_bc(mu: MassRatio, scaled: bool) -> BoundaryMatrix {
    let m = mu.value();
    if scaled {
        let s = m.sqrt();
        let matrix = Complex2x2::real(s, 0.0, 0.0, 1.0 / s);
        BoundaryMatrix {
            matrix,
            kind: BcKind::Extension(ExtensionKind::X2(mass_ratio_to_x2(mu, Branch::Plus))),
            det: Complex64::new(1.0, 0.0),
        }
    } else {
        BoundaryMatrix::custom(Complex2x2::real(m.powf(0.25), 0.0, 0.0, m.powf(-1.25)))
    }
}

/// Flux whose X₃ ring spectrum equals the X₂(μ) spectrum:
/// `cos 2πγ = 2√μ/(1 + μ)`, with `γ ∈ [0, 1/4]`.
pub fn x2_x3_reparam(mu: MassRatio) -> FluxParam {
    let s = mu.value().sqrt();
    // 2√μ/(1+μ) written symmetrically in √μ ↔ 1/√μ.
    let c = (2.0 / (s + 1.0 / s)).min(1.0);
    FluxParam(c.acos() / (2.0 * PI))
}
