//! Singular point interactions of the one-dimensional Schrödinger operator.
//!
//! A point interaction at the origin is a boundary condition
//! `(ψ, ψ′)(0+) = M (ψ, ψ′)(0−)`. Four one-parameter families cover the
//! separated cases: a δ potential (X₁), a mass jump (X₂), a magnetic flux
//! phase (X₃) and a mass bump (X₄). The crate provides
//!
//! * [`extensions`]: the boundary matrices and their physical parameters,
//! * [`scattering`]: transfer matrices and S-matrices of defect chains,
//! * [`circle`]: spectra of a ring carrying one defect,
//! * [`regularized`]: smooth width-`ε` operators and their `ε → 0` behavior,
//! * [`numerics`]: the root finders, integrators and eigensolver underneath.
//!
//! ```
//! use massjump::extensions::{boundary_matrix, ExtensionKind};
//!
//! let m = boundary_matrix(ExtensionKind::X4(3.0))?;
//! assert_eq!(m.matrix().a12.re, -3.0);
//! # Ok::<(), massjump::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN. Reference constants
// keep every digit they were computed with.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod circle;
pub mod error;
pub mod extensions;
pub mod numerics;
pub mod regularized;
pub mod scattering;

pub use error::{Error, Result};

// The guide's snippets run as doctests.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/boundary-matrices.md")]
mod book_boundary_matrices {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/scattering.md")]
mod book_scattering {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/rings.md")]
mod book_rings {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/regularization.md")]
mod book_regularization {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
