//! Constructive approximation by power series `f(z) = Σ λ_n zⁿ` whose
//! coefficients are drawn from a finite set Λ.
//!
//! The engines build [`Certificate`]s showing that `f(U)` comes within ε of a
//! target for a region `U` accumulating at a boundary point ζ; the
//! counterexample module builds wedge regions whose images provably avoid a
//! half-plane when Λ is degenerate.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod affine;
pub mod angle;
pub mod certificate;
pub mod cli;
pub mod coeffs;
pub mod complex;
pub mod counterexamples;
pub mod engines;
pub mod error;
pub mod geometry;
pub mod nets;
pub mod oracle;
pub mod region;
pub mod sampler;
pub mod series;

pub use affine::{normalize_affine, transport_target, AffineTransform};
pub use angle::{ExcludedRoot, Turns, ZetaKind};
pub use certificate::Certificate;
pub use coeffs::CoefficientSet;
pub use complex::Complex64;
pub use error::{Error, Result};
pub use region::{Piece, RegionSpec};
pub use series::{eval_prefix, tail_bound, SparseAssignment};
