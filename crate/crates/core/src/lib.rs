//! Nodal-count statistics of random symmetric matrices drawn from
//! orthogonally invariant ensembles.
//!
//! A real symmetric matrix `A` is read as an operator on a weighted signed
//! graph: every nonzero off-diagonal entry is an edge. The nodal count
//! `phi(A, k)` is the number of edges on which the k-th eigenvector changes
//! sign against the edge sign, i.e. edges with `A_ij * v_i * v_j > 0`.
//! This crate samples ensembles (GOE and general `OE_n` with a pluggable
//! eigenvalue law), computes nodal counts and surpluses, and provides the
//! statistical machinery (empirical measures, semicircle reference law,
//! Wasserstein-1 and Kolmogorov-Smirnov distances, mergeable moment
//! accumulators) plus Monte Carlo estimators that cross-check the governing
//! sign-correlation formulas. A deterministic, replicate-parallel experiment
//! harness sits on top; the `nodalcount` binary exposes it on the command
//! line.
//!
//! All numerics are generic over the scalar type via [`Real`]; concrete
//! `f64` aliases live at the crate root (`SymMatrix64`, `Spectrum64`, ...).

pub mod ensembles;
pub mod experiments;
pub mod mat;
pub mod nodal;
pub mod oracles;
pub mod sampling;
pub mod spectral;
pub mod stats;

mod error;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// Dense square matrix, `f64` entries.
pub type Mat64 = mat::Mat<f64>;
/// Symmetric matrix, `f64` entries.
pub type SymMatrix64 = spectral::SymMatrix<f64>;
/// Eigendecomposition of a [`SymMatrix64`].
pub type Spectrum64 = spectral::Spectrum<f64>;
/// Orthogonal matrix, `f64` entries.
pub type OrthoMatrix64 = sampling::OrthoMatrix<f64>;
/// Standard Gaussian vector, `f64` entries.
pub type GaussianVector64 = sampling::GaussianVector<f64>;
/// Nodal counts and surpluses of an `f64` matrix.
pub type NodalVector64 = nodal::NodalVector<f64>;
/// Sorted empirical measure with `f64` atoms.
pub type EmpiricalMeasure64 = stats::EmpiricalMeasure<f64>;
/// Reference law (semicircle or normal) over `f64`.
pub type ReferenceLaw64 = stats::ReferenceLaw<f64>;
/// Streaming moment accumulator over `f64`.
pub type MomentAccumulator64 = stats::MomentAccumulator<f64>;
