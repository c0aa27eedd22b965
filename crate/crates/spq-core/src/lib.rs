//! Certification, decomposition and optimization of separable-plus-quadratic
//! (SPQ) polynomials.
//!
//! An SPQ polynomial is a sum of univariate polynomials in different
//! variables plus a quadratic polynomial. The crate provides:
//!
//! - sum-of-squares certification and refutation with exact rational
//!   verification of Gram and dual-separation certificates,
//! - structure-exploiting nonnegativity and convexity tests for SPQ
//!   polynomials, with constructive decompositions,
//! - convex SPQ optimization (unconstrained and constrained) through small
//!   block-structured semidefinite programs, with minimizer recovery,
//! - an embedded primal-dual interior-point solver for those programs,
//! - applications: sparsity bounds for linear programs, convex SPQ
//!   regression, and the Newton-SPQ method.

pub mod apps;
pub mod certify;
pub mod numerics;
pub mod optimize;
pub mod poly;
pub mod scalar;
pub mod spq_analysis;

pub use poly::{DensePoly, ExponentVector, MonomialBasis, PolyError, SpqPoly, UnivariatePoly};
pub use scalar::{Mode, Scalar};
