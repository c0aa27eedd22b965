//! Dense symmetric linear algebra, univariate root analysis, and the
//! embedded interior-point solver for block-structured SDPs.

pub mod sym;
pub mod sdp;
pub mod uni;

pub use sym::{psd_check, pseudo_inverse, PsdVerdict, PsdWitness, SymMatrix};
