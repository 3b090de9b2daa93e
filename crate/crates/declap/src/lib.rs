//! Discrete exterior calculus Laplacians on implicitly-defined domains.
//!
//! The crate assembles coboundary, projection, and diagonal Hodge star
//! operators on Cartesian grids whose domain is given by a signed distance
//! function, builds BIG (boundary-induced graph), Hodge, and combinatorial
//! Laplacians under normal or tangential boundary conditions, solves their
//! generalized eigenproblems, performs Hodge decomposition of discrete
//! 1-forms, and evaluates exact continuum spectra of elementary shapes for
//! validation.

pub mod boundary;
pub mod cli;
pub mod decompose;
pub mod eigen;
pub mod error;
pub mod exact;
pub mod grid;
pub mod laplacian;
pub mod sdf;
pub mod simplicial;
pub mod sparse;

pub use error::Error;
