//! Exact algebraic machinery for Weyl structures of parabolic geometries.
//!
//! The crate works at a single fiber: a split simple Lie algebra with a
//! `|k|`-grading coming from a set of crossed simple roots, Lie algebra
//! cohomology `H(g_-, g)` with Kostant's codifferential and Hodge theory,
//! the change-of-Weyl-structure calculus with independent series oracles,
//! and the Rho-tensor normalization recursion. All arithmetic is over exact
//! rationals.

pub mod algebra;
pub mod checks;
pub mod cohomology;
pub mod error;
pub mod fixtures;
pub mod grading;
pub mod linalg;
pub mod normalization;
pub mod par;
pub mod rational;
pub mod roots;
pub mod weyl;

pub use algebra::{build_algebra, Element, LieAlgebra};
pub use error::{Error, FormatError, Result};
pub use rational::Q;
