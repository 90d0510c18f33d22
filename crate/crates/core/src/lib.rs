//! Monolithic geometric multigrid for the Q1 finite-element discretization of
//! the elliptic distributed optimal-control problem on the unit square.
//!
//! The smoother is a Braess-Sarazin relaxation in which the inverse of the
//! mass matrix is replaced by the five-point finite-difference Laplacian, so
//! applying the approximate inverse of the (1,1) block needs no inner solve.
//! The [`lfa`] module predicts smoothing and two-grid factors for it.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod discretization;
pub mod error;
pub mod lfa;
pub mod linalg;
pub mod solver;

pub use error::{Error, Result};
