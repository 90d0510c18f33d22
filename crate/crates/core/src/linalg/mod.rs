//! Sparse and dense linear algebra used by assembly, coarsening and the
//! inner solves, plus small complex matrices for Fourier symbols.

mod banded;
mod cg;
mod complex;
mod dense;
mod sparse;

pub use banded::BandedCholesky;
pub use cg::cg_solve;
pub use complex::ComplexMatrix;
pub use dense::{direct_solve, DenseLu};
pub use sparse::{add_scaled, block_diagonal, block_matrix, dot, kron, norm2, spgemm, CsrMatrix};

pub use num_complex::Complex64;
