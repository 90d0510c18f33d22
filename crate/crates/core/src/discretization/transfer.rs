//! Bilinear interpolation, its adjoint, and Galerkin coarsening.

use super::grid::UniformGrid;
use crate::error::{Error, Result};
use crate::linalg::{block_diagonal, kron, spgemm, CsrMatrix};

fn prolongation_1d(coarse_cells: usize) -> CsrMatrix {
    let fine_cells = 2 * coarse_cells;
    let mut trip = Vec::new();
    for fi in 1..fine_cells {
        if fi % 2 == 0 {
            let c = fi / 2;
            trip.push((fi - 1, c - 1, 1.0));
        } else {
            for c in [(fi - 1) / 2, fi.div_ceil(2)] {
                if (1..coarse_cells).contains(&c) {
                    trip.push((fi - 1, c - 1, 0.5));
                }
            }
        }
    }
    CsrMatrix::from_triplets(fine_cells - 1, coarse_cells - 1, &trip)
}

/// Scalar bilinear interpolation from `coarse` interior nodes to `fine`
/// interior nodes.
pub fn prolongation(coarse: &UniformGrid, fine: &UniformGrid) -> Result<CsrMatrix> {
    if fine.n_cells() != 2 * coarse.n_cells() {
        return Err(Error::InvalidGrid(format!(
            "fine grid ({}) must have twice the cells of the coarse grid ({})",
            fine.n_cells(),
            coarse.n_cells()
        )));
    }
    let p1 = prolongation_1d(coarse.n_cells());
    Ok(kron(&p1, &p1))
}

/// Restriction as the plain transpose of the prolongation.
pub fn restriction(p: &CsrMatrix) -> CsrMatrix {
    p.transpose()
}

/// The scalar transfer replicated over the three fields (f, u, τ).
pub fn field_blocks(p: &CsrMatrix) -> CsrMatrix {
    block_diagonal(p, 3)
}

/// Coarse-grid operator `R L P`.
pub fn galerkin_coarsen(l: &CsrMatrix, p: &CsrMatrix, r: &CsrMatrix) -> Result<CsrMatrix> {
    spgemm(r, &spgemm(l, p)?)
}
