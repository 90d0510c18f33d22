//! Operator assembly on interior nodes with Dirichlet elimination.

use super::grid::UniformGrid;
use super::stencil::{
    stencil_fd_laplacian, stencil_mass_2d, stencil_stiffness_2d, Stencil1d, Stencil3x3,
};
use crate::error::{Error, Result};
use crate::linalg::{block_matrix, CsrMatrix};

/// Applies `stencil` at every interior node, dropping taps that land on the
/// boundary.
pub fn assemble_stencil(grid: &UniformGrid, stencil: &Stencil3x3) -> CsrMatrix {
    let n = grid.n_cells() as isize;
    let mut trip = Vec::with_capacity(grid.n_interior() * 9);
    for j in 1..n {
        for i in 1..n {
            let row = grid.interior_index(i as usize, j as usize).unwrap();
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let w = stencil.tap(dx, dy);
                    if w == 0.0 {
                        continue;
                    }
                    if let Some(col) = grid.interior_index((i + dx) as usize, (j + dy) as usize) {
                        trip.push((row, col, w));
                    }
                }
            }
        }
    }
    CsrMatrix::from_triplets(grid.n_interior(), grid.n_interior(), &trip)
}

/// Tridiagonal 1D operator on the `n_cells - 1` interior nodes of a line.
pub fn assemble_stencil_1d(n_cells: usize, stencil: &Stencil1d) -> CsrMatrix {
    let m = n_cells - 1;
    let mut trip = Vec::with_capacity(3 * m);
    for i in 0..m {
        for off in -1isize..=1 {
            let j = i as isize + off;
            if (0..m as isize).contains(&j) {
                trip.push((i, j as usize, stencil.tap(off)));
            }
        }
    }
    CsrMatrix::from_triplets(m, m, &trip)
}

/// Q1 stiffness matrix (discrete `-Δ` in weak form).
pub fn assemble_stiffness_2d(grid: &UniformGrid) -> CsrMatrix {
    assemble_stencil(grid, &stencil_stiffness_2d(grid.h()))
}

/// Q1 mass matrix.
pub fn assemble_mass_2d(grid: &UniformGrid) -> CsrMatrix {
    assemble_stencil(grid, &stencil_mass_2d(grid.h()))
}

/// Five-point finite-difference Laplacian.
pub fn assemble_fd_laplacian(grid: &UniformGrid) -> CsrMatrix {
    assemble_stencil(grid, &stencil_fd_laplacian(grid.h()))
}

/// The blocks of the discrete optimality system and the composed operator
///
/// ```text
///     ⎡ 2βM   0   -Mᵀ ⎤ ⎡ f ⎤
/// L = ⎢  0    M    Kᵀ ⎥ ⎢ u ⎥
///     ⎣ -M    K    0  ⎦ ⎣ τ ⎦
/// ```
///
/// `a_fd` is the five-point Laplacian on the same grid, used by the
/// relaxation as an approximate inverse of `M`.
#[derive(Debug, Clone)]
pub struct SaddleSystem {
    pub mass: CsrMatrix,
    pub stiffness: CsrMatrix,
    pub a_fd: CsrMatrix,
    pub beta: f64,
    pub operator: CsrMatrix,
}

impl SaddleSystem {
    pub fn new(mass: CsrMatrix, stiffness: CsrMatrix, a_fd: CsrMatrix, beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must be > 0, got {beta}"
            )));
        }
        let n = mass.n_rows();
        for (name, m) in [("mass", &mass), ("stiffness", &stiffness), ("a_fd", &a_fd)] {
            if m.n_rows() != n || m.n_cols() != n {
                return Err(Error::InvalidParameter(format!(
                    "{name} block is {}x{}, expected {n}x{n}",
                    m.n_rows(),
                    m.n_cols()
                )));
            }
        }
        let two_beta_m = mass.scale(2.0 * beta);
        let neg_mt = mass.transpose().scale(-1.0);
        let neg_m = mass.scale(-1.0);
        let kt = stiffness.transpose();
        let operator = block_matrix(&[
            vec![Some(&two_beta_m), None, Some(&neg_mt)],
            vec![None, Some(&mass), Some(&kt)],
            vec![Some(&neg_m), Some(&stiffness), None],
        ])?;
        Ok(Self {
            mass,
            stiffness,
            a_fd,
            beta,
            operator,
        })
    }

    /// Unknowns per field.
    pub fn n(&self) -> usize {
        self.mass.n_rows()
    }

    /// Total unknowns, `3n`.
    pub fn dim(&self) -> usize {
        3 * self.n()
    }
}

pub fn assemble_saddle(grid: &UniformGrid, beta: f64) -> Result<SaddleSystem> {
    SaddleSystem::new(
        assemble_mass_2d(grid),
        assemble_stiffness_2d(grid),
        assemble_fd_laplacian(grid),
        beta,
    )
}
