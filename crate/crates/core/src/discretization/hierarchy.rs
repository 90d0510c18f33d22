use super::assembly::{assemble_fd_laplacian, assemble_saddle, SaddleSystem};
use super::grid::UniformGrid;
use super::transfer::{galerkin_coarsen, prolongation, restriction};
use crate::error::{Error, Result};
use crate::linalg::CsrMatrix;

/// Scalar transfers between a level and the next coarser one.
#[derive(Debug, Clone)]
pub struct Transfer {
    /// coarse → fine
    pub prolongation: CsrMatrix,
    /// fine → coarse, `Pᵀ`
    pub restriction: CsrMatrix,
}

#[derive(Debug, Clone)]
pub struct GridLevel {
    pub grid: UniformGrid,
    pub system: SaddleSystem,
}

/// Levels from the finest grid (index 0) down to the 4×4 mesh.
///
/// Coarse mass and stiffness blocks are Galerkin products of the finer
/// blocks, so the coarse saddle operator is `R L P` with the scalar
/// transfers replicated per field. The five-point Laplacian is
/// rediscretized on every level.
#[derive(Debug, Clone)]
pub struct GridHierarchy {
    pub levels: Vec<GridLevel>,
    /// `transfers[l]` connects level `l + 1` to level `l`.
    pub transfers: Vec<Transfer>,
}

impl GridHierarchy {
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn finest(&self) -> &GridLevel {
        &self.levels[0]
    }

    pub fn coarsest(&self) -> &GridLevel {
        self.levels.last().unwrap()
    }

    pub fn beta(&self) -> f64 {
        self.levels[0].system.beta
    }
}

pub fn build_hierarchy(n_fine: usize, beta: f64) -> Result<GridHierarchy> {
    if n_fine < 8 {
        return Err(Error::InvalidGrid(format!(
            "finest grid needs at least 8 cells per side, got {n_fine}"
        )));
    }
    let fine = UniformGrid::new(n_fine)?;
    let mut levels = vec![GridLevel {
        grid: fine,
        system: assemble_saddle(&fine, beta)?,
    }];
    let mut transfers = Vec::new();
    while let Some(coarse) = levels.last().unwrap().grid.coarsen() {
        let finer = levels.last().unwrap();
        let p = prolongation(&coarse, &finer.grid)?;
        let r = restriction(&p);
        let mass = galerkin_coarsen(&finer.system.mass, &p, &r)?;
        let stiffness = galerkin_coarsen(&finer.system.stiffness, &p, &r)?;
        let system = SaddleSystem::new(mass, stiffness, assemble_fd_laplacian(&coarse), beta)?;
        transfers.push(Transfer {
            prolongation: p,
            restriction: r,
        });
        levels.push(GridLevel {
            grid: coarse,
            system,
        });
    }
    Ok(GridHierarchy { levels, transfers })
}
