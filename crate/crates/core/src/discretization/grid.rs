use crate::error::{Error, Result};

/// Uniform `n_cells × n_cells` mesh of the unit square.
///
/// Unknowns live on interior nodes only, ordered lexicographically with the
/// x index running fastest: node `(i, j)`, `1 <= i, j <= n_cells - 1`, has
/// index `(j - 1)(n_cells - 1) + (i - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformGrid {
    n_cells: usize,
}

impl UniformGrid {
    pub const COARSEST_CELLS: usize = 4;

    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < Self::COARSEST_CELLS || !n_cells.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_cells must be a power of two >= {}, got {n_cells}",
                Self::COARSEST_CELLS
            )));
        }
        Ok(Self { n_cells })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    /// Interior nodes per side.
    pub fn side(&self) -> usize {
        self.n_cells - 1
    }

    pub fn n_interior(&self) -> usize {
        self.side() * self.side()
    }

    /// Index of interior node `(i, j)`; `None` for boundary nodes.
    pub fn interior_index(&self, i: usize, j: usize) -> Option<usize> {
        let n = self.n_cells;
        if (1..n).contains(&i) && (1..n).contains(&j) {
            Some((j - 1) * self.side() + (i - 1))
        } else {
            None
        }
    }

    /// Grid coordinates `(i, j)` of interior unknown `k`.
    pub fn node_of(&self, k: usize) -> (usize, usize) {
        (k % self.side() + 1, k / self.side() + 1)
    }

    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        (i as f64 * self.h(), j as f64 * self.h())
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.n_cells || j == self.n_cells
    }

    /// The next coarser grid, if it is not below the coarsest 4×4 mesh.
    pub fn coarsen(&self) -> Option<Self> {
        (self.n_cells > Self::COARSEST_CELLS).then_some(Self {
            n_cells: self.n_cells / 2,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_sizes() {
        assert!(UniformGrid::new(2).is_err());
        assert!(UniformGrid::new(12).is_err());
        assert!(UniformGrid::new(4).is_ok());
    }

    #[test]
    fn indexing_round_trip() {
        let g = UniformGrid::new(8).unwrap();
        assert_eq!(g.n_interior(), 49);
        assert_eq!(g.interior_index(1, 1), Some(0));
        assert_eq!(g.interior_index(2, 1), Some(1));
        assert_eq!(g.interior_index(1, 2), Some(7));
        assert_eq!(g.interior_index(0, 3), None);
        for k in 0..g.n_interior() {
            let (i, j) = g.node_of(k);
            assert_eq!(g.interior_index(i, j), Some(k));
        }
        assert_eq!(g.coarsen().unwrap().n_cells(), 4);
        assert!(UniformGrid::new(4).unwrap().coarsen().is_none());
    }
}
