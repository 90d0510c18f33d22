//! Right-hand side of the discrete optimality system.

use super::grid::UniformGrid;
use super::stencil::{stencil_mass_2d, stencil_stiffness_2d};

/// Desired state `û` and Dirichlet data `g`, both sampled at every node of
/// the `(n_cells + 1)²` mesh (x fastest). Only boundary entries of `g` are read.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemData {
    pub grid: UniformGrid,
    pub u_hat: Vec<f64>,
    pub g: Vec<f64>,
}

impl ProblemData {
    pub fn from_fns(
        grid: UniformGrid,
        u_hat: impl Fn(f64, f64) -> f64,
        g: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let n = grid.n_cells();
        let mut uh = Vec::with_capacity((n + 1) * (n + 1));
        let mut gv = Vec::with_capacity((n + 1) * (n + 1));
        for j in 0..=n {
            for i in 0..=n {
                let (x, y) = grid.coords(i, j);
                uh.push(u_hat(x, y));
                gv.push(if grid.is_boundary(i, j) { g(x, y) } else { 0.0 });
            }
        }
        Self {
            grid,
            u_hat: uh,
            g: gv,
        }
    }

    /// `û = 0`, `g = 0`: the discrete solution is zero.
    pub fn homogeneous(grid: UniformGrid) -> Self {
        Self::from_fns(grid, |_, _| 0.0, |_, _| 0.0)
    }

    /// `û = (2x-1)²(2y-1)²` on `[0, 1/2]²` and zero elsewhere, with the state
    /// matching `û` on the boundary.
    pub fn peaked_target(grid: UniformGrid) -> Self {
        Self::from_fns(grid, peaked_target_fn, peaked_target_fn)
    }

    pub fn node(&self, i: usize, j: usize) -> usize {
        j * (self.grid.n_cells() + 1) + i
    }
}

pub fn peaked_target_fn(x: f64, y: f64) -> f64 {
    if x <= 0.5 && y <= 0.5 {
        let (a, b) = (2.0 * x - 1.0, 2.0 * y - 1.0);
        a * a * b * b
    } else {
        0.0
    }
}

/// Builds `b = (b_f, b_u, b_τ)` in field order f, u, τ.
///
/// * `b_f = 0`
/// * `b_u = M_ii û_i + M_ib (û_b - g_b)`: mass product of the nodal
///   interpolant of `û` minus the boundary lift of the state
/// * `b_τ = -K_ib g_b`: Dirichlet lift of the state equation
pub fn assemble_rhs(data: &ProblemData) -> Vec<f64> {
    let grid = data.grid;
    let n = grid.n_cells() as isize;
    let n_int = grid.n_interior();
    let (m, k) = (stencil_mass_2d(grid.h()), stencil_stiffness_2d(grid.h()));
    let mut b = vec![0.0; 3 * n_int];
    for j in 1..n {
        for i in 1..n {
            let row = grid.interior_index(i as usize, j as usize).unwrap();
            let mut bu = 0.0;
            let mut btau = 0.0;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (ni, nj) = ((i + dx) as usize, (j + dy) as usize);
                    let node = data.node(ni, nj);
                    bu += m.tap(dx, dy) * data.u_hat[node];
                    if grid.is_boundary(ni, nj) {
                        bu -= m.tap(dx, dy) * data.g[node];
                        btau -= k.tap(dx, dy) * data.g[node];
                    }
                }
            }
            b[n_int + row] = bu;
            b[2 * n_int + row] = btau;
        }
    }
    b
}
