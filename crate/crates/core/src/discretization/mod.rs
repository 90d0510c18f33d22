//! Q1 finite-element discretization of the optimality system on uniform
//! grids of the unit square, with grid transfers for multigrid.

mod assembly;
mod grid;
mod hierarchy;
mod problem;
mod stencil;
mod transfer;

pub use assembly::{
    assemble_fd_laplacian, assemble_mass_2d, assemble_saddle, assemble_stencil,
    assemble_stencil_1d, assemble_stiffness_2d, SaddleSystem,
};
pub use grid::UniformGrid;
pub use hierarchy::{build_hierarchy, GridHierarchy, GridLevel, Transfer};
pub use problem::{assemble_rhs, peaked_target_fn, ProblemData};
pub use stencil::{
    stencil_fd_laplacian, stencil_mass_1d, stencil_mass_2d, stencil_stiffness_1d,
    stencil_stiffness_2d, Stencil1d, Stencil3x3,
};
pub use transfer::{field_blocks, galerkin_coarsen, prolongation, restriction};
