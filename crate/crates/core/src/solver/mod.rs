//! Braess-Sarazin relaxation inside V- and W-cycles for the saddle-point
//! system, with exact or multigrid-approximated Schur complement solves.

mod config;
mod measure;
mod multigrid;
mod schur;

pub use config::{BsrConfig, CycleConfig, InnerMgConfig, SchurMode};
pub use measure::{
    measure_rho, random_vector, solve_to_tol, ConvergenceReport, InitialGuess, Solution,
    DEFAULT_MAX_ITERATIONS, DIVERGENCE_WINDOW, RHO_TAIL,
};
pub use multigrid::{BsrSmoother, MgHierarchy};
pub use schur::{schur_matrix, InnerSchurMg, SchurSolver};
