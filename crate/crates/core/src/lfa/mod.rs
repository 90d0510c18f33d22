//! Local Fourier analysis of the stiffness-based Braess-Sarazin relaxation:
//! operator symbols, smoothing factors and two-grid convergence factors.

mod frequency;
mod smoothing;
mod symbols;
mod two_grid;

pub use frequency::{
    harmonics, high_frequency_samples, low_frequency_lattice, Frequency, HARMONIC_SHIFTS,
    HIGH_EXTREMES,
};
pub use smoothing::{
    eigenvalue_range, optimal_smoothing, optimal_smoothing_with_density, ratio_range,
    smoothing_factor, DEFAULT_DENSITY,
};
pub use symbols::{
    symbol_kd, symbol_kf, symbol_saddle, symbols_1d, symbols_2d, RelaxationSymbol,
    RelaxationVariant, ScalarSymbols,
};
pub use two_grid::{
    coarse_grid_correction_symbol, prolongation_symbol, smoother_symbol, two_grid_factor,
    two_grid_symbol, TwoGridConfig,
};
