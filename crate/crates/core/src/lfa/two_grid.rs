//! Two-grid Fourier analysis: the 12×12 symbol of
//! `S^ν₂ (I - P L_2h⁻¹ R L_h) S^ν₁` over the four harmonics.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::frequency::{harmonics, low_frequency_lattice, Frequency};
use super::symbols::{symbol_saddle, RelaxationSymbol};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoGridConfig {
    pub nu1: usize,
    pub nu2: usize,
    /// Samples per axis of the shifted low-frequency lattice.
    pub n_samples: usize,
    /// Distance of the lattice from the edge of the low-frequency box.
    pub tau: f64,
    pub beta: f64,
    pub h: f64,
    pub relaxation: RelaxationSymbol,
}

impl TwoGridConfig {
    /// Exact stiffness-based relaxation with `α = 1`, `ω = 3/4` on the
    /// default 32×32 lattice with `τ = π/64`.
    pub fn stiffness(beta: f64, h: f64, nu1: usize, nu2: usize) -> Self {
        Self {
            nu1,
            nu2,
            n_samples: 32,
            tau: PI / 64.0,
            beta,
            h,
            relaxation: RelaxationSymbol::stiffness(0.75),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_samples < 2 {
            return Err(Error::InvalidParameter("n_samples must be >= 2".into()));
        }
        if !(self.tau > 0.0) {
            return Err(Error::InvalidParameter("tau must be > 0".into()));
        }
        if !(self.beta > 0.0) || !(self.h > 0.0) {
            return Err(Error::InvalidParameter("beta and h must be > 0".into()));
        }
        Ok(())
    }
}

/// Bilinear interpolation symbol `¼(1 + cos θ₁)(1 + cos θ₂)`.
pub fn prolongation_symbol(theta: Frequency) -> f64 {
    0.25 * (1.0 + theta.theta1.cos()) * (1.0 + theta.theta2.cos())
}

fn singular(theta: Frequency) -> Error {
    Error::SingularFrequency {
        theta1: theta.theta1,
        theta2: theta.theta2,
    }
}

fn block_diag(blocks: &[ComplexMatrix; 4]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(12);
    for (k, b) in blocks.iter().enumerate() {
        m.set_block(3 * k, 3 * k, b);
    }
    m
}

/// Coarse-grid correction symbol `I - P̃ L̃_2h⁻¹ R̃ L̃_h` with `R̃ = P̃ᴴ` and the
/// Galerkin coarse symbol `L̃_2h = R̃ L̃_h P̃`.
pub fn coarse_grid_correction_symbol(theta: Frequency, beta: f64, h: f64) -> Result<ComplexMatrix> {
    let hs = harmonics(theta)?;
    let l_blocks = hs.map(|t| symbol_saddle(t, beta, h));
    let p = hs.map(prolongation_symbol);

    let mut coarse = ComplexMatrix::zeros(3);
    for k in 0..4 {
        coarse = &coarse + &l_blocks[k].scale(Complex64::new(p[k] * p[k], 0.0));
    }
    let coarse_inv = coarse.inverse().map_err(|_| singular(theta))?;

    let mut cgc = ComplexMatrix::identity(12);
    for (i, pi) in p.iter().enumerate() {
        for (j, pj) in p.iter().enumerate() {
            let blk = (&coarse_inv * &l_blocks[j]).scale(Complex64::new(pi * pj, 0.0));
            for r in 0..3 {
                for c in 0..3 {
                    cgc[(3 * i + r, 3 * j + c)] -= blk[(r, c)];
                }
            }
        }
    }
    Ok(cgc)
}

/// Block-diagonal smoother symbol over the four harmonics.
pub fn smoother_symbol(theta: Frequency, cfg: &TwoGridConfig) -> Result<ComplexMatrix> {
    let hs = harmonics(theta)?;
    let mut blocks = Vec::with_capacity(4);
    for t in hs {
        blocks.push(cfg.relaxation.smoother(t, cfg.beta, cfg.h)?);
    }
    let blocks: [ComplexMatrix; 4] = blocks.try_into().unwrap();
    Ok(block_diag(&blocks))
}

/// Two-grid error propagation symbol at a low frequency.
pub fn two_grid_symbol(theta: Frequency, cfg: &TwoGridConfig) -> Result<ComplexMatrix> {
    cfg.validate()?;
    if theta.is_zero_mod_2pi() {
        return Err(singular(theta));
    }
    let s = smoother_symbol(theta, cfg)?;
    let cgc = coarse_grid_correction_symbol(theta, cfg.beta, cfg.h)?;
    Ok(&(&s.pow(cfg.nu2) * &cgc) * &s.pow(cfg.nu1))
}

/// Largest spectral radius of the two-grid symbol over the shifted lattice.
pub fn two_grid_factor(cfg: &TwoGridConfig) -> Result<f64> {
    cfg.validate()?;
    low_frequency_lattice(cfg.n_samples, cfg.tau)
        .into_iter()
        .try_fold(0.0f64, |worst, theta| {
            Ok(worst.max(two_grid_symbol(theta, cfg)?.spectral_radius()?))
        })
}
