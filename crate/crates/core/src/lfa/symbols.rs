//! Fourier symbols of the discrete operators and of the relaxation.

use num_complex::Complex64;

use super::frequency::Frequency;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// 1D Q1 stiffness and mass symbols `(2/h)(1 - cos θ)` and `(h/3)(2 + cos θ)`.
pub fn symbols_1d(theta: f64, h: f64) -> (f64, f64) {
    let c = theta.cos();
    (2.0 / h * (1.0 - c), h / 3.0 * (2.0 + c))
}

/// Symbols of the scalar operators at one frequency. All are real because
/// the stencils are symmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarSymbols {
    pub theta: Frequency,
    /// mass `M`
    pub a: f64,
    /// stiffness `K`
    pub b: f64,
    /// five-point Laplacian `A_fd`
    pub a_fd: f64,
    /// `diag(M)`, `4h²/9`
    pub a_diag: f64,
}

impl ScalarSymbols {
    /// `â = 1 / Ã_fd`, undefined at θ = 0 (mod 2π).
    pub fn a_hat(&self) -> Result<f64> {
        if self.theta.is_zero_mod_2pi() || self.a_fd == 0.0 {
            return Err(Error::SingularFrequency {
                theta1: self.theta.theta1,
                theta2: self.theta.theta2,
            });
        }
        Ok(1.0 / self.a_fd)
    }
}

pub fn symbols_2d(theta: Frequency, h: f64) -> ScalarSymbols {
    let (c1, c2) = (theta.theta1.cos(), theta.theta2.cos());
    ScalarSymbols {
        theta,
        a: h * h / 9.0 * (4.0 + 2.0 * c1 + 2.0 * c2 + c1 * c2),
        b: 2.0 / 3.0 * (4.0 - c1 - c2 - 2.0 * c1 * c2),
        a_fd: (4.0 - 2.0 * c1 - 2.0 * c2) / (h * h),
        a_diag: 4.0 * h * h / 9.0,
    }
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn saddle_pattern(d_f: f64, d_u: f64, a: f64, b: f64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![re(d_f), re(0.0), re(-a)],
        vec![re(0.0), re(d_u), re(b)],
        vec![re(-a), re(b), re(0.0)],
    ])
}

/// Symbol of the saddle operator, `[[2βa, 0, -a], [0, a, b], [-a, b, 0]]`.
pub fn symbol_saddle(theta: Frequency, beta: f64, h: f64) -> ComplexMatrix {
    let s = symbols_2d(theta, h);
    saddle_pattern(2.0 * beta * s.a, s.a, s.a, s.b)
}

/// Symbol of the stiffness-based Braess-Sarazin preconditioner
/// `[[α 2βâ, 0, -a], [0, α â, b], [-a, b, 0]]`.
pub fn symbol_kf(theta: Frequency, beta: f64, h: f64, alpha: f64) -> Result<ComplexMatrix> {
    let s = symbols_2d(theta, h);
    let a_hat = s.a_hat()?;
    Ok(saddle_pattern(
        alpha * 2.0 * beta * a_hat,
        alpha * a_hat,
        s.a,
        s.b,
    ))
}

/// Symbol of the diagonal-mass preconditioner
/// `[[α 2β a_D, 0, -a], [0, α a_D, b], [-a, b, 0]]`.
pub fn symbol_kd(theta: Frequency, beta: f64, h: f64, alpha: f64) -> ComplexMatrix {
    let s = symbols_2d(theta, h);
    saddle_pattern(alpha * 2.0 * beta * s.a_diag, alpha * s.a_diag, s.a, s.b)
}

/// Which approximation of the (1,1) block the relaxation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelaxationVariant {
    /// `C⁻¹ = blockdiag(A_fd / 2β, A_fd)`
    Stiffness,
    /// `C = blockdiag(2β diag(M), diag(M))`
    DiagMass,
}

impl RelaxationVariant {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Stiffness => "stiffness",
            Self::DiagMass => "diag",
        }
    }
}

/// Relaxation parameters as seen by the Fourier analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationSymbol {
    pub variant: RelaxationVariant,
    pub alpha: f64,
    pub omega: f64,
}

impl RelaxationSymbol {
    pub fn stiffness(omega: f64) -> Self {
        Self {
            variant: RelaxationVariant::Stiffness,
            alpha: 1.0,
            omega,
        }
    }

    pub fn diag(omega: f64) -> Self {
        Self {
            variant: RelaxationVariant::DiagMass,
            alpha: 1.0,
            omega,
        }
    }

    pub fn preconditioner(&self, theta: Frequency, beta: f64, h: f64) -> Result<ComplexMatrix> {
        match self.variant {
            RelaxationVariant::Stiffness => symbol_kf(theta, beta, h, self.alpha),
            RelaxationVariant::DiagMass => Ok(symbol_kd(theta, beta, h, self.alpha)),
        }
    }

    /// `K̃⁻¹ L̃` at `theta`.
    pub fn preconditioned_operator(
        &self,
        theta: Frequency,
        beta: f64,
        h: f64,
    ) -> Result<ComplexMatrix> {
        let k = self.preconditioner(theta, beta, h)?;
        k.solve(&symbol_saddle(theta, beta, h))
    }

    /// Error propagation symbol `I - ω K̃⁻¹ L̃`.
    pub fn smoother(&self, theta: Frequency, beta: f64, h: f64) -> Result<ComplexMatrix> {
        let kl = self.preconditioned_operator(theta, beta, h)?;
        Ok(&ComplexMatrix::identity(3) - &kl.scale(re(self.omega)))
    }
}
