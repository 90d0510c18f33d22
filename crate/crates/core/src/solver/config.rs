use crate::error::{Error, Result};
use crate::lfa::RelaxationVariant;

/// Multigrid cycle on the Schur complement used by inexact relaxation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerMgConfig {
    pub n_cycles: usize,
    pub nu_pre: usize,
    pub nu_post: usize,
    /// weighted Jacobi damping
    pub omega_j: f64,
}

impl Default for InnerMgConfig {
    fn default() -> Self {
        Self {
            n_cycles: 3,
            nu_pre: 2,
            nu_post: 2,
            omega_j: 0.8,
        }
    }
}

/// How the Schur complement system inside each relaxation step is solved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchurMode {
    /// Banded Cholesky factorization, exact up to rounding.
    Direct,
    /// Conjugate gradients to a relative residual tolerance.
    Cg { tol: f64, max_it: usize },
    /// A fixed number of V-cycles with weighted Jacobi smoothing.
    InnerMg(InnerMgConfig),
}

impl SchurMode {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Direct => "direct",
            Self::Cg { .. } => "cg",
            Self::InnerMg(_) => "inner-mg",
        }
    }
}

/// Braess-Sarazin relaxation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsrConfig {
    pub alpha: f64,
    pub omega: f64,
    pub variant: RelaxationVariant,
    pub schur: SchurMode,
}

impl BsrConfig {
    /// Stiffness-based relaxation with an exact Schur solve, `α = 1`, `ω = 3/4`.
    pub fn exact() -> Self {
        Self {
            alpha: 1.0,
            omega: 0.75,
            variant: RelaxationVariant::Stiffness,
            schur: SchurMode::Direct,
        }
    }

    /// Stiffness-based relaxation with three inner V(2,2)-cycles,
    /// `α = 1.5`, `ω = 3α/4`.
    pub fn inexact() -> Self {
        Self {
            alpha: 1.5,
            omega: 1.125,
            variant: RelaxationVariant::Stiffness,
            schur: SchurMode::InnerMg(InnerMgConfig::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !(self.omega > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "relaxation needs alpha > 0 and omega > 0, got alpha={} omega={}",
                self.alpha, self.omega
            )));
        }
        match self.schur {
            SchurMode::Cg { tol, max_it } if !(tol > 0.0) || max_it == 0 => {
                Err(Error::InvalidParameter(format!(
                    "cg needs tol > 0 and max_it > 0, got {tol} and {max_it}"
                )))
            }
            SchurMode::InnerMg(c) if c.n_cycles == 0 || !(c.omega_j > 0.0) => {
                Err(Error::InvalidParameter(format!(
                    "inner multigrid needs at least one cycle and omega_j > 0, got {} and {}",
                    c.n_cycles, c.omega_j
                )))
            }
            _ => Ok(()),
        }
    }
}

/// Outer multigrid cycle shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleConfig {
    pub nu1: usize,
    pub nu2: usize,
    /// 1 for V-cycles, 2 for W-cycles
    pub gamma: usize,
}

impl CycleConfig {
    /// `ν` smoothing steps split as `ν1 = ⌈ν/2⌉`, `ν2 = ⌊ν/2⌋`.
    pub fn split(nu: usize, gamma: usize) -> Self {
        Self {
            nu1: nu.div_ceil(2),
            nu2: nu / 2,
            gamma,
        }
    }

    pub fn w(nu: usize) -> Self {
        Self::split(nu, 2)
    }

    pub fn v(nu: usize) -> Self {
        Self::split(nu, 1)
    }

    pub fn nu(&self) -> usize {
        self.nu1 + self.nu2
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu() == 0 {
            return Err(Error::InvalidParameter(
                "cycle needs at least one smoothing step".into(),
            ));
        }
        if !(1..=2).contains(&self.gamma) {
            return Err(Error::InvalidParameter(format!(
                "cycle index must be 1 (V) or 2 (W), got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_split() {
        assert_eq!((CycleConfig::w(1).nu1, CycleConfig::w(1).nu2), (1, 0));
        assert_eq!((CycleConfig::w(3).nu1, CycleConfig::w(3).nu2), (2, 1));
        assert_eq!((CycleConfig::v(4).nu1, CycleConfig::v(4).nu2), (2, 2));
        assert!(CycleConfig::split(0, 2).validate().is_err());
        assert!(CycleConfig::split(1, 3).validate().is_err());
    }

    #[test]
    fn presets_validate() {
        assert!(BsrConfig::exact().validate().is_ok());
        assert!(BsrConfig::inexact().validate().is_ok());
        let mut bad = BsrConfig::exact();
        bad.alpha = 0.0;
        assert!(bad.validate().is_err());
        bad = BsrConfig::exact();
        bad.schur = SchurMode::Cg {
            tol: 0.0,
            max_it: 10,
        };
        assert!(bad.validate().is_err());
    }
}
