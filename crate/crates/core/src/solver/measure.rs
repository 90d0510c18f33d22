use super::config::{BsrConfig, CycleConfig};
use super::multigrid::MgHierarchy;
use crate::discretization::{assemble_rhs, ProblemData};
use crate::error::{Error, Result};
use crate::linalg::norm2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Number of trailing cycles averaged for `rho_tail`.
pub const RHO_TAIL: usize = 50;
/// Consecutive growing cycles after which a run counts as diverged.
pub const DIVERGENCE_WINDOW: usize = 10;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// `‖d⁽ⁿ⁾‖₂ / ‖d⁽⁰⁾‖₂` for `n = 0, 1, …`
    pub residual_norms: Vec<f64>,
    /// `(‖d⁽ⁿ⁾‖ / ‖d⁽⁰⁾‖)^(1/n)` over the whole run
    pub rho_hat: f64,
    /// geometric mean contraction over the last [`RHO_TAIL`] cycles, closer
    /// to the asymptotic factor than `rho_hat`
    pub rho_tail: f64,
    pub iterations_to_tol: Option<usize>,
    pub diverged: bool,
}

impl ConvergenceReport {
    fn from_log_ratios(log_ratios: &[f64], iterations_to_tol: Option<usize>) -> Self {
        let mut residual_norms = Vec::with_capacity(log_ratios.len() + 1);
        let mut acc = 0.0;
        residual_norms.push(1.0);
        for lr in log_ratios {
            acc += lr;
            residual_norms.push(acc.exp());
        }
        let n = log_ratios.len();
        let (rho_hat, rho_tail) = if n == 0 {
            (0.0, 0.0)
        } else {
            let tail = &log_ratios[n.saturating_sub(RHO_TAIL)..];
            (
                (acc / n as f64).exp(),
                (tail.iter().sum::<f64>() / tail.len() as f64).exp(),
            )
        };
        let diverged = log_ratios
            .windows(DIVERGENCE_WINDOW)
            .any(|w| w.iter().all(|&lr| lr > 0.0))
            || log_ratios.iter().any(|lr| !lr.is_finite());
        Self {
            residual_norms,
            rho_hat,
            rho_tail,
            iterations_to_tol,
            diverged,
        }
    }
}

/// Starting iterate for [`MgHierarchy::solve_to_tol`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialGuess {
    Zero,
    /// entries uniform on `[−1, 1]`, see [`random_vector`]
    Random {
        seed: u64,
    },
}

impl InitialGuess {
    pub fn vector(&self, n: usize) -> Vec<f64> {
        match *self {
            Self::Zero => vec![0.0; n],
            Self::Random { seed } => random_vector(n, seed),
        }
    }
}

/// Result of [`solve_to_tol`].
#[derive(Debug, Clone)]
pub struct Solution {
    pub z: Vec<f64>,
    pub report: ConvergenceReport,
}

/// Seeded uniform samples on `[−1, 1]`.
pub fn random_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

impl MgHierarchy {
    /// Runs `n_cycles` cycles on the homogeneous problem from a random start.
    ///
    /// The iterate is rescaled to unit residual after every cycle; the
    /// iteration is linear, so the per-cycle ratios are unchanged and the
    /// residual cannot underflow.
    pub fn measure_rho(
        &self,
        cycle: &CycleConfig,
        n_cycles: usize,
        seed: u64,
    ) -> Result<ConvergenceReport> {
        cycle.validate()?;
        if n_cycles == 0 {
            return Err(Error::InvalidParameter("need at least one cycle".into()));
        }
        let dim = self.dim();
        let rhs = vec![0.0; dim];
        let mut z = random_vector(dim, seed);
        let mut r = vec![0.0; dim];
        self.operator().residual_into(&rhs, &z, &mut r);
        let mut norm = norm2(&r);
        let mut log_ratios = Vec::with_capacity(n_cycles);
        for _ in 0..n_cycles {
            z.iter_mut().for_each(|v| *v /= norm);
            self.mg_cycle(0, &mut z, &rhs, cycle)?;
            self.operator().residual_into(&rhs, &z, &mut r);
            norm = norm2(&r);
            log_ratios.push(norm.ln());
            if !(norm > 0.0) || !norm.is_finite() {
                break;
            }
        }
        Ok(ConvergenceReport::from_log_ratios(&log_ratios, None))
    }

    /// Iterates until `‖d⁽ⁿ⁾‖ / ‖d⁽⁰⁾‖ < tol` or `max_it` cycles. Hitting
    /// the cap is reported through `iterations_to_tol == None`.
    pub fn solve_to_tol(
        &self,
        rhs: &[f64],
        cycle: &CycleConfig,
        tol: f64,
        max_it: usize,
        initial: InitialGuess,
    ) -> Result<Solution> {
        cycle.validate()?;
        let dim = self.dim();
        if rhs.len() != dim {
            return Err(Error::DimensionMismatch {
                op: "solve_to_tol",
                expected: dim,
                got: rhs.len(),
            });
        }
        let mut z = initial.vector(dim);
        let mut r = vec![0.0; dim];
        self.operator().residual_into(rhs, &z, &mut r);
        let d0 = norm2(&r);
        if d0 == 0.0 {
            return Ok(Solution {
                z,
                report: ConvergenceReport::from_log_ratios(&[], Some(0)),
            });
        }
        let mut prev = d0;
        let mut log_ratios = Vec::new();
        let mut reached = None;
        for it in 1..=max_it {
            self.mg_cycle(0, &mut z, rhs, cycle)?;
            self.operator().residual_into(rhs, &z, &mut r);
            let d = norm2(&r);
            log_ratios.push((d / prev).ln());
            prev = d;
            if d / d0 < tol {
                reached = Some(it);
                break;
            }
            if !d.is_finite() {
                break;
            }
        }
        Ok(Solution {
            z,
            report: ConvergenceReport::from_log_ratios(&log_ratios, reached),
        })
    }
}

/// Builds the hierarchy and measures the asymptotic convergence factor.
pub fn measure_rho(
    n_fine: usize,
    beta: f64,
    cycle: &CycleConfig,
    bsr: &BsrConfig,
    n_cycles: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    MgHierarchy::build(n_fine, beta, *bsr)?.measure_rho(cycle, n_cycles, seed)
}

/// Builds the hierarchy and solves the problem to a relative residual `tol`.
pub fn solve_to_tol(
    problem: &ProblemData,
    beta: f64,
    cycle: &CycleConfig,
    bsr: &BsrConfig,
    tol: f64,
    initial: InitialGuess,
) -> Result<Solution> {
    let mg = MgHierarchy::build(problem.grid.n_cells(), beta, *bsr)?;
    mg.solve_to_tol(
        &assemble_rhs(problem),
        cycle,
        tol,
        DEFAULT_MAX_ITERATIONS,
        initial,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretization::UniformGrid;

    #[test]
    fn report_statistics() {
        let lr = vec![(0.5f64).ln(); 100];
        let rep = ConvergenceReport::from_log_ratios(&lr, None);
        assert!((rep.rho_hat - 0.5).abs() < 1e-14);
        assert!((rep.rho_tail - 0.5).abs() < 1e-14);
        let mut mixed = vec![(0.1f64).ln(); 50];
        mixed.extend(vec![(0.4f64).ln(); 50]);
        let rep = ConvergenceReport::from_log_ratios(&mixed, None);
        assert!((rep.rho_hat - 0.2).abs() < 1e-14);
        assert!((rep.rho_tail - 0.4).abs() < 1e-14);
        assert!(!rep.diverged);
        assert_eq!(rep.residual_norms.len(), 101);
        let grow = vec![(1.1f64).ln(); 12];
        assert!(ConvergenceReport::from_log_ratios(&grow, None).diverged);
    }

    #[test]
    fn random_start_is_reproducible() {
        assert_eq!(random_vector(10, 3), random_vector(10, 3));
        assert_ne!(random_vector(10, 3), random_vector(10, 4));
        assert!(random_vector(1000, 1)
            .iter()
            .all(|v| (-1.0..=1.0).contains(v)));
    }

    #[test]
    fn homogeneous_problem_needs_no_iterations() {
        let p = ProblemData::homogeneous(UniformGrid::new(8).unwrap());
        let sol = solve_to_tol(
            &p,
            1e-2,
            &CycleConfig::w(1),
            &BsrConfig::inexact(),
            1e-10,
            InitialGuess::Zero,
        )
        .unwrap();
        assert_eq!(sol.report.iterations_to_tol, Some(0));
        assert!(sol.z.iter().all(|&v| v == 0.0));
    }
}
