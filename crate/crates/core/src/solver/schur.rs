use super::config::{InnerMgConfig, SchurMode};
use crate::discretization::{galerkin_coarsen, SaddleSystem, Transfer};
use crate::error::{Error, Result};
use crate::lfa::RelaxationVariant;
use crate::linalg::{add_scaled, cg_solve, spgemm, BandedCholesky, CsrMatrix, DenseLu};

/// `S = B C⁻¹ Bᵀ = (1/2β) M Ĉ M + K Ĉ K`, where `Ĉ` is `A_fd` for the
/// stiffness variant and `diag(M)⁻¹` for the diagonal one.
pub fn schur_matrix(system: &SaddleSystem, variant: RelaxationVariant) -> Result<CsrMatrix> {
    let c_hat = match variant {
        RelaxationVariant::Stiffness => system.a_fd.clone(),
        RelaxationVariant::DiagMass => {
            let inv: Vec<f64> = system.mass.diagonal().iter().map(|d| 1.0 / d).collect();
            CsrMatrix::diagonal_matrix(&inv)
        }
    };
    let mcm = spgemm(&spgemm(&system.mass, &c_hat)?, &system.mass)?;
    let kck = spgemm(&spgemm(&system.stiffness, &c_hat)?, &system.stiffness)?;
    add_scaled(&mcm, &kck, 1.0 / (2.0 * system.beta), 1.0)
}

#[derive(Debug, Clone)]
struct InnerLevel {
    matrix: CsrMatrix,
    inv_diag: Vec<f64>,
}

/// Scalar multigrid hierarchy for one Schur complement: Galerkin coarsening
/// with the same bilinear transfers as the outer method, weighted Jacobi
/// smoothing and a dense solve on the coarsest grid.
#[derive(Debug, Clone)]
pub struct InnerSchurMg {
    levels: Vec<InnerLevel>,
    transfers: Vec<Transfer>,
    coarse: DenseLu,
    config: InnerMgConfig,
}

impl InnerSchurMg {
    /// `transfers[k]` must connect inner level `k + 1` to inner level `k`.
    pub fn new(schur: CsrMatrix, transfers: &[Transfer], config: InnerMgConfig) -> Result<Self> {
        let mut levels = Vec::with_capacity(transfers.len() + 1);
        let mut current = schur;
        for t in transfers {
            let coarser = galerkin_coarsen(&current, &t.prolongation, &t.restriction)?;
            levels.push(InnerLevel::new(current)?);
            current = coarser;
        }
        let coarse = DenseLu::factor(&current)?;
        levels.push(InnerLevel::new(current)?);
        Ok(Self {
            levels,
            transfers: transfers.to_vec(),
            coarse,
            config,
        })
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn matrix(&self, level: usize) -> &CsrMatrix {
        &self.levels[level].matrix
    }

    /// Runs the configured number of V-cycles from a zero initial guess.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut x = vec![0.0; rhs.len()];
        for _ in 0..self.config.n_cycles {
            self.v_cycle(0, &mut x, rhs)?;
        }
        Ok(x)
    }

    pub fn v_cycle(&self, k: usize, x: &mut [f64], b: &[f64]) -> Result<()> {
        if k + 1 == self.levels.len() {
            x.copy_from_slice(&self.coarse.solve(b)?);
            return Ok(());
        }
        let level = &self.levels[k];
        let mut r = vec![0.0; b.len()];
        for _ in 0..self.config.nu_pre {
            level.jacobi(x, b, &mut r, self.config.omega_j);
        }
        level.matrix.residual_into(b, x, &mut r);
        let t = &self.transfers[k];
        let rc = t.restriction.spmv(&r)?;
        let mut ec = vec![0.0; rc.len()];
        self.v_cycle(k + 1, &mut ec, &rc)?;
        t.prolongation.mul_vec_add(1.0, &ec, x);
        for _ in 0..self.config.nu_post {
            level.jacobi(x, b, &mut r, self.config.omega_j);
        }
        Ok(())
    }
}

impl InnerLevel {
    fn new(matrix: CsrMatrix) -> Result<Self> {
        let diag = matrix.diagonal();
        if let Some((row, &d)) = diag.iter().enumerate().find(|(_, d)| !(**d > 0.0)) {
            return Err(Error::NotPositiveDefinite { row, pivot: d });
        }
        let inv_diag = diag.iter().map(|d| 1.0 / d).collect();
        Ok(Self { matrix, inv_diag })
    }

    fn jacobi(&self, x: &mut [f64], b: &[f64], r: &mut [f64], omega: f64) {
        self.matrix.residual_into(b, x, r);
        for ((xi, ri), di) in x.iter_mut().zip(r.iter()).zip(&self.inv_diag) {
            *xi += omega * di * ri;
        }
    }
}

/// Per-level solver for `S δy = rhs`.
#[derive(Debug, Clone)]
pub enum SchurSolver {
    Direct {
        matrix: CsrMatrix,
        factor: BandedCholesky,
    },
    Cg {
        matrix: CsrMatrix,
        tol: f64,
        max_it: usize,
    },
    InnerMg(InnerSchurMg),
}

impl SchurSolver {
    pub fn new(schur: CsrMatrix, mode: SchurMode, transfers: &[Transfer]) -> Result<Self> {
        Ok(match mode {
            SchurMode::Direct => {
                let factor = BandedCholesky::factor(&schur)?;
                Self::Direct {
                    matrix: schur,
                    factor,
                }
            }
            SchurMode::Cg { tol, max_it } => Self::Cg {
                matrix: schur,
                tol,
                max_it,
            },
            SchurMode::InnerMg(cfg) => Self::InnerMg(InnerSchurMg::new(schur, transfers, cfg)?),
        })
    }

    pub fn matrix(&self) -> &CsrMatrix {
        match self {
            Self::Direct { matrix, .. } | Self::Cg { matrix, .. } => matrix,
            Self::InnerMg(mg) => mg.matrix(0),
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        match self {
            Self::Direct { factor, .. } => factor.solve(rhs),
            Self::Cg {
                matrix,
                tol,
                max_it,
            } => {
                if rhs.iter().all(|&v| v == 0.0) {
                    return Ok(vec![0.0; rhs.len()]);
                }
                cg_solve(matrix, rhs, *tol, *max_it).map(|(x, _)| x)
            }
            Self::InnerMg(mg) => mg.solve(rhs),
        }
    }
}
