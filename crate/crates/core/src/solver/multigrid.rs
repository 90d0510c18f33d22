use super::config::{BsrConfig, CycleConfig};
use super::schur::{schur_matrix, SchurSolver};
use crate::discretization::{build_hierarchy, GridHierarchy, GridLevel, SaddleSystem, Transfer};
use crate::error::{Error, Result};
use crate::lfa::RelaxationVariant;
use crate::linalg::{CsrMatrix, DenseLu};

/// Braess-Sarazin relaxation on one level: the Schur complement solver and
/// the pieces needed to apply `C⁻¹`.
#[derive(Debug, Clone)]
pub struct BsrSmoother {
    pub schur: SchurSolver,
    /// `1 / diag(M)`, used by the diagonal variant
    inv_mass_diag: Vec<f64>,
}

impl BsrSmoother {
    /// `transfers` seeds the inner Schur hierarchy and is only read in
    /// inner-multigrid mode; pass the transfers below this level.
    pub fn new(system: &SaddleSystem, bsr: &BsrConfig, transfers: &[Transfer]) -> Result<Self> {
        bsr.validate()?;
        let s = schur_matrix(system, bsr.variant)?;
        Ok(Self {
            schur: SchurSolver::new(s, bsr.schur, transfers)?,
            inv_mass_diag: system.mass.diagonal().iter().map(|d| 1.0 / d).collect(),
        })
    }

    /// Solves the preconditioner system `K δz = r` by the two-stage Schur
    /// procedure: `S δy = B C⁻¹ r_x − α r_y`, then
    /// `δx = C⁻¹ (r_x − Bᵀ δy) / α`.
    pub fn correction(&self, sys: &SaddleSystem, bsr: &BsrConfig, r: &[f64]) -> Result<Vec<f64>> {
        check_len("BsrSmoother::correction", sys.dim(), r.len())?;
        let n = sys.n();
        let alpha = bsr.alpha;
        let two_beta = 2.0 * sys.beta;
        let (r_f, rest) = r.split_at(n);
        let (r_u, r_t) = rest.split_at(n);

        let apply_c_inv = |x: &[f64], out: &mut [f64], scale: f64| match bsr.variant {
            RelaxationVariant::Stiffness => {
                sys.a_fd.mul_vec_into(x, out);
                out.iter_mut().for_each(|v| *v *= scale);
            }
            RelaxationVariant::DiagMass => {
                for ((o, xi), d) in out.iter_mut().zip(x).zip(&self.inv_mass_diag) {
                    *o = scale * d * xi;
                }
            }
        };

        // B C⁻¹ r_x − α r_y with B = [−M K]
        let mut w_f = vec![0.0; n];
        let mut w_u = vec![0.0; n];
        apply_c_inv(r_f, &mut w_f, 1.0 / two_beta);
        apply_c_inv(r_u, &mut w_u, 1.0);
        let mut rhs_y: Vec<f64> = r_t.iter().map(|v| -alpha * v).collect();
        sys.mass.mul_vec_add(-1.0, &w_f, &mut rhs_y);
        sys.stiffness.mul_vec_add(1.0, &w_u, &mut rhs_y);
        let dy = self.schur.solve(&rhs_y)?;

        // r_x − Bᵀ δy
        let mut t_f = r_f.to_vec();
        let mut t_u = r_u.to_vec();
        sys.mass.mul_vec_add(1.0, &dy, &mut t_f);
        sys.stiffness.mul_vec_add(-1.0, &dy, &mut t_u);

        let mut dz = vec![0.0; 3 * n];
        {
            let (d_f, rest) = dz.split_at_mut(n);
            let (d_u, d_t) = rest.split_at_mut(n);
            apply_c_inv(&t_f, d_f, 1.0 / (alpha * two_beta));
            apply_c_inv(&t_u, d_u, 1.0 / alpha);
            d_t.copy_from_slice(&dy);
        }
        Ok(dz)
    }

    /// `z += ω K⁻¹ (rhs − L z)`
    pub fn relax(
        &self,
        sys: &SaddleSystem,
        bsr: &BsrConfig,
        z: &mut [f64],
        rhs: &[f64],
    ) -> Result<()> {
        check_len("bsr_relax", sys.dim(), z.len())?;
        check_len("bsr_relax", sys.dim(), rhs.len())?;
        let mut r = vec![0.0; z.len()];
        sys.operator.residual_into(rhs, z, &mut r);
        let dz = self.correction(sys, bsr, &r)?;
        axpy(bsr.omega, &dz, z);
        Ok(())
    }
}

/// Outer hierarchy plus everything the relaxation needs on each level.
/// Immutable once built; cycles allocate their own scratch vectors, so one
/// hierarchy can serve concurrent solves.
#[derive(Debug, Clone)]
pub struct MgHierarchy {
    pub grids: GridHierarchy,
    pub smoothers: Vec<BsrSmoother>,
    pub coarse: DenseLu,
    pub bsr: BsrConfig,
}

impl MgHierarchy {
    pub fn build(n_fine: usize, beta: f64, bsr: BsrConfig) -> Result<Self> {
        bsr.validate()?;
        let grids = build_hierarchy(n_fine, beta)?;
        let smoothers = (0..grids.num_levels() - 1)
            .map(|l| BsrSmoother::new(&grids.levels[l].system, &bsr, &grids.transfers[l..]))
            .collect::<Result<Vec<_>>>()?;
        let coarse = DenseLu::factor(&grids.coarsest().system.operator)?;
        Ok(Self {
            grids,
            smoothers,
            coarse,
            bsr,
        })
    }

    pub fn num_levels(&self) -> usize {
        self.grids.num_levels()
    }

    pub fn level(&self, l: usize) -> &GridLevel {
        &self.grids.levels[l]
    }

    pub fn transfer(&self, l: usize) -> &Transfer {
        &self.grids.transfers[l]
    }

    pub fn operator(&self) -> &CsrMatrix {
        &self.grids.finest().system.operator
    }

    pub fn dim(&self) -> usize {
        self.grids.finest().system.dim()
    }

    /// One relaxation step on level `l`, which must not be the coarsest.
    pub fn bsr_relax(&self, l: usize, z: &mut [f64], rhs: &[f64]) -> Result<()> {
        let smoother = self.smoothers.get(l).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "level {l} has no relaxation (coarsest or out of range)"
            ))
        })?;
        smoother.relax(&self.grids.levels[l].system, &self.bsr, z, rhs)
    }

    /// One multigrid cycle starting on level `l`, updating `z` in place.
    pub fn mg_cycle(
        &self,
        l: usize,
        z: &mut [f64],
        rhs: &[f64],
        cycle: &CycleConfig,
    ) -> Result<()> {
        cycle.validate()?;
        self.cycle_inner(l, z, rhs, cycle)
    }

    fn cycle_inner(&self, l: usize, z: &mut [f64], rhs: &[f64], cycle: &CycleConfig) -> Result<()> {
        let sys = &self.grids.levels[l].system;
        check_len("mg_cycle", sys.dim(), z.len())?;
        check_len("mg_cycle", sys.dim(), rhs.len())?;
        if l + 1 == self.num_levels() {
            z.copy_from_slice(&self.coarse.solve(rhs)?);
            return Ok(());
        }
        for _ in 0..cycle.nu1 {
            self.bsr_relax(l, z, rhs)?;
        }
        let mut r = vec![0.0; z.len()];
        sys.operator.residual_into(rhs, z, &mut r);
        let t = &self.grids.transfers[l];
        let rc = apply_fieldwise(&t.restriction, &r);
        let mut ec = vec![0.0; rc.len()];
        let visits = if l + 2 == self.num_levels() {
            1
        } else {
            cycle.gamma
        };
        for _ in 0..visits {
            self.cycle_inner(l + 1, &mut ec, &rc, cycle)?;
        }
        let n_fine = sys.n();
        let n_coarse = ec.len() / 3;
        for field in 0..3 {
            t.prolongation.mul_vec_add(
                1.0,
                &ec[field * n_coarse..(field + 1) * n_coarse],
                &mut z[field * n_fine..(field + 1) * n_fine],
            );
        }
        for _ in 0..cycle.nu2 {
            self.bsr_relax(l, z, rhs)?;
        }
        Ok(())
    }

    pub fn system(&self, l: usize) -> &SaddleSystem {
        &self.grids.levels[l].system
    }
}

/// Applies a scalar transfer to each of the three field segments.
pub(crate) fn apply_fieldwise(t: &CsrMatrix, x: &[f64]) -> Vec<f64> {
    let (n_in, n_out) = (t.n_cols(), t.n_rows());
    let mut out = vec![0.0; 3 * n_out];
    for field in 0..3 {
        t.mul_vec_into(
            &x[field * n_in..(field + 1) * n_in],
            &mut out[field * n_out..(field + 1) * n_out],
        );
    }
    out
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn check_len(op: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { op, expected, got });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm2;

    fn pseudo_random(n: usize, seed: u64) -> Vec<f64> {
        let mut s = seed;
        (0..n)
            .map(|_| {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
            })
            .collect()
    }

    #[test]
    fn zero_stays_zero() {
        let mg = MgHierarchy::build(8, 1e-2, BsrConfig::exact()).unwrap();
        let mut z = vec![0.0; mg.dim()];
        let rhs = vec![0.0; mg.dim()];
        mg.mg_cycle(0, &mut z, &rhs, &CycleConfig::w(2)).unwrap();
        assert!(z.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn w_cycle_contracts() {
        let mg = MgHierarchy::build(32, 1e-2, BsrConfig::exact()).unwrap();
        let mut z = pseudo_random(mg.dim(), 7);
        let rhs = vec![0.0; mg.dim()];
        let res = |z: &[f64]| {
            let mut r = vec![0.0; z.len()];
            mg.operator().residual_into(&rhs, z, &mut r);
            norm2(&r)
        };
        let mut prev = res(&z);
        for _ in 0..5 {
            mg.mg_cycle(0, &mut z, &rhs, &CycleConfig::w(1)).unwrap();
            let now = res(&z);
            assert!(now < 0.5 * prev);
            prev = now;
        }
    }

    #[test]
    fn coarsest_level_has_no_smoother() {
        let mg = MgHierarchy::build(8, 1.0, BsrConfig::exact()).unwrap();
        let mut z = vec![0.0; 27];
        assert!(mg.bsr_relax(1, &mut z, &[0.0; 27]).is_err());
    }
}
