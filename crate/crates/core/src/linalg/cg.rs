use super::sparse::{dot, norm2, CsrMatrix};
use crate::error::{Error, Result};

/// Unpreconditioned conjugate gradients from a zero initial guess.
///
/// Returns the solution and the number of iterations once
/// `‖b - A x‖₂ / ‖b‖₂ <= tol`; running out of iterations is an error.
pub fn cg_solve(a: &CsrMatrix, b: &[f64], tol: f64, max_it: usize) -> Result<(Vec<f64>, usize)> {
    if !a.is_square() || a.n_rows() != b.len() {
        return Err(Error::DimensionMismatch {
            op: "cg_solve",
            expected: a.n_rows(),
            got: b.len(),
        });
    }
    let n = b.len();
    let mut x = vec![0.0; n];
    let b_norm = norm2(b);
    if b_norm == 0.0 {
        return Ok((x, 0));
    }
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = dot(&r, &r);
    for it in 1..=max_it {
        a.mul_vec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::NotPositiveDefinite {
                row: it,
                pivot: pap,
            });
        }
        let alpha = rr / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        if rr_new.sqrt() <= tol * b_norm {
            // confirm against the true residual, not the recurrence
            let mut true_r = vec![0.0; n];
            a.residual_into(b, &x, &mut true_r);
            if norm2(&true_r) <= tol * b_norm {
                return Ok((x, it));
            }
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    let mut true_r = vec![0.0; n];
    a.residual_into(b, &x, &mut true_r);
    Err(Error::NotConverged {
        method: "cg",
        iterations: max_it,
        residual: norm2(&true_r) / b_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_converges_in_one_step() {
        let b = [1.0, -2.0, 0.25];
        let (x, it) = cg_solve(&CsrMatrix::identity(3), &b, 1e-12, 10).unwrap();
        assert_eq!(it, 1);
        assert_eq!(x, b.to_vec());
    }

    #[test]
    fn diagonal_system() {
        let a = CsrMatrix::diagonal_matrix(&[2.0, 4.0, 8.0, 16.0]);
        let (x, _) = cg_solve(&a, &[1.0, 1.0, 1.0, 1.0], 1e-14, 10).unwrap();
        for (xi, d) in x.iter().zip([2.0, 4.0, 8.0, 16.0]) {
            assert!((xi - 1.0 / d).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_rhs_is_immediate() {
        let (x, it) = cg_solve(&CsrMatrix::identity(2), &[0.0, 0.0], 1e-12, 5).unwrap();
        assert_eq!((x, it), (vec![0.0, 0.0], 0));
    }

    #[test]
    fn iteration_cap_is_an_error() {
        let a = CsrMatrix::diagonal_matrix(&[1.0, 10.0, 100.0, 1000.0]);
        assert!(matches!(
            cg_solve(&a, &[1.0; 4], 1e-14, 2),
            Err(Error::NotConverged { .. })
        ));
    }
}
