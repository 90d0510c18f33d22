use bsrmg::discretization::{assemble_fd_laplacian, assemble_saddle, UniformGrid};
use bsrmg::linalg::{
    add_scaled, cg_solve, direct_solve, kron, norm2, spgemm, Complex64, ComplexMatrix, CsrMatrix,
};
use proptest::prelude::*;

type Dense = Vec<Vec<f64>>;

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut c = vec![vec![0.0; m]; n];
    for i in 0..n {
        for p in 0..k {
            for j in 0..m {
                c[i][j] += a[i][p] * b[p][j];
            }
        }
    }
    c
}

fn dense_kron(a: &Dense, b: &Dense) -> Dense {
    let (ra, ca, rb, cb) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut c = vec![vec![0.0; ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    c[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    c
}

fn max_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn assert_csr_invariants(m: &CsrMatrix) {
    let off = m.row_offsets();
    assert_eq!(off.len(), m.n_rows() + 1);
    assert_eq!(*off.last().unwrap(), m.values().len());
    for i in 0..m.n_rows() {
        let cols = &m.col_indices()[off[i]..off[i + 1]];
        assert!(cols.windows(2).all(|w| w[0] < w[1]));
        assert!(cols.iter().all(|&c| c < m.n_cols()));
    }
}

/// 8×8 matrices with roughly half the entries zero.
fn sparse_dense(n: usize) -> impl Strategy<Value = Dense> {
    prop::collection::vec(
        prop::collection::vec(prop_oneof![Just(0.0), -1.0f64..1.0], n),
        n,
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn spgemm_matches_dense_product(a in sparse_dense(8), b in sparse_dense(8)) {
        let c = spgemm(&CsrMatrix::from_dense(&a), &CsrMatrix::from_dense(&b)).unwrap();
        assert_csr_invariants(&c);
        prop_assert!(max_diff(&c.to_dense(), &dense_mul(&a, &b)) <= 1e-13);
    }

    #[test]
    fn add_scaled_matches_dense(a in sparse_dense(8), b in sparse_dense(8), c1 in -3.0f64..3.0, c2 in -3.0f64..3.0) {
        let s = add_scaled(&CsrMatrix::from_dense(&a), &CsrMatrix::from_dense(&b), c1, c2).unwrap();
        assert_csr_invariants(&s);
        let oracle: Dense = a.iter().zip(&b)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| c1 * x + c2 * y).collect())
            .collect();
        prop_assert!(max_diff(&s.to_dense(), &oracle) <= 1e-13);
    }

    #[test]
    fn kron_matches_dense(a in sparse_dense(8), b in sparse_dense(8)) {
        let k = kron(&CsrMatrix::from_dense(&a), &CsrMatrix::from_dense(&b));
        assert_csr_invariants(&k);
        prop_assert_eq!(k.n_rows(), 64);
        prop_assert!(max_diff(&k.to_dense(), &dense_kron(&a, &b)) <= 1e-13);
    }

    #[test]
    fn spmv_matches_dense(a in sparse_dense(8), x in prop::collection::vec(-1.0f64..1.0, 8)) {
        let y = CsrMatrix::from_dense(&a).spmv(&x).unwrap();
        for (i, row) in a.iter().enumerate() {
            let oracle: f64 = row.iter().zip(&x).map(|(p, q)| p * q).sum();
            prop_assert!((y[i] - oracle).abs() <= 1e-14);
        }
    }

    #[test]
    fn cg_meets_declared_tolerance(b in sparse_dense(8), rhs in prop::collection::vec(-1.0f64..1.0, 8)) {
        // BᵀB + I is SPD
        let bt: Dense = (0..8).map(|j| (0..8).map(|i| b[i][j]).collect()).collect();
        let mut a = dense_mul(&bt, &b);
        for (i, row) in a.iter_mut().enumerate() {
            row[i] += 1.0;
        }
        let a = CsrMatrix::from_dense(&a);
        prop_assume!(norm2(&rhs) > 1e-8);
        let (x, _) = cg_solve(&a, &rhs, 1e-12, 200).unwrap();
        let ax = a.spmv(&x).unwrap();
        let r: Vec<f64> = rhs.iter().zip(&ax).map(|(p, q)| p - q).collect();
        prop_assert!(norm2(&r) <= 1e-12 * norm2(&rhs));
    }
}

#[test]
fn cg_recovers_ones_on_fd_laplacian() {
    let a = assemble_fd_laplacian(&UniformGrid::new(32).unwrap());
    let ones = vec![1.0; a.n_rows()];
    let b = a.spmv(&ones).unwrap();
    let (x, its) = cg_solve(&a, &b, 1e-12, 1000).unwrap();
    assert!(its > 1);
    let err: Vec<f64> = x.iter().map(|v| v - 1.0).collect();
    assert!(norm2(&err) / norm2(&ones) < 1e-9);
}

#[test]
fn coarsest_saddle_manufactured_solution() {
    let sys = assemble_saddle(&UniformGrid::new(4).unwrap(), 1e-4).unwrap();
    assert_eq!(sys.dim(), 27);
    let z: Vec<f64> = (0..27)
        .map(|i| ((i * 7919 % 13) as f64 - 6.0) / 6.0)
        .collect();
    let b = sys.operator.spmv(&z).unwrap();
    let x = direct_solve(&sys.operator, &b).unwrap();
    let err: Vec<f64> = x.iter().zip(&z).map(|(p, q)| p - q).collect();
    assert!(norm2(&err) <= 1e-10 * norm2(&z));
}

/// Deterministic complex entries in the unit square.
fn test_matrix(n: usize, seed: u64) -> ComplexMatrix {
    let mut s = seed;
    let mut next = || {
        s = s
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (s >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let rows: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..n).map(|_| Complex64::new(next(), next())).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

/// Roots of `det(zI − M)` by Durand–Kerner iteration; the polynomial is
/// evaluated through LU determinants, independently of any QR machinery.
fn char_poly_roots(m: &ComplexMatrix) -> Vec<Complex64> {
    let n = m.dim();
    let p = |z: Complex64| (&ComplexMatrix::identity(n).scale(z) - m).determinant();
    let radius = 1.0 + m.norm();
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = p(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    roots
}

fn assert_same_multiset(a: &[Complex64], b: &[Complex64], tol: f64) {
    let mut unused: Vec<Complex64> = b.to_vec();
    for x in a {
        let (k, d) = unused
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        assert!(
            d <= tol,
            "eigenvalue {x} has no partner within {tol} (closest {d})"
        );
        unused.swap_remove(k);
    }
}

#[test]
fn eigenvalues_match_characteristic_polynomial_roots() {
    for seed in 1..=10 {
        let m = test_matrix(12, seed);
        let eig = m.eigenvalues().unwrap();
        assert_eq!(eig.len(), 12);
        assert_same_multiset(&eig, &char_poly_roots(&m), 1e-8);
    }
}

/// Smallest singular value bound of `M − λI` from two steps of inverse
/// iteration: `σ_min ≤ ‖(M − λI) v‖ / ‖v‖` for any `v`.
fn shifted_residual(m: &ComplexMatrix, lambda: Complex64) -> f64 {
    let n = m.dim();
    let shifted = m - &ComplexMatrix::identity(n).scale(lambda);
    let mut v = ComplexMatrix::zeros(n);
    for i in 0..n {
        v[(i, 0)] = Complex64::new(1.0, 0.1 * i as f64);
    }
    for _ in 0..2 {
        match shifted.solve(&v) {
            Ok(w) => {
                let s = (0..n).map(|i| w[(i, 0)].norm_sqr()).sum::<f64>().sqrt();
                v = w.scale(Complex64::new(1.0 / s, 0.0));
            }
            // exactly singular: σ_min = 0
            Err(_) => return 0.0,
        }
    }
    let av = &shifted * &v;
    (0..n).map(|i| av[(i, 0)].norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn eigenvalues_have_small_backward_error() {
    for seed in 20..40 {
        let m = test_matrix(12, seed);
        for lambda in m.eigenvalues().unwrap() {
            assert!(shifted_residual(&m, lambda) <= 1e-8 * m.norm());
        }
    }
}

#[test]
fn similarity_transform_preserves_known_spectrum() {
    let v = test_matrix(8, 99);
    let d: Vec<Complex64> = (0..8)
        .map(|k| Complex64::new(k as f64 - 3.5, 0.25 * k as f64))
        .collect();
    let mut dm = ComplexMatrix::zeros(8);
    for (k, &x) in d.iter().enumerate() {
        dm[(k, k)] = x;
    }
    let m = &(&v * &dm) * &v.inverse().unwrap();
    assert_same_multiset(&m.eigenvalues().unwrap(), &d, 1e-9);
}
