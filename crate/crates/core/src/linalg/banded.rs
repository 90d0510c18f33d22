//! Banded Cholesky factorization for the symmetric positive definite Schur
//! complement operators. Lexicographic grid ordering keeps the half-bandwidth
//! at a small multiple of the grid width, so the band is stored densely.

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    /// Row `i` holds `L[i, i-bw..=i]`, diagonal last.
    band: Vec<f64>,
}

#[inline]
fn dot4(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

impl BandedCholesky {
    /// Factors `A = L Lᵀ`. Only the lower triangle of `A` is read.
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                op: "BandedCholesky::factor",
                expected: a.n_rows(),
                got: a.n_cols(),
            });
        }
        let n = a.n_rows();
        let bw = a.bandwidth();
        let w = bw + 1;
        let mut band = vec![0.0; n * w];
        for i in 0..n {
            for (j, v) in a.row(i) {
                if j <= i {
                    band[i * w + (j + bw - i)] = v;
                }
            }
        }
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            let (head, tail) = band.split_at_mut(i * w);
            let row_i = &mut tail[..w];
            for j in j0..i {
                let k0 = j0.max(j.saturating_sub(bw));
                let row_j = &head[j * w..(j + 1) * w];
                let s = dot4(&row_i[k0 + bw - i..j + bw - i], &row_j[k0 + bw - j..bw]);
                row_i[j + bw - i] = (row_i[j + bw - i] - s) / row_j[bw];
            }
            let d = row_i[bw] - dot4(&row_i[j0 + bw - i..bw], &row_i[j0 + bw - i..bw]);
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite { row: i, pivot: d });
            }
            row_i[bw] = d.sqrt();
        }
        Ok(Self { n, bw, band })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    /// Solves `L Lᵀ x = b` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        assert_eq!(x.len(), self.n, "BandedCholesky::solve_in_place: length");
        let (bw, w) = (self.bw, self.bw + 1);
        for i in 0..self.n {
            let j0 = i.saturating_sub(bw);
            let row = &self.band[i * w..(i + 1) * w];
            let s = dot4(&row[j0 + bw - i..bw], &x[j0..i]);
            x[i] = (x[i] - s) / row[bw];
        }
        for i in (0..self.n).rev() {
            let j0 = i.saturating_sub(bw);
            let row = &self.band[i * w..(i + 1) * w];
            x[i] /= row[bw];
            let xi = x[i];
            for (xk, l) in x[j0..i].iter_mut().zip(&row[j0 + bw - i..bw]) {
                *xk -= l * xi;
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch {
                op: "BandedCholesky::solve",
                expected: self.n,
                got: b.len(),
            });
        }
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }
}
