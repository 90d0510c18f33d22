//! Small dense complex matrices: the carriers of Fourier symbols.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "ComplexMatrix::from_rows: not square");
            data.extend_from_slice(r);
        }
        Self { n, data }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::identity(self.n), |acc, _| &acc * self)
    }

    /// Places `block` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &Self) {
        for i in 0..block.n {
            for j in 0..block.n {
                self[(r + i, c + j)] = block[(i, j)];
            }
        }
    }

    /// LU with partial pivoting; returns the packed factors and permutation.
    fn lu(&self) -> Result<(Vec<Complex64>, Vec<usize>)> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = self.data.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if a[i * n + k].norm() > a[p * n + k].norm() {
                    p = i;
                }
            }
            let pivot_abs = a[p * n + k].norm();
            if pivot_abs == 0.0 || pivot_abs <= scale * f64::EPSILON * 1e-6 {
                return Err(Error::Singular {
                    row: k,
                    pivot: pivot_abs,
                });
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                a[i * n + k] = f;
                for j in k + 1..n {
                    let akj = a[k * n + j];
                    a[i * n + j] -= f * akj;
                }
            }
        }
        Ok((a, perm))
    }

    /// Solves `self · X = rhs` for a square right-hand side matrix.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        assert_eq!(self.n, rhs.n, "ComplexMatrix::solve: dimension");
        let n = self.n;
        let (lu, perm) = self.lu()?;
        let mut out = Self::zeros(n);
        let mut x = vec![ZERO; n];
        for col in 0..n {
            for i in 0..n {
                x[i] = rhs[(perm[i], col)];
            }
            for i in 0..n {
                let mut s = x[i];
                for j in 0..i {
                    s -= lu[i * n + j] * x[j];
                }
                x[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[i];
                for j in i + 1..n {
                    s -= lu[i * n + j] * x[j];
                }
                x[i] = s / lu[i * n + i];
            }
            for i in 0..n {
                out[(i, col)] = x[i];
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.n))
    }

    pub fn determinant(&self) -> Complex64 {
        match self.lu() {
            Ok((lu, perm)) => {
                let n = self.n;
                let mut det = (0..n).fold(ONE, |d, i| d * lu[i * n + i]);
                // permutation parity
                let mut seen = vec![false; n];
                for start in 0..n {
                    if seen[start] {
                        continue;
                    }
                    let mut len = 0;
                    let mut k = start;
                    while !seen[k] {
                        seen[k] = true;
                        k = perm[k];
                        len += 1;
                    }
                    if len % 2 == 0 {
                        det = -det;
                    }
                }
                det
            }
            Err(_) => ZERO,
        }
    }

    /// All eigenvalues, via Householder reduction to Hessenberg form followed
    /// by single-shift complex QR iterations with Wilkinson shifts.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        let n = self.n;
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut h = self.clone();
        h.balance();
        h.reduce_to_hessenberg();
        let mut eig = vec![ZERO; n];
        let mut hi = n - 1;
        let mut iter = 0usize;
        let mut total = 0usize;
        let norm = h.norm();
        while hi > 0 {
            let mut l = hi;
            while l > 0 {
                // backward-stable: a subdiagonal below ε‖H‖ is zero to working
                // precision (defective clusters otherwise converge only linearly)
                let s = (h[(l - 1, l - 1)].norm() + h[(l, l)].norm()).max(norm);
                if h[(l, l - 1)].norm() <= f64::EPSILON * s {
                    h[(l, l - 1)] = ZERO;
                    break;
                }
                l -= 1;
            }
            if l == hi {
                eig[hi] = h[(hi, hi)];
                hi -= 1;
                iter = 0;
                continue;
            }
            iter += 1;
            total += 1;
            if iter > 60 || total > 100 * n {
                return Err(Error::NotConverged {
                    method: "complex QR eigenvalues",
                    iterations: total,
                    residual: h[(hi, hi - 1)].norm(),
                });
            }
            let shift = if iter.is_multiple_of(11) {
                // exceptional shift to break cycles
                h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
            } else {
                wilkinson_shift(
                    h[(hi - 1, hi - 1)],
                    h[(hi - 1, hi)],
                    h[(hi, hi - 1)],
                    h[(hi, hi)],
                )
            };
            h.qr_step(l, hi, shift);
        }
        eig[0] = h[(0, 0)];
        Ok(eig)
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    /// Diagonal similarity scaling by powers of two so that each row and
    /// its matching column have comparable norms. Symbols mix entries of
    /// size O(h²) and O(1), which otherwise stalls deflation.
    fn balance(&mut self) {
        let n = self.n;
        let radix = 2.0f64;
        let mut converged = false;
        while !converged {
            converged = true;
            for i in 0..n {
                let mut c = 0.0;
                let mut r = 0.0;
                for j in 0..n {
                    if j != i {
                        c += self[(j, i)].l1_norm();
                        r += self[(i, j)].l1_norm();
                    }
                }
                if c == 0.0 || r == 0.0 {
                    continue;
                }
                let total = c + r;
                let mut f = 1.0;
                let (mut cc, mut rr) = (c, r);
                while cc < rr / radix {
                    f *= radix;
                    cc *= radix;
                    rr /= radix;
                }
                while cc >= rr * radix {
                    f /= radix;
                    cc /= radix;
                    rr *= radix;
                }
                if (cc + rr) < 0.95 * total {
                    converged = false;
                    for j in 0..n {
                        self[(i, j)] /= f;
                        self[(j, i)] *= f;
                    }
                }
            }
        }
    }

    fn reduce_to_hessenberg(&mut self) {
        let n = self.n;
        if n < 3 {
            return;
        }
        let mut v = vec![ZERO; n];
        for k in 0..n - 2 {
            let xnorm = (k + 1..n)
                .map(|i| self[(i, k)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if xnorm == 0.0 {
                continue;
            }
            let x0 = self[(k + 1, k)];
            let phase = if x0.norm() == 0.0 {
                ONE
            } else {
                x0 / x0.norm()
            };
            let alpha = -phase * xnorm;
            for i in k + 1..n {
                v[i] = self[(i, k)];
            }
            v[k + 1] -= alpha;
            let vnorm = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
            if vnorm == 0.0 {
                continue;
            }
            for i in k + 1..n {
                v[i] /= vnorm;
            }
            // left: A -= 2 v (vᴴ A)
            for j in 0..n {
                let mut s = ZERO;
                for i in k + 1..n {
                    s += v[i].conj() * self[(i, j)];
                }
                for i in k + 1..n {
                    self[(i, j)] -= 2.0 * v[i] * s;
                }
            }
            // right: A -= 2 (A v) vᴴ
            for i in 0..n {
                let mut s = ZERO;
                for j in k + 1..n {
                    s += self[(i, j)] * v[j];
                }
                for j in k + 1..n {
                    self[(i, j)] -= 2.0 * s * v[j].conj();
                }
            }
            for i in k + 2..n {
                self[(i, k)] = ZERO;
            }
        }
    }

    /// One explicit shifted QR step on the active window `lo..=hi` of a
    /// Hessenberg matrix, using Givens rotations.
    fn qr_step(&mut self, lo: usize, hi: usize, shift: Complex64) {
        for k in lo..=hi {
            self[(k, k)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let x = self[(k, k)];
            let y = self[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (ONE, ZERO)
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let u = self[(k, j)];
                let w = self[(k + 1, j)];
                self[(k, j)] = c.conj() * u + s.conj() * w;
                self[(k + 1, j)] = -s * u + c * w;
            }
            rotations.push((c, s));
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + idx;
            for i in lo..=(k + 2).min(hi) {
                let u = self[(i, k)];
                let w = self[(i, k + 1)];
                self[(i, k)] = u * c + w * s;
                self[(i, k + 1)] = -u * s.conj() + w * c.conj();
            }
        }
        for k in lo..=hi {
            self[(k, k)] += shift;
        }
    }
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mu1 = (a + d) * 0.5 + disc;
    let mu2 = (a + d) * 0.5 - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "ComplexMatrix product: dimension");
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        v
    }

    #[test]
    fn diagonal_eigenvalues() {
        let m = ComplexMatrix::from_real_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, 0.5],
        ]);
        let e = sorted(m.eigenvalues().unwrap());
        for (got, want) in e.iter().zip([-1.0, 0.5, 3.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn rotation_has_imaginary_pair() {
        let m = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]);
        let e = sorted(m.eigenvalues().unwrap());
        assert!((e[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((e[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn nilpotent_jordan_block() {
        let mut m = ComplexMatrix::zeros(4);
        for i in 0..3 {
            m[(i, i + 1)] = ONE;
        }
        for z in m.eigenvalues().unwrap() {
            assert!(z.norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_and_determinant() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 1.0), c(0.0, 1.0)],
            vec![c(1.0, 0.0), c(3.0, 0.0)],
        ]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        // (2+i)·3 − i·1 = 6 + 2i
        assert!((m.determinant() - c(6.0, 2.0)).norm() < 1e-14);
        let singular = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(singular.inverse().is_err());
    }
}
