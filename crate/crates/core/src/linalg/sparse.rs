//! Compressed sparse row storage and the handful of kernels the multigrid
//! machinery needs: products, linear combinations, Kronecker products and
//! block composition.

use std::io::{self, Write};

use crate::error::{Error, Result};

/// Real matrix in compressed sparse row format.
///
/// Column indices are strictly increasing within each row. Explicit zeros may
/// be stored (for example after `add_scaled(A, A, 1.0, -1.0)`).
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a matrix from raw CSR arrays, checking every storage invariant.
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_offsets.len() != n_rows + 1 {
            return Err(Error::DimensionMismatch {
                op: "CsrMatrix::new (row_offsets)",
                expected: n_rows + 1,
                got: row_offsets.len(),
            });
        }
        if col_indices.len() != values.len() {
            return Err(Error::DimensionMismatch {
                op: "CsrMatrix::new (values)",
                expected: col_indices.len(),
                got: values.len(),
            });
        }
        if row_offsets[0] != 0 || *row_offsets.last().unwrap() != values.len() {
            return Err(Error::InvalidParameter(
                "row_offsets must start at 0 and end at the number of stored values".into(),
            ));
        }
        for i in 0..n_rows {
            let (start, end) = (row_offsets[i], row_offsets[i + 1]);
            if end < start {
                return Err(Error::InvalidParameter(format!(
                    "row_offsets decreases at row {i}"
                )));
            }
            let cols = &col_indices[start..end];
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "column indices of row {i} are not strictly increasing"
                )));
            }
            if let Some(&c) = cols.last() {
                if c >= n_cols {
                    return Err(Error::InvalidParameter(format!(
                        "row {i} addresses column {c} >= {n_cols}"
                    )));
                }
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Assembles from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(n_rows: usize, n_cols: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; n_rows + 1];
        for &(i, j, _) in triplets {
            assert!(i < n_rows && j < n_cols, "triplet ({i}, {j}) out of bounds");
            counts[i + 1] += 1;
        }
        for i in 0..n_rows {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut cols = vec![0usize; triplets.len()];
        let mut vals = vec![0.0; triplets.len()];
        for &(i, j, v) in triplets {
            cols[fill[i]] = j;
            vals[fill[i]] = v;
            fill[i] += 1;
        }

        let mut row_offsets = Vec::with_capacity(n_rows + 1);
        let mut col_indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_offsets.push(0);
        let mut row: Vec<(usize, f64)> = Vec::new();
        for i in 0..n_rows {
            row.clear();
            row.extend((counts[i]..counts[i + 1]).map(|k| (cols[k], vals[k])));
            row.sort_unstable_by_key(|&(c, _)| c);
            for &(c, v) in &row {
                if col_indices.len() > row_offsets[i] && *col_indices.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_indices.push(c);
                    values.push(v);
                }
            }
            row_offsets.push(col_indices.len());
        }
        Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal_matrix(&vec![1.0; n])
    }

    pub fn diagonal_matrix(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            n_rows: n,
            n_cols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: diag.to_vec(),
        }
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            row_offsets: vec![0; n_rows + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Converts a dense row-major matrix, dropping exact zeros.
    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut trip = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n_cols, "ragged dense matrix");
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    trip.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n_rows, n_cols, &trip)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.n_cols]; self.n_rows];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] += v;
            }
        }
        out
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    /// Iterates the stored entries of row `i` as (column, value).
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        self.col_indices[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        match self.col_indices[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n_rows.min(self.n_cols))
            .map(|i| self.get(i, i))
            .collect()
    }

    /// Sparse matrix-vector product `A x`.
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_cols {
            return Err(Error::DimensionMismatch {
                op: "spmv",
                expected: self.n_cols,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.n_rows];
        self.mul_vec_into(x, &mut y);
        Ok(y)
    }

    /// `y = A x` without allocation. Panics on dimension mismatch.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n_cols, "mul_vec_into: x length");
        assert_eq!(y.len(), self.n_rows, "mul_vec_into: y length");
        for (i, yi) in y.iter_mut().enumerate() {
            let (start, end) = (self.row_offsets[i], self.row_offsets[i + 1]);
            let mut acc = 0.0;
            for k in start..end {
                acc += self.values[k] * x[self.col_indices[k]];
            }
            *yi = acc;
        }
    }

    /// `y += c A x`. Panics on dimension mismatch.
    pub fn mul_vec_add(&self, c: f64, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n_cols, "mul_vec_add: x length");
        assert_eq!(y.len(), self.n_rows, "mul_vec_add: y length");
        for (i, yi) in y.iter_mut().enumerate() {
            let (start, end) = (self.row_offsets[i], self.row_offsets[i + 1]);
            let mut acc = 0.0;
            for k in start..end {
                acc += self.values[k] * x[self.col_indices[k]];
            }
            *yi += c * acc;
        }
    }

    /// `r = b - A x`. Panics on dimension mismatch.
    pub fn residual_into(&self, b: &[f64], x: &[f64], r: &mut [f64]) {
        assert_eq!(b.len(), self.n_rows, "residual_into: b length");
        self.mul_vec_into(x, r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.n_cols + 1];
        for &j in &self.col_indices {
            counts[j + 1] += 1;
        }
        for j in 0..self.n_cols {
            counts[j + 1] += counts[j];
        }
        let mut fill = counts.clone();
        let mut col_indices = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        // rows visited in increasing order keep the transposed columns sorted
        for i in 0..self.n_rows {
            for (j, v) in self.row(i) {
                col_indices[fill[j]] = i;
                values[fill[j]] = v;
                fill[j] += 1;
            }
        }
        Self {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_offsets: counts,
            col_indices,
            values,
        }
    }

    /// Largest `|A_ij - A_ji|` over the stored pattern of both matrices.
    pub fn max_asymmetry(&self) -> f64 {
        let t = self.transpose();
        match add_scaled(self, &t, 1.0, -1.0) {
            Ok(d) => d.values.iter().fold(0.0f64, |m, v| m.max(v.abs())),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.n_rows)
            .flat_map(|i| self.row(i).map(move |(j, _)| i.abs_diff(j)))
            .max()
            .unwrap_or(0)
    }

    /// Extracts the sub-matrix with the given row and column ranges.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut row_offsets = vec![0];
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        for i in rows.clone() {
            for (j, v) in self.row(i) {
                if cols.contains(&j) {
                    col_indices.push(j - cols.start);
                    values.push(v);
                }
            }
            row_offsets.push(col_indices.len());
        }
        Self {
            n_rows: rows.len(),
            n_cols: cols.len(),
            row_offsets,
            col_indices,
            values,
        }
    }

    /// Writes the matrix in MatrixMarket coordinate format (1-based indices).
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", self.n_rows, self.n_cols, self.nnz())?;
        for i in 0..self.n_rows {
            for (j, v) in self.row(i) {
                writeln!(w, "{} {} {:e}", i + 1, j + 1, v)?;
            }
        }
        Ok(())
    }
}

/// `c1 A + c2 B` on the union of both sparsity patterns.
pub fn add_scaled(a: &CsrMatrix, b: &CsrMatrix, c1: f64, c2: f64) -> Result<CsrMatrix> {
    if a.n_rows != b.n_rows {
        return Err(Error::DimensionMismatch {
            op: "add_scaled (rows)",
            expected: a.n_rows,
            got: b.n_rows,
        });
    }
    if a.n_cols != b.n_cols {
        return Err(Error::DimensionMismatch {
            op: "add_scaled (cols)",
            expected: a.n_cols,
            got: b.n_cols,
        });
    }
    let mut row_offsets = Vec::with_capacity(a.n_rows + 1);
    let mut col_indices = Vec::with_capacity(a.nnz() + b.nnz());
    let mut values = Vec::with_capacity(a.nnz() + b.nnz());
    row_offsets.push(0);
    for i in 0..a.n_rows {
        let (mut p, pe) = (a.row_offsets[i], a.row_offsets[i + 1]);
        let (mut q, qe) = (b.row_offsets[i], b.row_offsets[i + 1]);
        while p < pe || q < qe {
            let ja = if p < pe { a.col_indices[p] } else { usize::MAX };
            let jb = if q < qe { b.col_indices[q] } else { usize::MAX };
            if ja == jb {
                col_indices.push(ja);
                values.push(c1 * a.values[p] + c2 * b.values[q]);
                p += 1;
                q += 1;
            } else if ja < jb {
                col_indices.push(ja);
                values.push(c1 * a.values[p]);
                p += 1;
            } else {
                col_indices.push(jb);
                values.push(c2 * b.values[q]);
                q += 1;
            }
        }
        row_offsets.push(col_indices.len());
    }
    Ok(CsrMatrix {
        n_rows: a.n_rows,
        n_cols: a.n_cols,
        row_offsets,
        col_indices,
        values,
    })
}

/// Sparse product `A B` (Gustavson's row-by-row algorithm).
pub fn spgemm(a: &CsrMatrix, b: &CsrMatrix) -> Result<CsrMatrix> {
    if a.n_cols != b.n_rows {
        return Err(Error::DimensionMismatch {
            op: "spgemm",
            expected: a.n_cols,
            got: b.n_rows,
        });
    }
    let mut marker = vec![usize::MAX; b.n_cols];
    let mut accum = vec![0.0; b.n_cols];
    let mut pattern: Vec<usize> = Vec::new();

    let mut row_offsets = Vec::with_capacity(a.n_rows + 1);
    let mut col_indices = Vec::new();
    let mut values = Vec::new();
    row_offsets.push(0);
    for i in 0..a.n_rows {
        pattern.clear();
        for (k, av) in a.row(i) {
            for (j, bv) in b.row(k) {
                if marker[j] != i {
                    marker[j] = i;
                    accum[j] = 0.0;
                    pattern.push(j);
                }
                accum[j] += av * bv;
            }
        }
        pattern.sort_unstable();
        for &j in &pattern {
            col_indices.push(j);
            values.push(accum[j]);
        }
        row_offsets.push(col_indices.len());
    }
    Ok(CsrMatrix {
        n_rows: a.n_rows,
        n_cols: b.n_cols,
        row_offsets,
        col_indices,
        values,
    })
}

/// Kronecker product `A ⊗ B`: entry `(i_a m + i_b, j_a n + j_b) = A[i_a, j_a] B[i_b, j_b]`
/// where `B` is `m × n`.
pub fn kron(a: &CsrMatrix, b: &CsrMatrix) -> CsrMatrix {
    let n_rows = a.n_rows * b.n_rows;
    let n_cols = a.n_cols * b.n_cols;
    let mut row_offsets = Vec::with_capacity(n_rows + 1);
    let mut col_indices = Vec::with_capacity(a.nnz() * b.nnz());
    let mut values = Vec::with_capacity(a.nnz() * b.nnz());
    row_offsets.push(0);
    for ia in 0..a.n_rows {
        for ib in 0..b.n_rows {
            for (ja, av) in a.row(ia) {
                for (jb, bv) in b.row(ib) {
                    col_indices.push(ja * b.n_cols + jb);
                    values.push(av * bv);
                }
            }
            row_offsets.push(col_indices.len());
        }
    }
    CsrMatrix {
        n_rows,
        n_cols,
        row_offsets,
        col_indices,
        values,
    }
}

/// Composes a block matrix. `blocks[r][c]` is `None` for a zero block; every
/// block row and block column must contain at least one present block so the
/// sizes can be inferred.
pub fn block_matrix(blocks: &[Vec<Option<&CsrMatrix>>]) -> Result<CsrMatrix> {
    let n_block_rows = blocks.len();
    let n_block_cols = blocks.first().map_or(0, Vec::len);
    let mut row_sizes = vec![None; n_block_rows];
    let mut col_sizes = vec![None; n_block_cols];
    for (r, brow) in blocks.iter().enumerate() {
        if brow.len() != n_block_cols {
            return Err(Error::DimensionMismatch {
                op: "block_matrix (block columns)",
                expected: n_block_cols,
                got: brow.len(),
            });
        }
        for (c, blk) in brow.iter().enumerate() {
            if let Some(m) = blk {
                for (slot, size, op) in [
                    (&mut row_sizes[r], m.n_rows, "block_matrix (row sizes)"),
                    (&mut col_sizes[c], m.n_cols, "block_matrix (col sizes)"),
                ] {
                    match *slot {
                        None => *slot = Some(size),
                        Some(s) if s != size => {
                            return Err(Error::DimensionMismatch {
                                op,
                                expected: s,
                                got: size,
                            })
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    let row_sizes: Vec<usize> = row_sizes
        .into_iter()
        .map(|s| s.ok_or_else(|| Error::InvalidParameter("empty block row".into())))
        .collect::<Result<_>>()?;
    let col_sizes: Vec<usize> = col_sizes
        .into_iter()
        .map(|s| s.ok_or_else(|| Error::InvalidParameter("empty block column".into())))
        .collect::<Result<_>>()?;
    let mut col_starts = vec![0usize; n_block_cols + 1];
    for c in 0..n_block_cols {
        col_starts[c + 1] = col_starts[c] + col_sizes[c];
    }

    let mut row_offsets = vec![0];
    let mut col_indices = Vec::new();
    let mut values = Vec::new();
    for (r, brow) in blocks.iter().enumerate() {
        for i in 0..row_sizes[r] {
            for (c, blk) in brow.iter().enumerate() {
                if let Some(m) = blk {
                    for (j, v) in m.row(i) {
                        col_indices.push(col_starts[c] + j);
                        values.push(v);
                    }
                }
            }
            row_offsets.push(col_indices.len());
        }
    }
    Ok(CsrMatrix {
        n_rows: row_sizes.iter().sum(),
        n_cols: col_starts[n_block_cols],
        row_offsets,
        col_indices,
        values,
    })
}

/// Block-diagonal matrix with `copies` repetitions of `a`.
pub fn block_diagonal(a: &CsrMatrix, copies: usize) -> CsrMatrix {
    kron(&CsrMatrix::identity(copies), a)
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}
