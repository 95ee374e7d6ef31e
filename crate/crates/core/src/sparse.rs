//! Complex compressed-sparse-row matrices with deterministic assembly.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Coordinate-format accumulator. Duplicates are summed in insertion order
/// when the matrix is finalized, so identical insertion sequences give
/// bit-identical matrices.
#[derive(Debug, Clone)]
pub struct TripletBuilder {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl TripletBuilder {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(nrows: usize, ncols: usize, cap: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::with_capacity(cap),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, value: Complex64) {
        debug_assert!(row < self.nrows && col < self.ncols);
        self.entries.push((row, col, value));
    }

    pub fn build(mut self) -> ComplexSparseMatrix {
        // stable: equal (row, col) keep insertion order for the summation
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut col_idx = Vec::with_capacity(self.entries.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..self.nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        ComplexSparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr,
            col_idx,
            values,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl ComplexSparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        TripletBuilder::new(nrows, ncols).build()
    }

    pub fn identity(n: usize) -> Self {
        let mut t = TripletBuilder::with_capacity(n, n, n);
        for i in 0..n {
            t.push(i, i, Complex64::new(1.0, 0.0));
        }
        t.build()
    }

    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let mut t = TripletBuilder::new(nrows, ncols);
        for (r, c, v) in entries {
            t.push(r, c, v);
        }
        t.build()
    }

    pub fn from_dense(a: &DMatrix<Complex64>) -> Self {
        let mut t = TripletBuilder::new(a.nrows(), a.ncols());
        for r in 0..a.nrows() {
            for c in 0..a.ncols() {
                if a[(r, c)] != Complex64::new(0.0, 0.0) {
                    t.push(r, c, a[(r, c)]);
                }
            }
        }
        t.build()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.ncols, "matrix-vector dimension mismatch");
        (0..self.nrows)
            .map(|r| self.row(r).map(|(c, v)| v * x[c]).sum())
            .collect()
    }

    /// Plain transpose (no conjugation).
    pub fn transpose(&self) -> Self {
        let mut t = TripletBuilder::with_capacity(self.ncols, self.nrows, self.nnz());
        for (r, c, v) in self.iter() {
            t.push(c, r, v);
        }
        t.build()
    }

    pub fn adjoint(&self) -> Self {
        let mut t = self.transpose();
        for v in &mut t.values {
            *v = v.conj();
        }
        t
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= alpha;
        }
        out
    }

    /// `alpha * self + beta * other` on the union pattern.
    pub fn linear_combination(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        let mut t = TripletBuilder::with_capacity(self.nrows, self.ncols, self.nnz() + other.nnz());
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                t.push(r, c, alpha * v);
            }
            for (c, v) in other.row(r) {
                t.push(r, c, beta * v);
            }
        }
        t.build()
    }

    pub fn add(&self, other: &Self) -> Self {
        let one = Complex64::new(1.0, 0.0);
        self.linear_combination(one, other, one)
    }

    /// Sparse product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "matrix product dimension mismatch");
        let mut t = TripletBuilder::new(self.nrows, other.ncols);
        let mut acc = vec![Complex64::new(0.0, 0.0); other.ncols];
        let mut used = vec![false; other.ncols];
        let mut pattern = Vec::new();
        for r in 0..self.nrows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !used[c] {
                        used[c] = true;
                        pattern.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            pattern.sort_unstable();
            for &c in &pattern {
                t.push(r, c, acc[c]);
                acc[c] = Complex64::new(0.0, 0.0);
                used[c] = false;
            }
            pattern.clear();
        }
        t.build()
    }

    /// Submatrix `self[rows, cols]`; the output keeps the order of `rows` and `cols`.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_map = vec![usize::MAX; self.ncols];
        for (new, &old) in cols.iter().enumerate() {
            col_map[old] = new;
        }
        let mut t = TripletBuilder::new(rows.len(), cols.len());
        for (new_r, &r) in rows.iter().enumerate() {
            for (c, v) in self.row(r) {
                let nc = col_map[c];
                if nc != usize::MAX {
                    t.push(new_r, nc, v);
                }
            }
        }
        t.build()
    }

    /// Stacks a grid of blocks; `None` blocks are zero. Every block row needs
    /// a consistent height and every block column a consistent width.
    pub fn from_blocks(blocks: &[Vec<Option<&ComplexSparseMatrix>>]) -> Result<Self> {
        let nbr = blocks.len();
        let nbc = blocks.first().map_or(0, |r| r.len());
        let mut heights = vec![None; nbr];
        let mut widths = vec![None; nbc];
        for (i, row) in blocks.iter().enumerate() {
            if row.len() != nbc {
                return Err(Error::DimensionMismatch {
                    expected: nbc,
                    found: row.len(),
                });
            }
            for (j, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    check_or_set(&mut heights[i], b.nrows)?;
                    check_or_set(&mut widths[j], b.ncols)?;
                }
            }
        }
        let heights: Vec<usize> = heights.into_iter().map(|h| h.unwrap_or(0)).collect();
        let widths: Vec<usize> = widths.into_iter().map(|w| w.unwrap_or(0)).collect();
        let row_off: Vec<usize> = prefix_sums(&heights);
        let col_off: Vec<usize> = prefix_sums(&widths);
        let mut t = TripletBuilder::new(row_off[nbr], col_off[nbc]);
        for (i, row) in blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    for (r, c, v) in b.iter() {
                        t.push(row_off[i] + r, col_off[j] + c, v);
                    }
                }
            }
        }
        Ok(t.build())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from the plain transpose.
    pub fn asymmetry(&self) -> f64 {
        if self.nrows != self.ncols {
            return f64::INFINITY;
        }
        self.iter()
            .map(|(r, c, v)| (v - self.get(c, r)).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        self.asymmetry() <= rel_tol * self.max_abs()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut d = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.iter() {
            d[(r, c)] += v;
        }
        d
    }
}

fn check_or_set(slot: &mut Option<usize>, value: usize) -> Result<()> {
    match *slot {
        Some(v) if v != value => Err(Error::DimensionMismatch {
            expected: v,
            found: value,
        }),
        _ => {
            *slot = Some(value);
            Ok(())
        }
    }
}

fn prefix_sums(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    out.push(0);
    for s in sizes {
        out.push(out.last().unwrap() + s);
    }
    out
}

pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn sub(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}
