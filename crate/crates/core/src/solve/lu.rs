//! Left-looking sparse LU (Gilbert–Peierls) with partial pivoting.
//!
//! Factorizes P·A·Q = L·U where Q is a minimum-degree column order and P is
//! chosen column by column. The pivot of each column is the largest
//! remaining entry, except that the diagonal of the symmetric permutation is
//! kept when it is within [`DIAGONAL_PREFERENCE`] of the largest; this keeps
//! the fill of the ordering for the (mostly) symmetric systems solved here.

use std::time::Duration;

use crate::solve::ordering::minimum_degree;
use crate::sparse::{norm2, ComplexSparseMatrix};
use crate::{Complex64, Error, Result};

/// Pivots smaller than this times ‖A‖_max mark the matrix singular.
pub const SINGULAR_PIVOT_TOLERANCE: f64 = 1e-14;

pub const DIAGONAL_PREFERENCE: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct SparseLu {
    n: usize,
    /// Column order: step k eliminates column `q[k]`.
    q: Vec<usize>,
    /// Pivot step of every original row.
    pinv: Vec<usize>,
    /// Strictly lower part of L by column, rows in step numbering.
    l_ptr: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<Complex64>,
    /// Strictly upper part of U by column, rows in step numbering.
    u_ptr: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<Complex64>,
    diag: Vec<Complex64>,
    pivots: PivotStats,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotStats {
    pub min_abs: f64,
    pub max_abs: f64,
    /// Pivot threshold that was applied (absolute).
    pub threshold: f64,
    pub nnz_l: usize,
    pub nnz_u: usize,
}

impl SparseLu {
    pub fn factor(a: &ComplexSparseMatrix) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.ncols(),
            });
        }
        let threshold = SINGULAR_PIVOT_TOLERANCE * a.max_abs();
        let q = minimum_degree(a);
        // columns of A are the rows of Aᵀ
        let at = a.transpose();

        const UNSET: usize = usize::MAX;
        let mut pinv = vec![UNSET; n];
        // L kept with original row indices while factoring
        let mut l_ptr = vec![0usize];
        let mut l_idx: Vec<usize> = Vec::new();
        let mut l_val: Vec<Complex64> = Vec::new();
        let mut u_ptr = vec![0usize];
        let mut u_idx: Vec<usize> = Vec::new();
        let mut u_val: Vec<Complex64> = Vec::new();
        let mut diag = Vec::with_capacity(n);

        let zero = Complex64::new(0.0, 0.0);
        let mut x = vec![zero; n];
        let mut mark = vec![UNSET; n];
        let mut topo: Vec<usize> = Vec::new();
        let mut stack: Vec<(usize, usize)> = Vec::new();
        let mut min_abs = f64::INFINITY;
        let mut max_abs: f64 = 0.0;

        for k in 0..n {
            let col = q[k];
            // reach of the column pattern in the graph of L, in reverse postorder
            topo.clear();
            for (row, _) in at.row(col) {
                if mark[row] == k {
                    continue;
                }
                mark[row] = k;
                stack.push((row, 0));
                while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                    let step = pinv[v];
                    let children = if step == UNSET {
                        &l_idx[0..0]
                    } else {
                        &l_idx[l_ptr[step]..l_ptr[step + 1]]
                    };
                    if let Some(&child) = children.get(*next) {
                        *next += 1;
                        if mark[child] != k {
                            mark[child] = k;
                            stack.push((child, 0));
                        }
                    } else {
                        stack.pop();
                        topo.push(v);
                    }
                }
            }
            for (row, v) in at.row(col) {
                x[row] = v;
            }
            // sparse triangular solve with the columns of L found above
            for &v in topo.iter().rev() {
                let step = pinv[v];
                if step == UNSET {
                    continue;
                }
                let xv = x[v];
                if xv == zero {
                    continue;
                }
                for p in l_ptr[step]..l_ptr[step + 1] {
                    x[l_idx[p]] -= l_val[p] * xv;
                }
            }
            // pivot search among rows not yet pivoted
            let mut best = UNSET;
            let mut best_abs = -1.0;
            for &v in &topo {
                if pinv[v] == UNSET {
                    let m = x[v].norm();
                    if m > best_abs || (m == best_abs && v < best) {
                        best_abs = m;
                        best = v;
                    }
                }
            }
            if best != UNSET && best != col && pinv[col] == UNSET && mark[col] == k {
                let d = x[col].norm();
                if d >= DIAGONAL_PREFERENCE * best_abs && d > 0.0 {
                    best = col;
                    best_abs = d;
                }
            }
            if best == UNSET || !(best_abs > threshold) {
                return Err(Error::SingularMatrix {
                    step: k,
                    pivot: best_abs.max(0.0),
                    threshold,
                });
            }
            min_abs = min_abs.min(best_abs);
            max_abs = max_abs.max(best_abs);
            let pivot = x[best];
            pinv[best] = k;
            diag.push(pivot);
            // U column in ascending step order, L column in topological order
            let mut ucol: Vec<(usize, Complex64)> = Vec::new();
            for &v in topo.iter().rev() {
                let step = pinv[v];
                if v == best {
                } else if step != UNSET {
                    if x[v] != zero {
                        ucol.push((step, x[v]));
                    }
                } else if x[v] != zero {
                    l_idx.push(v);
                    l_val.push(x[v] / pivot);
                }
                x[v] = zero;
            }
            ucol.sort_unstable_by_key(|e| e.0);
            for (s, v) in ucol {
                u_idx.push(s);
                u_val.push(v);
            }
            l_ptr.push(l_idx.len());
            u_ptr.push(u_idx.len());
        }
        for r in &mut l_idx {
            *r = pinv[*r];
        }
        Ok(Self {
            n,
            pivots: PivotStats {
                min_abs: if n == 0 { 0.0 } else { min_abs },
                max_abs,
                threshold,
                nnz_l: l_idx.len(),
                nnz_u: u_idx.len() + n,
            },
            q,
            pinv,
            l_ptr,
            l_idx,
            l_val,
            u_ptr,
            u_idx,
            u_val,
            diag,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn pivots(&self) -> &PivotStats {
        &self.pivots
    }

    /// Solves A x = b.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.n, "right-hand side length mismatch");
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for (i, &bi) in b.iter().enumerate() {
            y[self.pinv[i]] = bi;
        }
        for j in 0..self.n {
            let yj = y[j];
            for p in self.l_ptr[j]..self.l_ptr[j + 1] {
                y[self.l_idx[p]] -= self.l_val[p] * yj;
            }
        }
        for j in (0..self.n).rev() {
            y[j] /= self.diag[j];
            let yj = y[j];
            for p in self.u_ptr[j]..self.u_ptr[j + 1] {
                y[self.u_idx[p]] -= self.u_val[p] * yj;
            }
        }
        let mut x = vec![Complex64::new(0.0, 0.0); self.n];
        for (k, &c) in self.q.iter().enumerate() {
            x[c] = y[k];
        }
        x
    }

    /// Solves Aᴴ x = b.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.n, "right-hand side length mismatch");
        let mut w: Vec<Complex64> = self.q.iter().map(|&c| b[c]).collect();
        for j in 0..self.n {
            let mut s = w[j];
            for p in self.u_ptr[j]..self.u_ptr[j + 1] {
                s -= self.u_val[p].conj() * w[self.u_idx[p]];
            }
            w[j] = s / self.diag[j].conj();
        }
        for j in (0..self.n).rev() {
            let mut s = w[j];
            for p in self.l_ptr[j]..self.l_ptr[j + 1] {
                s -= self.l_val[p].conj() * w[self.l_idx[p]];
            }
            w[j] = s;
        }
        (0..self.n).map(|i| w[self.pinv[i]]).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub x: Vec<Complex64>,
    /// ‖A x − b‖ / ‖b‖, recomputed from A (zero for b = 0 and x = 0).
    pub rel_residual: f64,
    pub pivots: PivotStats,
    pub wall_time: Duration,
}

/// Wall clock that reads zero where the platform has none (wasm32 in a
/// browser, where `Instant::now` panics).
struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        Self(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    fn elapsed(&self) -> Duration {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed();
        #[cfg(target_arch = "wasm32")]
        Duration::ZERO
    }
}

/// Factor and solve, reporting the true residual.
pub fn sparse_lu_solve(a: &ComplexSparseMatrix, b: &[Complex64]) -> Result<SolveReport> {
    if b.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.len(),
        });
    }
    let start = Stopwatch::start();
    let lu = SparseLu::factor(a)?;
    let x = lu.solve(b);
    let wall_time = start.elapsed();
    Ok(SolveReport {
        rel_residual: relative_residual(a, &x, b),
        x,
        pivots: lu.pivots,
        wall_time,
    })
}

pub fn relative_residual(a: &ComplexSparseMatrix, x: &[Complex64], b: &[Complex64]) -> f64 {
    let ax = a.mul_vec(x);
    let r: f64 = ax.iter().zip(b).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
    let nb = norm2(b);
    if nb == 0.0 {
        r
    } else {
        r / nb
    }
}
