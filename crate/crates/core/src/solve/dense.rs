//! Dense reference computations used as oracles and for small condition
//! numbers. Independent of the sparse factorization.

use nalgebra::{DMatrix, DVector};

use crate::Complex64;

/// Singular values, descending.
pub fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Numerical rank with the usual max(m, n)·eps·σ_max cutoff.
pub fn dense_rank(a: &DMatrix<Complex64>) -> usize {
    let s = singular_values(a);
    let Some(&top) = s.first() else { return 0 };
    let tol = a.nrows().max(a.ncols()) as f64 * f64::EPSILON * top;
    s.iter().filter(|&&x| x > tol).count()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &DMatrix<Complex64>) -> Vec<f64> {
    let mut e: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(|x, y| x.total_cmp(y));
    e
}

/// Dense LU solve; `None` when the factorization is singular.
pub fn dense_solve(a: &DMatrix<Complex64>, b: &[Complex64]) -> Option<Vec<Complex64>> {
    let x = a.clone().lu().solve(&DVector::from_column_slice(b))?;
    Some(x.iter().copied().collect())
}
