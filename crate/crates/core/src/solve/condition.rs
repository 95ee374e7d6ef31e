//! 2-norm condition numbers: exact via dense SVD for small systems, power
//! and inverse iteration through the sparse LU otherwise.

use crate::solve::dense::singular_values;
use crate::solve::lu::SparseLu;
use crate::sparse::{norm2, ComplexSparseMatrix};
use crate::Complex64;

/// Largest dimension for which the dense SVD is used.
pub const DENSE_LIMIT: usize = 2000;
pub const MAX_ITERATIONS: usize = 200;
pub const ITERATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionMethod {
    DenseSvd,
    PowerIteration,
}

impl ConditionMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ConditionMethod::DenseSvd => "dense-svd",
            ConditionMethod::PowerIteration => "power-iteration",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionEstimate {
    /// σ_max / σ_min as computed (may be huge or infinite).
    pub ratio: f64,
    pub sigma_max: f64,
    pub sigma_min: f64,
    /// Set when σ_min is indistinguishable from zero.
    pub singular: bool,
    pub method: ConditionMethod,
    /// Iterations for σ_max and σ_min (zero for the dense path).
    pub iterations: [usize; 2],
}

impl ConditionEstimate {
    /// κ₂, or infinity when flagged singular.
    pub fn value(&self) -> f64 {
        if self.singular {
            f64::INFINITY
        } else {
            self.ratio
        }
    }
}

pub fn condition_estimate(a: &ComplexSparseMatrix) -> ConditionEstimate {
    let method = if a.nrows() <= DENSE_LIMIT {
        ConditionMethod::DenseSvd
    } else {
        ConditionMethod::PowerIteration
    };
    condition_estimate_with(a, method)
}

pub fn condition_estimate_with(a: &ComplexSparseMatrix, method: ConditionMethod) -> ConditionEstimate {
    assert_eq!(a.nrows(), a.ncols(), "condition number needs a square matrix");
    match method {
        ConditionMethod::DenseSvd => dense(a),
        ConditionMethod::PowerIteration => iterative(a),
    }
}

fn dense(a: &ComplexSparseMatrix) -> ConditionEstimate {
    let s = singular_values(&a.to_dense());
    let sigma_max = s.first().copied().unwrap_or(0.0);
    let sigma_min = s.last().copied().unwrap_or(0.0);
    let n = a.nrows() as f64;
    ConditionEstimate {
        ratio: sigma_max / sigma_min,
        sigma_max,
        sigma_min,
        singular: !(sigma_min > n * f64::EPSILON * sigma_max),
        method: ConditionMethod::DenseSvd,
        iterations: [0, 0],
    }
}

/// Deterministic, nowhere-sparse start vector.
fn start_vector(n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|i| {
            let t = i as f64;
            Complex64::new(1.0 + 0.5 * (1.3 * t + 0.4).sin(), 0.5 * (0.7 * t).cos())
        })
        .collect();
    normalized(v)
}

fn normalized(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let n = norm2(&v);
    for x in &mut v {
        *x /= n;
    }
    v
}

fn iterative(a: &ComplexSparseMatrix) -> ConditionEstimate {
    let n = a.nrows();
    let ah = a.adjoint();
    // σ_max: power iteration on AᴴA, estimate ‖A v‖ for unit v
    let mut v = start_vector(n);
    let mut sigma_max = 0.0;
    let mut it_max = 0;
    for it in 1..=MAX_ITERATIONS {
        let av = a.mul_vec(&v);
        let est = norm2(&av);
        it_max = it;
        let w = ah.mul_vec(&av);
        let done = (est - sigma_max).abs() <= ITERATION_TOLERANCE * est;
        sigma_max = est;
        if done || norm2(&w) == 0.0 {
            break;
        }
        v = normalized(w);
    }
    let singular_result = |it| ConditionEstimate {
        ratio: f64::INFINITY,
        sigma_max,
        sigma_min: 0.0,
        singular: true,
        method: ConditionMethod::PowerIteration,
        iterations: [it_max, it],
    };
    let Ok(lu) = SparseLu::factor(a) else {
        return singular_result(0);
    };
    // σ_min: inverse iteration on (AᴴA)⁻¹, estimate 1/‖A⁻¹ v‖
    let mut v = start_vector(n);
    let mut sigma_min = f64::INFINITY;
    let mut it_min = 0;
    for it in 1..=MAX_ITERATIONS {
        let y = lu.solve(&v);
        let ny = norm2(&y);
        it_min = it;
        if !ny.is_finite() || ny == 0.0 {
            return singular_result(it);
        }
        let est = 1.0 / ny;
        let done = (est - sigma_min).abs() <= ITERATION_TOLERANCE * est;
        sigma_min = est;
        if done {
            break;
        }
        v = normalized(lu.solve_adjoint(&y));
    }
    ConditionEstimate {
        ratio: sigma_max / sigma_min,
        sigma_max,
        sigma_min,
        singular: !(sigma_min > n as f64 * f64::EPSILON * sigma_max),
        method: ConditionMethod::PowerIteration,
        iterations: [it_max, it_min],
    }
}
