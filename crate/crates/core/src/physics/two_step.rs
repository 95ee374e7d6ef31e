//! The two-step solve: scalar potential first, vector potential second.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::assembly::SourceVectors;
use crate::physics::scenario::Problem;
use crate::solve::lu::{relative_residual, sparse_lu_solve};
use crate::sparse::{norm2, ComplexSparseMatrix};
use crate::system::{
    build_curl_matrix, build_eqs_static_limit, build_eqs_system, build_lagrange_system, build_rhs,
    build_scaled_divergence, build_stabilized_system, gauge_divergence, FrequencyPoint,
};
use crate::{c64, Complex64, Error, Result, I};

/// How the curl step is posed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// W a = j(u) as is; singular at ω = 0.
    Original,
    /// Tree rows of W replaced by the scaled divergence.
    TreeCotree,
    /// Divergence enforced with a multiplier.
    Lagrange,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Original, Method::TreeCotree, Method::Lagrange];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Original => "original",
            Method::TreeCotree => "tree-cotree",
            Method::Lagrange => "lagrange",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "original" => Ok(Method::Original),
            "tree-cotree" | "treecotree" | "tc" => Ok(Method::TreeCotree),
            "lagrange" | "lm" => Ok(Method::Lagrange),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// ‖(D_σ + iωD_ε) a‖₂ over the gauge rows.
    pub delta_d: f64,
    /// Relative residual of the step-one solve.
    pub eqs_residual: f64,
    /// Relative residual of the step-two system that was solved.
    pub rel_residual: f64,
    /// ‖W a − j(u)‖ / ‖j(u)‖ for the unmodified curl equation.
    pub curl_residual: f64,
    /// Dimension of the step-two system.
    pub n_dofs: usize,
    pub eqs_time: Duration,
    pub curl_time: Duration,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub method: Method,
    pub frequency: FrequencyPoint,
    /// Scalar potential on free nodes.
    pub u: Vec<Complex64>,
    /// Scalar potential on all nodes.
    pub u_full: Vec<Complex64>,
    /// Vector potential on free edges.
    pub a: Vec<Complex64>,
    pub lambda: Option<Vec<Complex64>>,
    pub diagnostics: Diagnostics,
}

impl Solution {
    /// Vector potential on all edges (zero on constrained edges).
    pub fn a_full(&self, problem: &Problem) -> Vec<Complex64> {
        problem.edge.expand(&self.a)
    }
}

/// Step one: (K_σ + iωK_ε) u = iω q_s, or the static block limit at ω = 0.
pub fn solve_eqs(
    problem: &Problem,
    freq: FrequencyPoint,
    sources: &SourceVectors,
) -> Result<(Vec<Complex64>, f64, Duration)> {
    let (k, rhs) = if freq.is_static() {
        build_eqs_static_limit(&problem.mesh, &problem.materials, &problem.bundle, &problem.scalar, sources)?
    } else {
        build_eqs_system(&problem.bundle, &problem.scalar, sources, freq.omega)
    };
    if k.nrows() == 0 {
        return Ok((Vec::new(), 0.0, Duration::ZERO));
    }
    if freq.is_static() {
        let report = sparse_lu_solve(&k, &rhs)?;
        return Ok((report.x, report.rel_residual, report.wall_time));
    }
    // Rows of nodes away from conductors carry only iωK_ε. Dividing them by
    // iω keeps their pivots at the size of the ε-weighted static block, so
    // low frequencies are not mistaken for a singular matrix.
    let conductor = &problem.materials.regions().node_conductor;
    let row_scale: Vec<Complex64> = problem
        .scalar
        .free()
        .iter()
        .map(|&n| if conductor[n] { c64(1.0) } else { 1.0 / (I * freq.omega) })
        .collect();
    let n = row_scale.len();
    let diag = ComplexSparseMatrix::from_triplets(n, n, (0..n).map(|i| (i, i, row_scale[i])));
    let scaled_rhs: Vec<Complex64> = rhs.iter().zip(&row_scale).map(|(b, s)| b * s).collect();
    let report = sparse_lu_solve(&diag.mul(&k), &scaled_rhs)?;
    let residual = relative_residual(&k, &report.x, &rhs);
    Ok((report.x, residual, report.wall_time))
}

/// Step-two matrix and right-hand side for `method`. For the tree-cotree
/// variant the unknowns come in [R|T] order.
pub fn curl_system(
    problem: &Problem,
    freq: FrequencyPoint,
    method: Method,
    j: &[Complex64],
) -> Result<(ComplexSparseMatrix, Vec<Complex64>)> {
    let w = build_curl_matrix(&problem.bundle, &problem.edge, freq.omega);
    if method == Method::Original {
        return Ok((w, j.to_vec()));
    }
    let d = build_scaled_divergence(
        &problem.bundle,
        &problem.edge,
        problem.gauge_nodes(),
        &problem.materials.regions().node_conductor,
        freq.omega,
        &problem.scaling(freq.omega),
    );
    match method {
        Method::TreeCotree => build_stabilized_system(&w, &d, j, &problem.partition),
        Method::Lagrange => build_lagrange_system(&w, &d, j),
        Method::Original => unreachable!(),
    }
}

/// Step-two matrix alone (for conditioning studies).
pub fn curl_system_matrix(problem: &Problem, freq: FrequencyPoint, method: Method) -> Result<ComplexSparseMatrix> {
    let zero = vec![Complex64::new(0.0, 0.0); problem.edge.n_free()];
    Ok(curl_system(problem, freq, method, &zero)?.0)
}

/// Unscaled gauge residual δ_D = ‖(D_σ + iωD_ε) a‖₂ over the gauge rows.
pub fn gauge_residual(problem: &Problem, omega: f64, a: &[Complex64]) -> f64 {
    let d = gauge_divergence(&problem.bundle, &problem.edge, problem.gauge_nodes(), omega);
    norm2(&d.mul_vec(a))
}

pub fn run_two_step(problem: &Problem, freq: FrequencyPoint, method: Method) -> Result<Solution> {
    let sources = problem.sources(freq.omega)?;
    let (u, eqs_residual, eqs_time) = solve_eqs(problem, freq, &sources)?;
    let u_full = problem.scalar.expand(&u);
    let j = build_rhs(&problem.bundle, &problem.edge, &sources, freq.omega, &u_full);
    let (matrix, rhs) = curl_system(problem, freq, method, &j)?;
    let n_w = problem.edge.n_free();
    let (x, rel_residual, curl_time) = if matrix.nrows() == 0 {
        (Vec::new(), 0.0, Duration::ZERO)
    } else {
        let report = sparse_lu_solve(&matrix, &rhs)?;
        (report.x, report.rel_residual, report.wall_time)
    };
    let (a, lambda) = match method {
        Method::Original => (x, None),
        Method::TreeCotree => (problem.partition.restore_vector(&x)?, None),
        Method::Lagrange => (x[..n_w].to_vec(), Some(x[n_w..].to_vec())),
    };
    let w = build_curl_matrix(&problem.bundle, &problem.edge, freq.omega);
    let curl_residual = relative_residual(&w, &a, &j);
    Ok(Solution {
        method,
        frequency: freq,
        diagnostics: Diagnostics {
            delta_d: gauge_residual(problem, freq.omega, &a),
            eqs_residual,
            rel_residual,
            curl_residual,
            n_dofs: matrix.nrows(),
            eqs_time,
            curl_time,
        },
        u,
        u_full,
        a,
        lambda,
    })
}
