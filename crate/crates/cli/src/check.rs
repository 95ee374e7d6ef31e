//! Invariant suite for one scenario.

use lfmaxwell::physics::{run_two_step, Method, Problem};
use lfmaxwell::solve::dense::dense_rank;
use lfmaxwell::sparse::{norm2, sub, ComplexSparseMatrix};
use lfmaxwell::spaces::full_gradient_incidence;
use lfmaxwell::system::{build_curl_matrix, gauge_divergence, FrequencyPoint};
use lfmaxwell::{Complex64, Error};

/// Rank checks are skipped above this many free edges.
pub const DENSE_CHECK_LIMIT: usize = 1500;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    /// `None` when skipped.
    pub pass: Option<bool>,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            pass: Some(pass),
            detail,
        }
    }

    fn skipped(name: &str, why: &str) -> Self {
        Self {
            name: name.into(),
            pass: None,
            detail: why.into(),
        }
    }

    pub fn line(&self) -> String {
        let tag = match self.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "SKIP",
        };
        format!("[{tag}] {}: {}", self.name, self.detail)
    }
}

fn relative(m: &ComplexSparseMatrix, scale: f64) -> f64 {
    if scale == 0.0 {
        m.max_abs()
    } else {
        m.max_abs() / scale
    }
}

fn difference(a: &ComplexSparseMatrix, b: &ComplexSparseMatrix) -> ComplexSparseMatrix {
    a.linear_combination(Complex64::new(1.0, 0.0), b, Complex64::new(-1.0, 0.0))
}

pub fn run_checks(problem: &Problem) -> Vec<CheckResult> {
    let b = &problem.bundle;
    let mut out = Vec::new();

    let p = full_gradient_incidence(&problem.mesh);
    let cp = relative(&b.c_nu.mul(&p), b.c_nu.max_abs());
    out.push(CheckResult::new("curl of gradients", cp <= 1e-12, format!("|C P|/|C| = {cp:.2e}")));

    let sym = [&b.k_sigma, &b.k_eps, &b.m_sigma, &b.m_eps, &b.c_nu]
        .iter()
        .map(|m| relative(&difference(m, &m.transpose()), m.max_abs()))
        .fold(0.0, f64::max);
    out.push(CheckResult::new("symmetry", sym <= 1e-13, format!("max relative asymmetry {sym:.2e}")));

    let div = [(&b.d_sigma, &b.g_sigma), (&b.d_eps, &b.g_eps)]
        .iter()
        .map(|(d, g)| relative(&difference(d, &g.transpose().scale(Complex64::new(-1.0, 0.0))), g.max_abs()))
        .fold(0.0, f64::max);
    out.push(CheckResult::new("divergence is -G^T", div <= 1e-14, format!("{div:.2e}")));

    let tree = problem.partition.tree().len();
    let vertices = problem.graph.vertex_count();
    let gauge = problem.gauge_nodes().len();
    out.push(CheckResult::new(
        "tree size",
        tree + 1 == vertices && tree == gauge,
        format!("|T| = {tree}, vertices = {vertices}, gauge rows = {gauge}"),
    ));

    let n = problem.edge.n_free();
    if n <= DENSE_CHECK_LIMIT {
        let free = problem.edge.free();
        let c = b.c_nu.submatrix(free, free);
        let kernel = n - dense_rank(&c.to_dense());
        out.push(CheckResult::new(
            "kernel matches tree",
            kernel == tree,
            format!("dim ker C = {kernel}, |T| = {tree}"),
        ));
        let w0 = build_curl_matrix(b, &problem.edge, 0.0);
        let cotree = problem.partition.cotree();
        let wrr = w0.submatrix(cotree, cotree);
        let rank = dense_rank(&wrr.to_dense());
        out.push(CheckResult::new(
            "cotree block full rank at f=0",
            rank == cotree.len(),
            format!("rank {rank} of {}", cotree.len()),
        ));
    } else {
        let why = format!("{n} free edges exceed the dense limit {DENSE_CHECK_LIMIT}");
        out.push(CheckResult::skipped("kernel matches tree", &why));
        out.push(CheckResult::skipped("cotree block full rank at f=0", &why));
    }

    for f in [0.0, 10.0, 1e6] {
        let freq = FrequencyPoint::new(f).expect("valid frequency");
        let name = format!("gauge and variant agreement at {f} Hz");
        let solve = |m| run_two_step(problem, freq, m);
        match (solve(Method::TreeCotree), solve(Method::Lagrange)) {
            (Ok(tc), Ok(lm)) => {
                let scale = norm2(&tc.a).max(1.0);
                let gap = norm2(&sub(&tc.a, &lm.a)) / scale;
                // δ_D carries the units of κ; measure it against the operator size
                let d_size = gauge_divergence(b, &problem.edge, problem.gauge_nodes(), freq.omega)
                    .max_abs()
                    .max(1.0);
                let gauge = tc.diagnostics.delta_d.max(lm.diagnostics.delta_d) / (scale * d_size);
                out.push(CheckResult::new(
                    &name,
                    gap <= 1e-8 && gauge <= 1e-10,
                    format!(
                        "|a_TC - a_LM|/max(|a|,1) = {gap:.2e}, delta_D/(max(|a|,1) max(|D|,1)) = {gauge:.2e}"
                    ),
                ));
            }
            (Err(Error::UndefinedSource), _) | (_, Err(Error::UndefinedSource)) => {
                out.push(CheckResult::skipped(&name, "sources undefined at this frequency"))
            }
            (Err(e), _) | (_, Err(e)) => out.push(CheckResult::new(&name, false, e.to_string())),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use lfmaxwell::physics::Scenario;

    #[test]
    fn academic_passes() {
        let p = Problem::build(&Scenario::academic([3, 3, 3])).unwrap();
        let results = run_checks(&p);
        for r in &results {
            assert_eq!(r.pass, Some(true), "{}", r.line());
        }
    }

    #[test]
    fn conducting_mms_skips_static_point() {
        let p = Problem::build(&Scenario::manufactured(2, 6e7)).unwrap();
        let results = run_checks(&p);
        assert!(results.iter().any(|r| r.pass.is_none()));
        assert!(results.iter().all(|r| r.pass != Some(false)), "{results:?}");
    }
}
