//! Frequency sweeps: conditioning, gauge residual and solve residual per
//! (frequency, method).

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use lfmaxwell::physics::fields::hcurl_error;
use lfmaxwell::physics::{curl_system_matrix, run_two_step, Method, Problem};
use lfmaxwell::solve::condition::{condition_estimate, ConditionEstimate};
use lfmaxwell::system::FrequencyPoint;
use lfmaxwell::Error;
use rayon::prelude::*;

use crate::CSV_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Condition,
    DeltaD,
    HcurlError,
    SolveResidual,
}

impl Quantity {
    pub const DEFAULT: [Quantity; 3] = [Quantity::Condition, Quantity::DeltaD, Quantity::SolveResidual];
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "condition" => Ok(Quantity::Condition),
            "delta_D" | "delta_d" => Ok(Quantity::DeltaD),
            "hcurl_error" => Ok(Quantity::HcurlError),
            "solve_residual" | "rel_residual" => Ok(Quantity::SolveResidual),
            other => Err(format!(
                "unknown quantity `{other}` (expected condition, delta_D, hcurl_error, solve_residual)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub frequencies: Vec<f64>,
    pub methods: Vec<Method>,
    pub quantities: Vec<Quantity>,
    /// Record wall-clock time; off by default so output is reproducible.
    pub timing: bool,
}

impl SweepSpec {
    fn wants(&self, q: Quantity) -> bool {
        self.quantities.contains(&q)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Solved {
        delta_d: f64,
        rel_residual: f64,
        hcurl_error: Option<f64>,
    },
    Singular,
    /// The sources are not defined at this frequency.
    Undefined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub f_hz: f64,
    pub method: Method,
    pub condition: Option<ConditionEstimate>,
    pub n_dofs: usize,
    pub outcome: Outcome,
    pub wall_ms: Option<f64>,
}

fn sweep_point(problem: &Problem, spec: &SweepSpec, f_hz: f64, method: Method) -> Result<SweepRow, Error> {
    let start = Instant::now();
    let freq = FrequencyPoint::new(f_hz)?;
    let matrix = curl_system_matrix(problem, freq, method)?;
    let condition = spec.wants(Quantity::Condition).then(|| condition_estimate(&matrix));
    let outcome = match run_two_step(problem, freq, method) {
        Ok(sol) => Outcome::Solved {
            delta_d: sol.diagnostics.delta_d,
            rel_residual: sol.diagnostics.rel_residual,
            hcurl_error: match (spec.wants(Quantity::HcurlError), problem.scenario.manufactured_case()) {
                (true, Some(case)) => Some(hcurl_error(problem, &sol, case)),
                _ => None,
            },
        },
        Err(e) if e.is_singular() => Outcome::Singular,
        Err(Error::UndefinedSource) => Outcome::Undefined,
        Err(e) => return Err(e),
    };
    Ok(SweepRow {
        f_hz,
        method,
        condition,
        n_dofs: matrix.nrows(),
        outcome,
        wall_ms: spec.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

/// One row per (frequency, method), frequencies outermost, in input order.
/// Points are evaluated in parallel.
pub fn frequency_sweep(problem: &Problem, spec: &SweepSpec) -> Result<Vec<SweepRow>, Error> {
    let points: Vec<(f64, Method)> = spec
        .frequencies
        .iter()
        .flat_map(|&f| spec.methods.iter().map(move |&m| (f, m)))
        .collect();
    points
        .par_iter()
        .map(|&(f, m)| sweep_point(problem, spec, f, m))
        .collect()
}

struct Num(f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}

pub const SWEEP_COLUMNS: &str = "f_hz,method,cond_estimate,cond_method,delta_D,rel_residual,n_dofs,wall_ms";

pub fn write_sweep_csv(rows: &[SweepRow], spec: &SweepSpec, out: &mut dyn Write) -> io::Result<()> {
    let with_error = spec.wants(Quantity::HcurlError);
    writeln!(out, "# {CSV_VERSION} sweep v1")?;
    writeln!(out, "{SWEEP_COLUMNS}{}", if with_error { ",hcurl_error" } else { "" })?;
    for r in rows {
        let (cond, cond_method) = match &r.condition {
            Some(c) => (Num(c.value()).to_string(), c.method.as_str().to_string()),
            None => ("-".into(), "-".into()),
        };
        let (delta, residual, error) = match &r.outcome {
            Outcome::Solved {
                delta_d,
                rel_residual,
                hcurl_error,
            } => (
                if spec.wants(Quantity::DeltaD) { Num(*delta_d).to_string() } else { "-".into() },
                if spec.wants(Quantity::SolveResidual) { Num(*rel_residual).to_string() } else { "-".into() },
                hcurl_error.map_or("-".into(), |e| Num(e).to_string()),
            ),
            Outcome::Singular => ("singular".into(), "singular".into(), "singular".into()),
            Outcome::Undefined => ("undefined".into(), "undefined".into(), "undefined".into()),
        };
        let wall = r.wall_ms.map_or("-".into(), |w| format!("{w:.3}"));
        write!(
            out,
            "{},{},{cond},{cond_method},{delta},{residual},{},{wall}",
            r.f_hz, r.method, r.n_dofs
        )?;
        if with_error {
            write!(out, ",{error}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}
