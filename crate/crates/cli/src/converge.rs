//! Mesh-refinement studies against the manufactured solution.

use std::io::{self, Write};

use lfmaxwell::physics::fields::hcurl_error;
use lfmaxwell::physics::{run_two_step, Method};
use lfmaxwell::system::FrequencyPoint;
use rayon::prelude::*;

use crate::{build_problem, CliError, ScenarioConfig, CSV_VERSION};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergeRow {
    pub s_h: usize,
    pub method: Method,
    /// `None` when the solve was singular.
    pub hcurl_error: Option<f64>,
    /// log(e_prev / e) / log(s_h / s_h_prev) against the previous
    /// successful refinement of the same method.
    pub rate: Option<f64>,
}

/// Rows ordered by refinement level, then method.
pub fn convergence_study(
    config: &ScenarioConfig,
    subdivisions: &[usize],
    f_hz: f64,
    methods: &[Method],
) -> Result<Vec<ConvergeRow>, CliError> {
    let case = *config
        .scenario
        .manufactured_case()
        .ok_or_else(|| CliError::Config("convergence studies need `source manufactured`".into()))?;
    if subdivisions.is_empty() || subdivisions.contains(&0) {
        return Err(CliError::Config("subdivision list must be nonempty and positive".into()));
    }
    let freq = FrequencyPoint::new(f_hz).map_err(|e| CliError::Config(e.to_string()))?;
    let levels: Vec<Vec<Option<f64>>> = subdivisions
        .par_iter()
        .map(|&s| {
            let problem = build_problem(&config.with_subdivisions(s))?;
            methods
                .iter()
                .map(|&m| match run_two_step(&problem, freq, m) {
                    Ok(sol) => Ok(Some(hcurl_error(&problem, &sol, &case))),
                    Err(e) if e.is_singular() => Ok(None),
                    Err(e) => Err(CliError::Config(e.to_string())),
                })
                .collect()
        })
        .collect::<Result<_, CliError>>()?;

    let mut rows = Vec::new();
    let mut last: Vec<Option<(usize, f64)>> = vec![None; methods.len()];
    for (&s, errors) in subdivisions.iter().zip(&levels) {
        for (k, (&method, &error)) in methods.iter().zip(errors).enumerate() {
            let rate = match (last[k], error) {
                (Some((s0, e0)), Some(e)) if s != s0 => Some((e0 / e).ln() / (s as f64 / s0 as f64).ln()),
                _ => None,
            };
            if let Some(e) = error {
                last[k] = Some((s, e));
            }
            rows.push(ConvergeRow {
                s_h: s,
                method,
                hcurl_error: error,
                rate,
            });
        }
    }
    Ok(rows)
}

pub const CONVERGE_COLUMNS: &str = "s_h,method,hcurl_error,rate";

pub fn write_converge_csv(rows: &[ConvergeRow], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "# {CSV_VERSION} converge v1")?;
    writeln!(out, "{CONVERGE_COLUMNS}")?;
    for r in rows {
        let error = r.hcurl_error.map_or("singular".into(), |e| format!("{e:e}"));
        let rate = r.rate.map_or("-".into(), |x| format!("{x:.6}"));
        writeln!(out, "{},{},{error},{rate}", r.s_h, r.method)?;
    }
    Ok(())
}
