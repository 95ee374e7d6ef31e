//! Browser bindings for three interactive studies on the academic bar and
//! the manufactured cube: conditioning over frequency, a field slice, and
//! mesh convergence. Results cross the boundary as flat `Float64Array`s.

use lfmaxwell::physics::fields::hcurl_error;
use lfmaxwell::physics::{curl_system_matrix, run_two_step, DerivedFields, FieldSample, Method, Problem, Scenario};
use lfmaxwell::solve::condition::condition_estimate;
use lfmaxwell::system::FrequencyPoint;
use lfmaxwell::Complex64;
use wasm_bindgen::prelude::*;

/// Largest academic mesh offered in the page (dense SVD stays interactive).
pub const MAX_SUBDIVISIONS: usize = 6;
/// Finest manufactured mesh is 2^MAX_LEVELS cells per axis.
pub const MAX_LEVELS: usize = 3;
pub const MAX_RESOLUTION: usize = 256;

/// Values per row of [`condition_sweep`].
pub const SWEEP_STRIDE: usize = 5;
/// Values per row of [`mms_convergence`].
pub const CONVERGENCE_STRIDE: usize = 3;

fn academic(subdivisions: usize) -> Result<Problem, String> {
    if !(1..=MAX_SUBDIVISIONS).contains(&subdivisions) {
        return Err(format!("subdivisions must be in 1..={MAX_SUBDIVISIONS}"));
    }
    Problem::build(&Scenario::academic([subdivisions; 3])).map_err(|e| e.to_string())
}

fn frequency(f_hz: f64) -> Result<FrequencyPoint, String> {
    FrequencyPoint::new(f_hz).map_err(|e| e.to_string())
}

/// Rows of `[f, cond original, cond tree-cotree, δ_D original, δ_D tree-cotree]`.
/// The first row is f = 0 when `include_dc`, the rest are log-spaced.
/// Singular solves give an infinite condition number and a NaN residual.
pub fn sweep_rows(
    subdivisions: usize,
    log_f_min: f64,
    log_f_max: f64,
    points: usize,
    include_dc: bool,
) -> Result<Vec<f64>, String> {
    if points == 0 || points > 200 || !(log_f_min.is_finite() && log_f_max.is_finite()) {
        return Err("need 1..=200 points and finite exponents".into());
    }
    let problem = academic(subdivisions)?;
    let mut freqs: Vec<f64> = if include_dc { vec![0.0] } else { Vec::new() };
    freqs.extend((0..points).map(|k| {
        let t = if points == 1 { 0.0 } else { k as f64 / (points - 1) as f64 };
        10f64.powf(log_f_min + t * (log_f_max - log_f_min))
    }));
    let mut out = Vec::with_capacity(freqs.len() * SWEEP_STRIDE);
    for f in freqs {
        let freq = frequency(f)?;
        out.push(f);
        let mut deltas = [f64::NAN; 2];
        for (k, m) in [Method::Original, Method::TreeCotree].into_iter().enumerate() {
            let matrix = curl_system_matrix(&problem, freq, m).map_err(|e| e.to_string())?;
            out.push(condition_estimate(&matrix).value());
            match run_two_step(&problem, freq, m) {
                Ok(sol) => deltas[k] = sol.diagnostics.delta_d,
                Err(e) if e.is_singular() => {}
                Err(e) => return Err(e.to_string()),
            }
        }
        out.extend(deltas);
    }
    Ok(out)
}

fn pick(sample: &FieldSample, quantity: &str) -> Option<[Complex64; 3]> {
    Some(match quantity {
        "A" => sample.a,
        "B" => sample.b,
        "E" => sample.e,
        "D" => sample.d,
        "D_e" => sample.d_e,
        "D_m" => sample.d_m,
        "J" => sample.j,
        "J_e" => sample.j_e,
        "J_m" => sample.j_m,
        _ => return None,
    })
}

/// Magnitude of a complex field on the horizontal plane at height fraction
/// `z_fraction`, `resolution`² values with x fastest.
pub fn slice_values(
    subdivisions: usize,
    f_hz: f64,
    method: &str,
    quantity: &str,
    z_fraction: f64,
    resolution: usize,
) -> Result<Vec<f64>, String> {
    if !(1..=MAX_RESOLUTION).contains(&resolution) {
        return Err(format!("resolution must be in 1..={MAX_RESOLUTION}"));
    }
    if !(0.0..=1.0).contains(&z_fraction) {
        return Err("z fraction must lie in [0, 1]".into());
    }
    let method: Method = method.parse().map_err(|e: lfmaxwell::Error| e.to_string())?;
    let problem = academic(subdivisions)?;
    let sol = run_two_step(&problem, frequency(f_hz)?, method).map_err(|e| e.to_string())?;
    let fields = DerivedFields::new(&problem, &sol).map_err(|e| e.to_string())?;
    let ext = problem.mesh.extents();
    let z = ext[2][0] + z_fraction * (ext[2][1] - ext[2][0]);
    let mut out = Vec::with_capacity(resolution * resolution);
    for j in 0..resolution {
        for i in 0..resolution {
            // pixel centres
            let x = ext[0][0] + (i as f64 + 0.5) / resolution as f64 * (ext[0][1] - ext[0][0]);
            let y = ext[1][0] + (j as f64 + 0.5) / resolution as f64 * (ext[1][1] - ext[1][0]);
            let s = fields.evaluate([x, y, z]).map_err(|e| e.to_string())?;
            let v = pick(&s, quantity).ok_or_else(|| format!("unknown quantity `{quantity}`"))?;
            out.push(v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt());
        }
    }
    Ok(out)
}

/// Rows of `[s_h, error tree-cotree, error original]` for s_h = 2, 4, …,
/// 2^levels; NaN marks a singular solve.
pub fn convergence_rows(sigma: f64, f_hz: f64, levels: usize) -> Result<Vec<f64>, String> {
    if !(1..=MAX_LEVELS).contains(&levels) {
        return Err(format!("levels must be in 1..={MAX_LEVELS}"));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err("sigma must be finite and >= 0".into());
    }
    let freq = frequency(f_hz)?;
    let mut out = Vec::with_capacity(levels * CONVERGENCE_STRIDE);
    for level in 1..=levels {
        let s_h = 1usize << level;
        let problem = Problem::build(&Scenario::manufactured(s_h, sigma)).map_err(|e| e.to_string())?;
        let case = *problem.scenario.manufactured_case().expect("manufactured scenario");
        out.push(s_h as f64);
        for m in [Method::TreeCotree, Method::Original] {
            out.push(match run_two_step(&problem, freq, m) {
                Ok(sol) => hcurl_error(&problem, &sol, &case),
                Err(e) if e.is_singular() => f64::NAN,
                Err(e) => return Err(e.to_string()),
            });
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn condition_sweep(
    subdivisions: usize,
    log_f_min: f64,
    log_f_max: f64,
    points: usize,
    include_dc: bool,
) -> Result<Vec<f64>, JsError> {
    sweep_rows(subdivisions, log_f_min, log_f_max, points, include_dc).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn field_slice(
    subdivisions: usize,
    f_hz: f64,
    method: &str,
    quantity: &str,
    z_fraction: f64,
    resolution: usize,
) -> Result<Vec<f64>, JsError> {
    slice_values(subdivisions, f_hz, method, quantity, z_fraction, resolution).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mms_convergence(sigma: f64, f_hz: f64, levels: usize) -> Result<Vec<f64>, JsError> {
    convergence_rows(sigma, f_hz, levels).map_err(|e| JsError::new(&e))
}
