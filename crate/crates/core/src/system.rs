//! Per-frequency linear systems of the two-step formulation.
//!
//! Step one: K_κ u = iω q_s (or its ω → 0 block limit). Step two:
//! W a = j(u) with W = C_ν + iωM_σ − ω²M_ε and j(u) = j_s − G_κ u, either as
//! is, with a Lagrange multiplier for the gauge, or with the tree rows of W
//! replaced by the scaled divergence rows.

use std::f64::consts::PI;

use crate::assembly::{MaterialField, MatrixBundle, SourceVectors};
use crate::gauge::TreeCotreePartition;
use crate::mesh::{Mesh, Region};
use crate::spaces::{EdgeSpace, ScalarSpace};
use crate::sparse::{ComplexSparseMatrix, TripletBuilder};
use crate::{c64, Complex64, Error, Result, I};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyPoint {
    /// Frequency in Hz.
    pub f: f64,
    /// Angular frequency in rad/s.
    pub omega: f64,
}

impl FrequencyPoint {
    pub fn new(f: f64) -> Result<Self> {
        if !(f >= 0.0 && f.is_finite()) {
            return Err(Error::InvalidArgument(format!("frequency must be finite and >= 0, got {f}")));
        }
        Ok(Self { f, omega: 2.0 * PI * f })
    }

    pub fn is_static(&self) -> bool {
        self.omega == 0.0
    }
}

/// Default artificial conductivity inside γ.
pub const SIGMA_ART: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFactors {
    pub beta: f64,
    pub gamma: f64,
    pub sigma_art: f64,
}

/// β = 1 + ω, γ = (1 + ω)(σ_max + σ_art)/ε_max.
pub fn scaling_factors(omega: f64, sigma_max: f64, eps_max: f64) -> ScalingFactors {
    scaling_factors_with(omega, sigma_max, eps_max, SIGMA_ART)
}

pub fn scaling_factors_with(omega: f64, sigma_max: f64, eps_max: f64, sigma_art: f64) -> ScalingFactors {
    assert!(eps_max > 0.0, "maximum permittivity must be positive");
    let beta = 1.0 + omega;
    ScalingFactors {
        beta,
        gamma: beta * (sigma_max + sigma_art) / eps_max,
        sigma_art,
    }
}

/// Step-one system on the free nodes: K_κ and iω q_s minus the Dirichlet lift.
pub fn build_eqs_system(
    bundle: &MatrixBundle,
    scalar: &ScalarSpace,
    sources: &SourceVectors,
    omega: f64,
) -> (ComplexSparseMatrix, Vec<Complex64>) {
    let k = bundle.k_kappa(omega);
    let a = k.submatrix(scalar.free(), scalar.free());
    let lift = k.submatrix(scalar.free(), scalar.constrained()).mul_vec(&scalar.constrained_values());
    let rhs = scalar
        .free()
        .iter()
        .zip(&lift)
        .map(|(&n, l)| I * omega * sources.q_s[n] - l)
        .collect();
    (a, rhs)
}

/// Connected conductor components (cells sharing a node), as node lists.
pub fn conductor_components(mesh: &Mesh, mat: &MaterialField) -> Vec<Vec<usize>> {
    let tags = mat.regions();
    let node_cells = mesh.node_cells();
    let mut label = vec![usize::MAX; mesh.cell_count()];
    let mut components = Vec::new();
    for start in 0..mesh.cell_count() {
        if tags.cell_region[start] != Region::Conductor || label[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut nodes = Vec::new();
        let mut stack = vec![start];
        label[start] = id;
        while let Some(c) = stack.pop() {
            for &n in mesh.cell_nodes(c) {
                nodes.push(n);
                for &d in &node_cells[n] {
                    if tags.cell_region[d] == Region::Conductor && label[d] == usize::MAX {
                        label[d] = id;
                        stack.push(d);
                    }
                }
            }
        }
        nodes.sort_unstable();
        nodes.dedup();
        components.push(nodes);
    }
    components
}

/// The ω → 0 limit of step one: conductor rows solve stationary current
/// flow with K_σ, air rows the electrostatic problem K_ε u = q_s with the
/// conductor potential as data.
pub fn build_eqs_static_limit(
    mesh: &Mesh,
    mat: &MaterialField,
    bundle: &MatrixBundle,
    scalar: &ScalarSpace,
    sources: &SourceVectors,
) -> Result<(ComplexSparseMatrix, Vec<Complex64>)> {
    for (id, comp) in conductor_components(mesh, mat).iter().enumerate() {
        if comp.iter().all(|&n| scalar.is_free(n)) {
            return Err(Error::FloatingConductor { component: id });
        }
    }
    let conductor = &mat.regions().node_conductor;
    let uc = scalar.constrained_values();
    let mut t = TripletBuilder::new(scalar.n_free(), scalar.n_free());
    let mut rhs = Vec::with_capacity(scalar.n_free());
    let kc_sigma = bundle.k_sigma.submatrix(scalar.free(), scalar.constrained()).mul_vec(&uc);
    let kc_eps = bundle.k_eps.submatrix(scalar.free(), scalar.constrained()).mul_vec(&uc);
    for (i, &n) in scalar.free().iter().enumerate() {
        let (k, value) = if conductor[n] {
            (&bundle.k_sigma, -kc_sigma[i])
        } else {
            (&bundle.k_eps, sources.q_s[n] - kc_eps[i])
        };
        for (col, v) in k.row(n) {
            if let Some(j) = scalar.dof(col) {
                t.push(i, j, v);
            }
        }
        rhs.push(value);
    }
    Ok((t.build(), rhs))
}

/// W = C_ν + iωM_σ − ω²M_ε on the free edges.
pub fn build_curl_matrix(bundle: &MatrixBundle, edge: &EdgeSpace, omega: f64) -> ComplexSparseMatrix {
    let f = edge.free();
    let c = bundle.c_nu.submatrix(f, f);
    let m = bundle
        .m_sigma
        .submatrix(f, f)
        .linear_combination(I * omega, &bundle.m_eps.submatrix(f, f), c64(-omega * omega));
    c.add(&m)
}

/// j(u) = j_s − G_κ u on the free edges, `u_full` over all nodes.
pub fn build_rhs(
    bundle: &MatrixBundle,
    edge: &EdgeSpace,
    sources: &SourceVectors,
    omega: f64,
    u_full: &[Complex64],
) -> Vec<Complex64> {
    let gu = bundle.g_kappa(omega).mul_vec(u_full);
    edge.free().iter().map(|&e| sources.j_s[e] - gu[e]).collect()
}

/// Unscaled κ-weighted divergence (D_σ + iωD_ε) on gauge rows × free edges.
pub fn gauge_divergence(
    bundle: &MatrixBundle,
    edge: &EdgeSpace,
    gauge_nodes: &[usize],
    omega: f64,
) -> ComplexSparseMatrix {
    bundle.d_kappa(omega).submatrix(gauge_nodes, edge.free())
}

/// Region-scaled divergence rows: conductor rows β(D_σ + iωD_ε), air rows γD_ε.
/// Air rows see no conductivity, so both row types are multiples of the
/// unscaled gauge for ω > 0 and neither vanishes at ω = 0.
pub fn build_scaled_divergence(
    bundle: &MatrixBundle,
    edge: &EdgeSpace,
    gauge_nodes: &[usize],
    conductor_node: &[bool],
    omega: f64,
    factors: &ScalingFactors,
) -> ComplexSparseMatrix {
    let mut t = TripletBuilder::new(gauge_nodes.len(), edge.n_free());
    for (r, &n) in gauge_nodes.iter().enumerate() {
        if conductor_node[n] {
            let beta = c64(factors.beta);
            for (e, v) in bundle.d_sigma.row(n) {
                if let Some(j) = edge.dof(e) {
                    t.push(r, j, beta * v);
                }
            }
            for (e, v) in bundle.d_eps.row(n) {
                if let Some(j) = edge.dof(e) {
                    t.push(r, j, beta * I * omega * v);
                }
            }
        } else {
            for (e, v) in bundle.d_eps.row(n) {
                if let Some(j) = edge.dof(e) {
                    t.push(r, j, factors.gamma * v);
                }
            }
        }
    }
    t.build()
}

/// [[W, Dᵀ], [D, 0]] and [j; 0].
pub fn build_lagrange_system(
    w: &ComplexSparseMatrix,
    d: &ComplexSparseMatrix,
    rhs: &[Complex64],
) -> Result<(ComplexSparseMatrix, Vec<Complex64>)> {
    let dt = d.transpose();
    let a = ComplexSparseMatrix::from_blocks(&[vec![Some(w), Some(&dt)], vec![Some(d), None]])?;
    let mut b = rhs.to_vec();
    b.resize(a.nrows(), c64(0.0));
    Ok((a, b))
}

/// Rows [W^(R·); D], columns in [R|T] order, right-hand side [j^(R); 0].
/// The solution comes out permuted; restore it with the partition.
pub fn build_stabilized_system(
    w: &ComplexSparseMatrix,
    d: &ComplexSparseMatrix,
    rhs: &[Complex64],
    partition: &TreeCotreePartition,
) -> Result<(ComplexSparseMatrix, Vec<Complex64>)> {
    if d.nrows() != partition.tree().len() {
        return Err(Error::DimensionMismatch {
            expected: partition.tree().len(),
            found: d.nrows(),
        });
    }
    let perm = partition.permutation();
    let all_rows: Vec<usize> = (0..d.nrows()).collect();
    let w_r = w.submatrix(partition.cotree(), perm);
    let d_p = d.submatrix(&all_rows, perm);
    let a = ComplexSparseMatrix::from_blocks(&[vec![Some(&w_r)], vec![Some(&d_p)]])?;
    let mut b: Vec<Complex64> = partition.cotree().iter().map(|&r| rhs[r]).collect();
    b.resize(a.nrows(), c64(0.0));
    Ok((a, b))
}
