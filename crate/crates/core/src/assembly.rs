//! Global matrices and source vectors.
//!
//! Everything is assembled over all mesh entities; restriction to free DOFs
//! happens when the linear systems are formed, so the same bundle also serves
//! the Dirichlet lifts.

use crate::mesh::{assign_cells, AxisBox, Mesh, Region, RegionTags};
use crate::quadrature::gauss_cube;
use crate::spaces::{eval_edge_basis, eval_scalar_basis};
use crate::sparse::{ComplexSparseMatrix, TripletBuilder};
use crate::{c64, Complex64, Error, Result, I};

/// Piecewise-constant material parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    /// Conductivity in S/m.
    pub sigma: f64,
    /// Permittivity in F/m.
    pub epsilon: f64,
    /// Reluctivity in m/H.
    pub nu: f64,
}

impl Material {
    pub fn new(sigma: f64, epsilon: f64, nu: f64) -> Self {
        Self { sigma, epsilon, nu }
    }

    /// Relative parameters with respect to vacuum.
    pub fn relative(sigma: f64, eps_r: f64, mu_r: f64) -> Self {
        Self::new(sigma, eps_r * crate::EPS0, 1.0 / (mu_r * crate::MU0))
    }

    pub fn kappa(&self, omega: f64) -> Complex64 {
        Complex64::new(self.sigma, omega * self.epsilon)
    }
}

/// Material per cell; cells with σ > 0 form the conductor region.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialField {
    cell_material: Vec<Material>,
    regions: RegionTags,
}

impl MaterialField {
    /// Assigns materials by centroid membership, later boxes winning.
    pub fn from_boxes(mesh: &Mesh, zones: &[(AxisBox, Material)]) -> Result<Self> {
        for (_, m) in zones {
            if !(m.sigma >= 0.0 && m.epsilon > 0.0 && m.nu > 0.0)
                || !(m.sigma.is_finite() && m.epsilon.is_finite() && m.nu.is_finite())
            {
                return Err(Error::InvalidArgument(format!(
                    "material needs sigma >= 0, epsilon > 0, nu > 0, got {m:?}"
                )));
            }
        }
        let owner = assign_cells(mesh, zones)?;
        Ok(Self::from_cells(mesh, owner.into_iter().map(|z| zones[z].1).collect()))
    }

    pub fn uniform(mesh: &Mesh, material: Material) -> Result<Self> {
        Self::from_boxes(mesh, &[(mesh.domain(), material)])
    }

    pub fn from_cells(mesh: &Mesh, cell_material: Vec<Material>) -> Self {
        let region = cell_material
            .iter()
            .map(|m| if m.sigma > 0.0 { Region::Conductor } else { Region::Air })
            .collect();
        Self {
            regions: RegionTags::from_cell_regions(mesh, region),
            cell_material,
        }
    }

    pub fn cell(&self, c: usize) -> &Material {
        &self.cell_material[c]
    }

    pub fn regions(&self) -> &RegionTags {
        &self.regions
    }

    pub fn max_sigma(&self) -> f64 {
        self.cell_material.iter().map(|m| m.sigma).fold(0.0, f64::max)
    }

    pub fn max_epsilon(&self) -> f64 {
        self.cell_material.iter().map(|m| m.epsilon).fold(0.0, f64::max)
    }
}

/// Coefficient inside a bilinear form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Sigma,
    Epsilon,
    Nu,
    /// κ = σ + iωε at the given angular frequency.
    Kappa(f64),
    Constant(f64),
}

impl Weight {
    pub fn value(self, m: &Material) -> Complex64 {
        match self {
            Weight::Sigma => c64(m.sigma),
            Weight::Epsilon => c64(m.epsilon),
            Weight::Nu => c64(m.nu),
            Weight::Kappa(omega) => m.kappa(omega),
            Weight::Constant(v) => c64(v),
        }
    }
}

/// Reference-cell integrals of one cell with unit coefficient.
struct LocalMatrices {
    grad_grad: [[f64; 8]; 8],
    grad_edge: [[f64; 8]; 12],
    mass: [[f64; 12]; 12],
    curl_curl: [[f64; 12]; 12],
}

fn local_matrices(mesh: &Mesh, c: usize) -> LocalMatrices {
    let h = mesh.cell_size(c);
    let jac = h[0] * h[1] * h[2] / 8.0;
    let mut out = LocalMatrices {
        grad_grad: [[0.0; 8]; 8],
        grad_edge: [[0.0; 8]; 12],
        mass: [[0.0; 12]; 12],
        curl_curl: [[0.0; 12]; 12],
    };
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    for (xi, w) in gauss_cube(2) {
        let wj = w * jac;
        let (_, g) = eval_scalar_basis(mesh, c, xi);
        let (v, curl) = eval_edge_basis(mesh, c, xi);
        for i in 0..8 {
            for j in 0..8 {
                out.grad_grad[i][j] += wj * dot(g[i], g[j]);
            }
        }
        for i in 0..12 {
            for j in 0..8 {
                out.grad_edge[i][j] += wj * dot(v[i], g[j]);
            }
            for j in 0..12 {
                out.mass[i][j] += wj * dot(v[i], v[j]);
                out.curl_curl[i][j] += wj * dot(curl[i], curl[j]);
            }
        }
    }
    out
}

fn assemble_with<F>(mesh: &Mesh, nrows: usize, ncols: usize, mut cell: F) -> ComplexSparseMatrix
where
    F: FnMut(usize, &mut TripletBuilder),
{
    let mut t = TripletBuilder::new(nrows, ncols);
    for c in 0..mesh.cell_count() {
        cell(c, &mut t);
    }
    t.build()
}

/// ∫ weight · grad v_j · grad v_i over all nodes.
pub fn assemble_grad_grad(mesh: &Mesh, mat: &MaterialField, weight: Weight) -> ComplexSparseMatrix {
    let n = mesh.node_count();
    assemble_with(mesh, n, n, |c, t| {
        let k = weight.value(mat.cell(c));
        if k == c64(0.0) {
            return;
        }
        let local = local_matrices(mesh, c).grad_grad;
        let nodes = mesh.cell_nodes(c);
        for i in 0..8 {
            for j in 0..8 {
                t.push(nodes[i], nodes[j], k * local[i][j]);
            }
        }
    })
}

/// ∫ weight · grad v_j · w_i, edges × nodes.
pub fn assemble_grad_coupling(mesh: &Mesh, mat: &MaterialField, weight: Weight) -> ComplexSparseMatrix {
    assemble_with(mesh, mesh.edge_count(), mesh.node_count(), |c, t| {
        let k = weight.value(mat.cell(c));
        if k == c64(0.0) {
            return;
        }
        let local = local_matrices(mesh, c).grad_edge;
        let nodes = mesh.cell_nodes(c);
        let edges = mesh.cell_edges(c);
        for i in 0..12 {
            for j in 0..8 {
                t.push(edges[i].index, nodes[j], k * local[i][j]);
            }
        }
    })
}

/// ∫ weight · w_j · w_i.
pub fn assemble_mass(mesh: &Mesh, mat: &MaterialField, weight: Weight) -> ComplexSparseMatrix {
    assemble_edge_edge(mesh, mat, weight, |l| l.mass)
}

/// ∫ ν · curl w_j · curl w_i.
pub fn assemble_curl_curl(mesh: &Mesh, mat: &MaterialField) -> ComplexSparseMatrix {
    assemble_edge_edge(mesh, mat, Weight::Nu, |l| l.curl_curl)
}

fn assemble_edge_edge(
    mesh: &Mesh,
    mat: &MaterialField,
    weight: Weight,
    pick: fn(&LocalMatrices) -> [[f64; 12]; 12],
) -> ComplexSparseMatrix {
    let n = mesh.edge_count();
    assemble_with(mesh, n, n, |c, t| {
        let k = weight.value(mat.cell(c));
        if k == c64(0.0) {
            return;
        }
        let local = pick(&local_matrices(mesh, c));
        let edges = mesh.cell_edges(c);
        for i in 0..12 {
            for j in 0..12 {
                t.push(edges[i].index, edges[j].index, k * local[i][j]);
            }
        }
    })
}

/// Weak divergence −G_weightᵀ, nodes × edges.
pub fn assemble_weak_divergence(mesh: &Mesh, mat: &MaterialField, weight: Weight) -> ComplexSparseMatrix {
    assemble_grad_coupling(mesh, mat, weight).transpose().scale(c64(-1.0))
}

/// Quadrature order used for source integrals; higher than the bilinear
/// forms so that discrete source compatibility holds to near round-off.
pub const SOURCE_QUADRATURE: usize = 5;

/// (q_s)_i = ∫ ρ_s v_i over all nodes.
pub fn assemble_charge_vector(mesh: &Mesh, rho: &dyn Fn([f64; 3]) -> Complex64) -> Vec<Complex64> {
    let rule = gauss_cube(SOURCE_QUADRATURE);
    let mut q = vec![c64(0.0); mesh.node_count()];
    for c in 0..mesh.cell_count() {
        let h = mesh.cell_size(c);
        let jac = h[0] * h[1] * h[2] / 8.0;
        let nodes = mesh.cell_nodes(c);
        for (xi, w) in &rule {
            let r = rho(mesh.map_to_physical(c, *xi)) * (w * jac);
            let (v, _) = eval_scalar_basis(mesh, c, *xi);
            for i in 0..8 {
                q[nodes[i]] += r * v[i];
            }
        }
    }
    q
}

/// (j_s)_i = ∫ J_s · w_i over all edges.
pub fn assemble_current_vector(mesh: &Mesh, current: &dyn Fn([f64; 3]) -> [Complex64; 3]) -> Vec<Complex64> {
    let rule = gauss_cube(SOURCE_QUADRATURE);
    let mut j = vec![c64(0.0); mesh.edge_count()];
    for c in 0..mesh.cell_count() {
        let h = mesh.cell_size(c);
        let jac = h[0] * h[1] * h[2] / 8.0;
        let edges = mesh.cell_edges(c);
        for (xi, w) in &rule {
            let js = current(mesh.map_to_physical(c, *xi));
            let (v, _) = eval_edge_basis(mesh, c, *xi);
            for i in 0..12 {
                let dot = js[0] * v[i][0] + js[1] * v[i][1] + js[2] * v[i][2];
                j[edges[i].index] += dot * (w * jac);
            }
        }
    }
    j
}

/// The frequency-independent matrices of one scenario, over all entities.
#[derive(Debug, Clone)]
pub struct MatrixBundle {
    pub k_sigma: ComplexSparseMatrix,
    pub k_eps: ComplexSparseMatrix,
    pub g_sigma: ComplexSparseMatrix,
    pub g_eps: ComplexSparseMatrix,
    pub m_sigma: ComplexSparseMatrix,
    pub m_eps: ComplexSparseMatrix,
    pub c_nu: ComplexSparseMatrix,
    pub d_sigma: ComplexSparseMatrix,
    pub d_eps: ComplexSparseMatrix,
}

impl MatrixBundle {
    pub fn assemble(mesh: &Mesh, mat: &MaterialField) -> Self {
        let g_sigma = assemble_grad_coupling(mesh, mat, Weight::Sigma);
        let g_eps = assemble_grad_coupling(mesh, mat, Weight::Epsilon);
        let minus = c64(-1.0);
        Self {
            k_sigma: assemble_grad_grad(mesh, mat, Weight::Sigma),
            k_eps: assemble_grad_grad(mesh, mat, Weight::Epsilon),
            d_sigma: g_sigma.transpose().scale(minus),
            d_eps: g_eps.transpose().scale(minus),
            g_sigma,
            g_eps,
            m_sigma: assemble_mass(mesh, mat, Weight::Sigma),
            m_eps: assemble_mass(mesh, mat, Weight::Epsilon),
            c_nu: assemble_curl_curl(mesh, mat),
        }
    }

    /// K_κ = K_σ + iωK_ε.
    pub fn k_kappa(&self, omega: f64) -> ComplexSparseMatrix {
        self.k_sigma.linear_combination(c64(1.0), &self.k_eps, I * omega)
    }

    pub fn g_kappa(&self, omega: f64) -> ComplexSparseMatrix {
        self.g_sigma.linear_combination(c64(1.0), &self.g_eps, I * omega)
    }

    pub fn m_kappa(&self, omega: f64) -> ComplexSparseMatrix {
        self.m_sigma.linear_combination(c64(1.0), &self.m_eps, I * omega)
    }

    pub fn d_kappa(&self, omega: f64) -> ComplexSparseMatrix {
        self.d_sigma.linear_combination(c64(1.0), &self.d_eps, I * omega)
    }
}

/// Source vectors; they may depend on the frequency (manufactured sources do).
#[derive(Debug, Clone, PartialEq)]
pub struct SourceVectors {
    /// Over all nodes.
    pub q_s: Vec<Complex64>,
    /// Over all edges.
    pub j_s: Vec<Complex64>,
}

impl SourceVectors {
    pub fn zero(mesh: &Mesh) -> Self {
        Self {
            q_s: vec![c64(0.0); mesh.node_count()],
            j_s: vec![c64(0.0); mesh.edge_count()],
        }
    }
}
