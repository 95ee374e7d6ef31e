//! Pointwise field recovery and error norms.

use crate::physics::manufactured::ManufacturedCase;
use crate::physics::scenario::Problem;
use crate::physics::two_step::Solution;
use crate::quadrature::{gauss_cube, gauss_legendre};
use crate::spaces::{eval_edge_basis, eval_scalar_basis};
use crate::mesh::Mesh;
use crate::{c64, Complex64, Error, Result, I};

pub type CVec3 = [Complex64; 3];

/// All field quantities at one point.
///
/// E = −grad φ − iωA splits every constitutive product into an
/// electroquasistatic part (subscript e, from φ) and a full-Maxwell
/// correction (subscript m, from A).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub phi: Complex64,
    pub a: CVec3,
    /// B = curl A.
    pub b: CVec3,
    pub e: CVec3,
    /// −ε grad φ.
    pub d_e: CVec3,
    /// −iωεA.
    pub d_m: CVec3,
    /// Displacement attached to the source charge.
    pub d_s: CVec3,
    pub d: CVec3,
    /// −σ grad φ.
    pub j_e: CVec3,
    /// −iωσA.
    pub j_m: CVec3,
    pub j_s: CVec3,
    pub j: CVec3,
}

/// Field evaluator for one solution.
pub struct DerivedFields<'a> {
    problem: &'a Problem,
    u_full: Vec<Complex64>,
    a_full: Vec<Complex64>,
    omega: f64,
}

impl<'a> DerivedFields<'a> {
    pub fn new(problem: &'a Problem, solution: &Solution) -> Result<Self> {
        if solution.u.len() != problem.scalar.n_free() || solution.a.len() != problem.edge.n_free() {
            return Err(Error::DimensionMismatch {
                expected: problem.edge.n_free(),
                found: solution.a.len(),
            });
        }
        Ok(Self {
            problem,
            u_full: solution.u_full.clone(),
            a_full: solution.a_full(problem),
            omega: solution.frequency.omega,
        })
    }

    pub fn evaluate(&self, p: [f64; 3]) -> Result<FieldSample> {
        let mesh = &self.problem.mesh;
        let (cell, xi) = mesh.locate(p).ok_or(Error::PointOutsideDomain(p))?;
        let (phi, grad_phi) = interpolate_scalar(mesh, cell, xi, &self.u_full);
        let (a, b) = interpolate_edge(mesh, cell, xi, &self.a_full);
        let m = self.problem.materials.cell(cell);
        let iw = I * self.omega;
        let add = |x: CVec3, y: CVec3, z: CVec3| [0, 1, 2].map(|k| x[k] + y[k] + z[k]);
        let d_e = grad_phi.map(|g| -m.epsilon * g);
        let d_m = a.map(|v| -iw * m.epsilon * v);
        let j_e = grad_phi.map(|g| -m.sigma * g);
        let j_m = a.map(|v| -iw * m.sigma * v);
        let d_s = self.problem.displacement_source_at(p, self.omega)?;
        let j_s = self.problem.current_source_at(p, self.omega);
        Ok(FieldSample {
            phi,
            a,
            b,
            e: [0, 1, 2].map(|k| -grad_phi[k] - iw * a[k]),
            d: add(d_e, d_m, d_s),
            j: add(j_e, j_m, j_s),
            d_e,
            d_m,
            d_s,
            j_e,
            j_m,
            j_s,
        })
    }
}

/// Value and gradient of a nodal field inside `cell`.
pub fn interpolate_scalar(mesh: &Mesh, cell: usize, xi: [f64; 3], u_full: &[Complex64]) -> (Complex64, CVec3) {
    let (v, g) = eval_scalar_basis(mesh, cell, xi);
    let mut value = c64(0.0);
    let mut grad = [c64(0.0); 3];
    for (l, &n) in mesh.cell_nodes(cell).iter().enumerate() {
        value += u_full[n] * v[l];
        for d in 0..3 {
            grad[d] += u_full[n] * g[l][d];
        }
    }
    (value, grad)
}

/// Value and curl of an edge field inside `cell`.
pub fn interpolate_edge(mesh: &Mesh, cell: usize, xi: [f64; 3], a_full: &[Complex64]) -> (CVec3, CVec3) {
    let (w, c) = eval_edge_basis(mesh, cell, xi);
    let mut value = [c64(0.0); 3];
    let mut curl = [c64(0.0); 3];
    for (l, se) in mesh.cell_edges(cell).iter().enumerate() {
        let coef = a_full[se.index];
        for d in 0..3 {
            value[d] += coef * w[l][d];
            curl[d] += coef * c[l][d];
        }
    }
    (value, curl)
}

/// Edge circulations ∫ f·t dl of a vector field along every mesh edge
/// (5-point Gauss on each edge).
pub fn edge_interpolant(mesh: &Mesh, f: &dyn Fn([f64; 3]) -> [f64; 3]) -> Vec<Complex64> {
    let rule = gauss_legendre(5);
    mesh.edges()
        .iter()
        .enumerate()
        .map(|(e, &[a, b])| {
            let axis = mesh.edge_axis(e);
            let (pa, pb) = (mesh.node(a), mesh.node(b));
            let len = pb[axis] - pa[axis];
            let s: f64 = rule
                .iter()
                .map(|&(t, w)| {
                    let p = [0, 1, 2].map(|d| 0.5 * (pa[d] + pb[d]) + 0.5 * t * (pb[d] - pa[d]));
                    w * f(p)[axis]
                })
                .sum();
            c64(0.5 * len * s)
        })
        .collect()
}

/// H(curl) distance between an edge field (all edges) and the manufactured
/// vector potential, 3³ Gauss points per cell.
pub fn hcurl_error_full(mesh: &Mesh, a_full: &[Complex64], case: &ManufacturedCase) -> f64 {
    let rule = gauss_cube(3);
    let mut sum = 0.0;
    for c in 0..mesh.cell_count() {
        let h = mesh.cell_size(c);
        let jac = h[0] * h[1] * h[2] / 8.0;
        for (xi, w) in &rule {
            let p = mesh.map_to_physical(c, *xi);
            let (a, curl) = interpolate_edge(mesh, c, *xi, a_full);
            let ea = case.vector_potential(p);
            let ec = case.curl_vector_potential(p);
            let mut local = 0.0;
            for d in 0..3 {
                local += (a[d] - ea[d]).norm_sqr() + (curl[d] - ec[d]).norm_sqr();
            }
            sum += w * jac * local;
        }
    }
    sum.sqrt()
}

/// H(curl) error of a solution against its manufactured reference.
pub fn hcurl_error(problem: &Problem, solution: &Solution, case: &ManufacturedCase) -> f64 {
    hcurl_error_full(&problem.mesh, &solution.a_full(problem), case)
}

/// L² distance between the recovered B and curl A of the reference.
pub fn flux_density_error(problem: &Problem, solution: &Solution, case: &ManufacturedCase) -> f64 {
    let mesh = &problem.mesh;
    let a_full = solution.a_full(problem);
    let mut sum = 0.0;
    for c in 0..mesh.cell_count() {
        let h = mesh.cell_size(c);
        let jac = h[0] * h[1] * h[2] / 8.0;
        for (xi, w) in gauss_cube(3) {
            let (_, curl) = interpolate_edge(mesh, c, xi, &a_full);
            let ec = case.curl_vector_potential(mesh.map_to_physical(c, xi));
            sum += w * jac * (0..3).map(|d| (curl[d] - ec[d]).norm_sqr()).sum::<f64>();
        }
    }
    sum.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::scenario::Scenario;
    use crate::physics::two_step::{run_two_step, Method};
    use crate::system::FrequencyPoint;
    use crate::mesh::build_box_mesh;
    use crate::physics::manufactured::DOMAIN;

    #[test]
    fn zero_field_error_is_the_reference_norm() {
        let case = ManufacturedCase::vacuum(0.0);
        let mesh = build_box_mesh(ManufacturedCase::extents(), [2, 2, 2]).unwrap();
        let err = hcurl_error_full(&mesh, &vec![c64(0.0); mesh.edge_count()], &case);
        // independent 6-point product rule on the whole cube
        let rule = gauss_legendre(6);
        let half = 0.5 * (DOMAIN[1] - DOMAIN[0]);
        let mid = 0.5 * (DOMAIN[1] + DOMAIN[0]);
        let mut norm2 = 0.0;
        for &(x, wx) in &rule {
            for &(y, wy) in &rule {
                for &(z, wz) in &rule {
                    let p = [mid + half * x, mid + half * y, mid + half * z];
                    let a = case.vector_potential(p);
                    let c = case.curl_vector_potential(p);
                    let v: f64 = (0..3).map(|d| a[d] * a[d] + c[d] * c[d]).sum();
                    norm2 += wx * wy * wz * half.powi(3) * v;
                }
            }
        }
        // ∫A² = π³/8 · (1+4+1), ∫|curl A|² = π³/8 · 18, exact for the product rule too
        let exact = (std::f64::consts::PI.powi(3) / 8.0 * 24.0).sqrt();
        assert!((norm2.sqrt() - exact).abs() < 1e-6 * exact);
        assert!((err - exact).abs() < 2e-2 * exact);
    }

    #[test]
    fn interpolation_error_is_first_order() {
        let case = ManufacturedCase::vacuum(0.0);
        let errs: Vec<f64> = [4, 8, 16]
            .iter()
            .map(|&n| {
                let mesh = build_box_mesh(ManufacturedCase::extents(), [n; 3]).unwrap();
                let a = edge_interpolant(&mesh, &|p| case.vector_potential(p));
                hcurl_error_full(&mesh, &a, &case)
            })
            .collect();
        for w in errs.windows(2) {
            let rate = (w[0] / w[1]).log2();
            assert!(rate > 0.9, "rate {rate}");
        }
    }

    #[test]
    fn decompositions_add_up_and_vanish_at_dc() {
        let p = Problem::build(&Scenario::academic([3, 3, 3])).unwrap();
        for (f, method) in [(0.0, Method::TreeCotree), (1e3, Method::Lagrange)] {
            let sol = run_two_step(&p, FrequencyPoint::new(f).unwrap(), method).unwrap();
            let fields = DerivedFields::new(&p, &sol).unwrap();
            for pt in [[0.11, 0.11, 0.05], [0.03, 0.2, 0.11], [0.15, 0.02, 0.2]] {
                let s = fields.evaluate(pt).unwrap();
                for k in 0..3 {
                    assert_eq!(s.d[k], s.d_e[k] + s.d_m[k] + s.d_s[k]);
                    assert_eq!(s.j[k], s.j_e[k] + s.j_m[k] + s.j_s[k]);
                    if f == 0.0 {
                        assert_eq!(s.d_m[k], c64(0.0));
                        assert_eq!(s.j_m[k], c64(0.0));
                    }
                }
                let (cell, _) = p.mesh.locate(pt).unwrap();
                if p.materials.cell(cell).sigma == 0.0 {
                    assert!(s.j_e.iter().chain(&s.j_m).all(|v| *v == c64(0.0)));
                }
            }
            assert!(matches!(fields.evaluate([1.0, 0.0, 0.0]), Err(Error::PointOutsideDomain(_))));
        }
    }

    #[test]
    fn recovered_flux_density_converges() {
        let errs: Vec<f64> = [2, 4]
            .iter()
            .map(|&n| {
                let p = Problem::build(&Scenario::manufactured(n, 0.0)).unwrap();
                let sol = run_two_step(&p, FrequencyPoint::new(1e6).unwrap(), Method::TreeCotree).unwrap();
                flux_density_error(&p, &sol, p.scenario.manufactured_case().unwrap())
            })
            .collect();
        assert!(errs[1] < errs[0]);
    }
}
