//! Nodal (H¹) and edge (H(curl)) spaces of lowest order, Dirichlet
//! bookkeeping and the discrete gradient between them.

use crate::mesh::{
    local_edge_layout, transverse_axes, BoundaryLabel, BoundaryTags, Mesh, LOCAL_NODE_OFFSETS,
};
use crate::sparse::{ComplexSparseMatrix, TripletBuilder};
use crate::{c64, Complex64};

/// Dirichlet data: prescribed potential values per boundary label and the
/// labels on which the tangential vector potential vanishes.
///
/// Where scalar labels share nodes, the later entry wins.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DirichletSpec {
    pub scalar: Vec<(BoundaryLabel, Complex64)>,
    pub edge: Vec<BoundaryLabel>,
}

impl DirichletSpec {
    pub fn none() -> Self {
        Self::default()
    }

    /// φ = 0 and A×n = 0 on the whole boundary.
    pub fn homogeneous_everywhere() -> Self {
        Self {
            scalar: BoundaryLabel::ALL.iter().map(|&l| (l, c64(0.0))).collect(),
            edge: BoundaryLabel::ALL.to_vec(),
        }
    }
}

/// Free/constrained split of one family of entities.
#[derive(Debug, Clone, PartialEq)]
struct DofMap {
    free: Vec<usize>,
    constrained: Vec<usize>,
    dof: Vec<Option<usize>>,
}

impl DofMap {
    fn new(count: usize, is_constrained: &[bool]) -> Self {
        let mut free = Vec::new();
        let mut constrained = Vec::new();
        let mut dof = vec![None; count];
        for i in 0..count {
            if is_constrained[i] {
                constrained.push(i);
            } else {
                dof[i] = Some(free.len());
                free.push(i);
            }
        }
        Self {
            free,
            constrained,
            dof,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSpace {
    map: DofMap,
    prescribed: Vec<Complex64>,
}

impl ScalarSpace {
    pub fn n_free(&self) -> usize {
        self.map.free.len()
    }

    pub fn n_total(&self) -> usize {
        self.map.dof.len()
    }

    /// Free nodes in ascending order; position = DOF index.
    pub fn free(&self) -> &[usize] {
        &self.map.free
    }

    pub fn constrained(&self) -> &[usize] {
        &self.map.constrained
    }

    pub fn dof(&self, node: usize) -> Option<usize> {
        self.map.dof[node]
    }

    pub fn is_free(&self, node: usize) -> bool {
        self.map.dof[node].is_some()
    }

    /// Prescribed value of a node (zero for free nodes).
    pub fn prescribed(&self, node: usize) -> Complex64 {
        self.prescribed[node]
    }

    /// Values on the constrained nodes, in the order of [`Self::constrained`].
    pub fn constrained_values(&self) -> Vec<Complex64> {
        self.map.constrained.iter().map(|&n| self.prescribed[n]).collect()
    }

    /// Full nodal vector from free DOFs plus prescribed values.
    pub fn expand(&self, u: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(u.len(), self.n_free());
        let mut full = self.prescribed.clone();
        for (k, &n) in self.map.free.iter().enumerate() {
            full[n] = u[k];
        }
        full
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpace {
    map: DofMap,
}

impl EdgeSpace {
    pub fn n_free(&self) -> usize {
        self.map.free.len()
    }

    pub fn n_total(&self) -> usize {
        self.map.dof.len()
    }

    pub fn free(&self) -> &[usize] {
        &self.map.free
    }

    pub fn constrained(&self) -> &[usize] {
        &self.map.constrained
    }

    pub fn dof(&self, edge: usize) -> Option<usize> {
        self.map.dof[edge]
    }

    pub fn is_free(&self, edge: usize) -> bool {
        self.map.dof[edge].is_some()
    }

    /// Full edge vector; constrained edges carry zero.
    pub fn expand(&self, a: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(a.len(), self.n_free());
        let mut full = vec![c64(0.0); self.n_total()];
        for (k, &e) in self.map.free.iter().enumerate() {
            full[e] = a[k];
        }
        full
    }

    pub fn restrict(&self, full: &[Complex64]) -> Vec<Complex64> {
        self.map.free.iter().map(|&e| full[e]).collect()
    }
}

pub fn build_scalar_space(mesh: &Mesh, tags: &BoundaryTags, spec: &DirichletSpec) -> ScalarSpace {
    let n = mesh.node_count();
    let mut constrained = vec![false; n];
    let mut prescribed = vec![c64(0.0); n];
    for &(label, value) in &spec.scalar {
        for &node in tags.nodes(label) {
            constrained[node] = true;
            prescribed[node] = value;
        }
    }
    ScalarSpace {
        map: DofMap::new(n, &constrained),
        prescribed,
    }
}

pub fn build_edge_space(mesh: &Mesh, tags: &BoundaryTags, spec: &DirichletSpec) -> EdgeSpace {
    let n = mesh.edge_count();
    let mut constrained = vec![false; n];
    for &label in &spec.edge {
        for &e in tags.edges(label) {
            constrained[e] = true;
        }
    }
    EdgeSpace {
        map: DofMap::new(n, &constrained),
    }
}

/// Signed node-edge incidence over all entities (edges × nodes): −1 at the
/// lower node, +1 at the upper node of every edge.
pub fn full_gradient_incidence(mesh: &Mesh) -> ComplexSparseMatrix {
    let mut t = TripletBuilder::with_capacity(mesh.edge_count(), mesh.node_count(), 2 * mesh.edge_count());
    for (e, &[a, b]) in mesh.edges().iter().enumerate() {
        t.push(e, a, c64(-1.0));
        t.push(e, b, c64(1.0));
    }
    t.build()
}

/// Incidence restricted to free edges × free nodes.
pub fn gradient_incidence(mesh: &Mesh, scalar: &ScalarSpace, edge: &EdgeSpace) -> ComplexSparseMatrix {
    full_gradient_incidence(mesh).submatrix(edge.free(), scalar.free())
}

fn lagrange(o: usize, t: f64) -> f64 {
    if o == 0 {
        0.5 * (1.0 - t)
    } else {
        0.5 * (1.0 + t)
    }
}

fn lagrange_deriv(o: usize) -> f64 {
    if o == 0 {
        -0.5
    } else {
        0.5
    }
}

/// Trilinear shape functions of `cell` at reference point `xi` ∈ [−1,1]³:
/// values and physical gradients, in local node order.
pub fn eval_scalar_basis(mesh: &Mesh, cell: usize, xi: [f64; 3]) -> ([f64; 8], [[f64; 3]; 8]) {
    let h = mesh.cell_size(cell);
    let mut val = [0.0; 8];
    let mut grad = [[0.0; 3]; 8];
    for (n, off) in LOCAL_NODE_OFFSETS.iter().enumerate() {
        let l = [0, 1, 2].map(|d| lagrange(off[d], xi[d]));
        val[n] = l[0] * l[1] * l[2];
        for d in 0..3 {
            let mut g = 2.0 / h[d] * lagrange_deriv(off[d]);
            for e in 0..3 {
                if e != d {
                    g *= l[e];
                }
            }
            grad[n][d] = g;
        }
    }
    (val, grad)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Lowest-order edge functions of `cell` at `xi`: values and curls in
/// physical coordinates, oriented along the global edge direction.
pub fn eval_edge_basis(mesh: &Mesh, cell: usize, xi: [f64; 3]) -> ([[f64; 3]; 12], [[f64; 3]; 12]) {
    let h = mesh.cell_size(cell);
    let signs = mesh.cell_edges(cell);
    let mut val = [[0.0; 3]; 12];
    let mut curl = [[0.0; 3]; 12];
    for e in 0..12 {
        let (axis, off) = local_edge_layout(e);
        let [t0, t1] = transverse_axes(axis);
        let s = f64::from(signs[e].sign);
        let l0 = lagrange(off[0], xi[t0]);
        let l1 = lagrange(off[1], xi[t1]);
        let scale = s / h[axis];
        val[e][axis] = scale * l0 * l1;
        // curl(f e_a) = grad f × e_a
        let mut grad_f = [0.0; 3];
        grad_f[t0] = scale * 2.0 / h[t0] * lagrange_deriv(off[0]) * l1;
        grad_f[t1] = scale * 2.0 / h[t1] * l0 * lagrange_deriv(off[1]);
        let mut unit = [0.0; 3];
        unit[axis] = 1.0;
        curl[e] = cross(grad_f, unit);
    }
    (val, curl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{boundary_entities, build_box_mesh};
    use crate::quadrature::gauss_legendre;
    use rand::{Rng, SeedableRng};

    fn cube(n: usize) -> Mesh {
        build_box_mesh([[0.0, 1.0]; 3], [n; 3]).unwrap()
    }

    fn spaces(mesh: &Mesh, spec: &DirichletSpec) -> (ScalarSpace, EdgeSpace) {
        let tags = boundary_entities(mesh);
        (build_scalar_space(mesh, &tags, spec), build_edge_space(mesh, &tags, spec))
    }

    #[test]
    fn free_dof_counts() {
        let (s, e) = spaces(&cube(2), &DirichletSpec::homogeneous_everywhere());
        assert_eq!(s.n_free(), 1);
        assert_eq!(e.n_free(), 6);
        let (s, e) = spaces(&cube(1), &DirichletSpec::none());
        assert_eq!(s.n_free(), 8);
        assert_eq!(e.n_free(), 12);
        let (_, e) = spaces(&cube(1), &DirichletSpec::homogeneous_everywhere());
        assert_eq!(e.n_free(), 0);
        let (_, e) = spaces(&cube(2), &DirichletSpec::none());
        assert_eq!(e.n_free(), 54);
        let drive = DirichletSpec {
            scalar: vec![(BoundaryLabel::Zmin, c64(0.0)), (BoundaryLabel::Zmax, c64(1.0))],
            edge: vec![],
        };
        let (s, _) = spaces(&cube(2), &drive);
        assert_eq!(s.n_free(), 9);
        let full = s.expand(&vec![c64(0.5); 9]);
        let top = cube(2).node_index(1, 1, 2);
        assert_eq!(full[top], c64(1.0));
    }

    #[test]
    fn free_edges_match_interior_count() {
        // brute force: an edge is free iff it does not lie in a boundary plane
        let mesh = cube(3);
        let (_, e) = spaces(&mesh, &DirichletSpec::homogeneous_everywhere());
        let on_plane = |p: [f64; 3], q: [f64; 3]| {
            (0..3).any(|d| (p[d] == 0.0 && q[d] == 0.0) || (p[d] == 1.0 && q[d] == 1.0))
        };
        let count = mesh
            .edges()
            .iter()
            .filter(|[a, b]| !on_plane(mesh.node(*a), mesh.node(*b)))
            .count();
        assert_eq!(e.n_free(), count);
    }

    #[test]
    fn random_dirichlet_bookkeeping() {
        let mesh = cube(2);
        let tags = boundary_entities(&mesh);
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let mut spec = DirichletSpec::none();
            for l in BoundaryLabel::ALL {
                if rng.random_bool(0.5) {
                    spec.scalar.push((l, c64(rng.random())));
                }
                if rng.random_bool(0.5) {
                    spec.edge.push(l);
                }
            }
            let s = build_scalar_space(&mesh, &tags, &spec);
            let e = build_edge_space(&mesh, &tags, &spec);
            assert_eq!(s.free().len() + s.constrained().len(), mesh.node_count());
            assert_eq!(e.free().len() + e.constrained().len(), mesh.edge_count());
            assert!(s.free().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn scalar_basis_partition_and_lagrange_property() {
        let mesh = build_box_mesh([[0.0, 2.0], [1.0, 1.5], [-1.0, 0.0]], [2, 3, 1]).unwrap();
        let (v, g) = eval_scalar_basis(&mesh, 3, [0.0; 3]);
        assert!(v.iter().all(|x| (x - 0.125).abs() < 1e-15));
        let gsum: [f64; 3] = [0, 1, 2].map(|d| g.iter().map(|gi| gi[d]).sum());
        assert!(gsum.iter().all(|x| x.abs() < 1e-12));
        for (n, off) in LOCAL_NODE_OFFSETS.iter().enumerate() {
            let xi = off.map(|o| if o == 0 { -1.0 } else { 1.0 });
            let (v, _) = eval_scalar_basis(&mesh, 3, xi);
            for (m, x) in v.iter().enumerate() {
                assert_eq!(*x, if m == n { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn scalar_gradient_matches_finite_differences() {
        let mesh = build_box_mesh([[0.0, 2.0], [1.0, 1.5], [-1.0, 0.0]], [2, 3, 1]).unwrap();
        let c = 4;
        let h = mesh.cell_size(c);
        let xi = [0.3, -0.2, 0.7];
        let (_, g) = eval_scalar_basis(&mesh, c, xi);
        let step = 1e-6;
        for d in 0..3 {
            let mut xp = xi;
            let mut xm = xi;
            // physical step `step` is a reference step 2·step/h
            xp[d] += 2.0 * step / h[d];
            xm[d] -= 2.0 * step / h[d];
            let (vp, _) = eval_scalar_basis(&mesh, c, xp);
            let (vm, _) = eval_scalar_basis(&mesh, c, xm);
            for n in 0..8 {
                let fd = (vp[n] - vm[n]) / (2.0 * step);
                assert!((fd - g[n][d]).abs() <= 1e-6 * g[n][d].abs().max(1.0));
            }
        }
    }

    #[test]
    fn edge_moments_are_dual() {
        let mesh = cube(1);
        let line = gauss_legendre(5);
        for j in 0..12 {
            let (axis, off) = local_edge_layout(j);
            let [t0, t1] = transverse_axes(axis);
            for k in 0..12 {
                let mut integral = 0.0;
                for &(t, w) in &line {
                    let mut xi = [0.0; 3];
                    xi[axis] = t;
                    xi[t0] = if off[0] == 0 { -1.0 } else { 1.0 };
                    xi[t1] = if off[1] == 0 { -1.0 } else { 1.0 };
                    let (val, _) = eval_edge_basis(&mesh, 0, xi);
                    // dl = (h/2) dt, h = 1; tangent along +axis, global orientation sign applied
                    integral += w * 0.5 * val[k][axis] * f64::from(mesh.cell_edges(0)[j].sign);
                }
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!((integral - expect).abs() < 1e-14, "({j},{k}) -> {integral}");
            }
        }
    }

    #[test]
    fn edge_curl_matches_finite_differences() {
        let mesh = build_box_mesh([[0.0, 1.0], [0.0, 2.0], [0.0, 0.5]], [2, 1, 2]).unwrap();
        let c = 3;
        let h = mesh.cell_size(c);
        let xi = [-0.4, 0.1, 0.6];
        let (_, curl) = eval_edge_basis(&mesh, c, xi);
        let step = 1e-5;
        let deriv = |d: usize, comp: usize, k: usize| {
            let mut xp = xi;
            let mut xm = xi;
            xp[d] += 2.0 * step / h[d];
            xm[d] -= 2.0 * step / h[d];
            (eval_edge_basis(&mesh, c, xp).0[k][comp] - eval_edge_basis(&mesh, c, xm).0[k][comp]) / (2.0 * step)
        };
        for k in 0..12 {
            let fd = [
                deriv(1, 2, k) - deriv(2, 1, k),
                deriv(2, 0, k) - deriv(0, 2, k),
                deriv(0, 1, k) - deriv(1, 0, k),
            ];
            for d in 0..3 {
                assert!((fd[d] - curl[k][d]).abs() < 1e-5 * curl[k][d].abs().max(1.0));
            }
        }
    }

    #[test]
    fn gradients_are_reproduced_by_incidence() {
        let mesh = cube(2);
        let p = full_gradient_incidence(&mesh);
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for node in 0..mesh.node_count() {
            let mut unit = vec![c64(0.0); mesh.node_count()];
            unit[node] = c64(1.0);
            let coeff = p.mul_vec(&unit);
            for c in 0..mesh.cell_count() {
                let local = mesh.cell_nodes(c).iter().position(|&n| n == node);
                for _ in 0..10 {
                    let xi = [0; 3].map(|_: i32| rng.random_range(-1.0..1.0));
                    let (_, g) = eval_scalar_basis(&mesh, c, xi);
                    let (w, _) = eval_edge_basis(&mesh, c, xi);
                    let mut interp = [0.0; 3];
                    for (k, se) in mesh.cell_edges(c).iter().enumerate() {
                        for d in 0..3 {
                            interp[d] += coeff[se.index].re * w[k][d];
                        }
                    }
                    let exact = local.map_or([0.0; 3], |l| g[l]);
                    for d in 0..3 {
                        assert!((interp[d] - exact[d]).abs() < 1e-12);
                    }
                }
            }
        }
    }
}
