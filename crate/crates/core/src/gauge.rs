//! Tree-cotree split of the free edge DOFs.
//!
//! Nodes touching an edge with A×n = 0 are collapsed into one virtual root.
//! The remaining nodes ("gauge nodes") index the rows of the discrete
//! divergence constraint, and a breadth-first spanning tree from the root
//! selects exactly one tree edge per gauge node.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::mesh::Mesh;
use crate::spaces::EdgeSpace;
use crate::sparse::ComplexSparseMatrix;
use crate::{Complex64, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeGraph {
    /// Graph vertex of every mesh node.
    vertex_of_node: Vec<usize>,
    /// Whether vertex 0 is the virtual root.
    has_root: bool,
    vertex_count: usize,
    /// Candidate edges as (free edge DOF, vertex, vertex), ascending by DOF.
    edges: Vec<(usize, usize, usize)>,
    gauge_nodes: Vec<usize>,
}

impl GaugeGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_root(&self) -> bool {
        self.has_root
    }

    pub fn vertex_of_node(&self, node: usize) -> usize {
        self.vertex_of_node[node]
    }

    /// Mesh nodes whose divergence rows form the gauge constraint, ascending.
    /// Without a root the BFS start node is excluded (its row is redundant).
    pub fn gauge_nodes(&self) -> &[usize] {
        &self.gauge_nodes
    }
}

pub fn build_gauge_graph(mesh: &Mesh, edge_space: &EdgeSpace) -> GaugeGraph {
    let mut collapsed = vec![false; mesh.node_count()];
    for &e in edge_space.constrained() {
        for n in mesh.edge_nodes(e) {
            collapsed[n] = true;
        }
    }
    let has_root = collapsed.iter().any(|&c| c);
    let mut vertex_of_node = vec![0; mesh.node_count()];
    let mut gauge_nodes = Vec::new();
    let mut next = usize::from(has_root);
    for n in 0..mesh.node_count() {
        if !collapsed[n] {
            vertex_of_node[n] = next;
            next += 1;
            if has_root || n != 0 {
                gauge_nodes.push(n);
            }
        }
    }
    let edges = edge_space
        .free()
        .iter()
        .enumerate()
        .map(|(dof, &e)| {
            let [a, b] = mesh.edge_nodes(e);
            (dof, vertex_of_node[a], vertex_of_node[b])
        })
        .collect();
    GaugeGraph {
        vertex_of_node,
        has_root,
        vertex_count: next,
        edges,
        gauge_nodes,
    }
}

/// Tree (T) and cotree (R) DOFs plus the [R|T] permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeCotreePartition {
    tree: Vec<usize>,
    cotree: Vec<usize>,
    /// `perm[new] = old`.
    perm: Vec<usize>,
    inverse: Vec<usize>,
}

/// Breadth-first spanning tree from vertex 0, visiting incident edges in
/// ascending DOF order. Self-loops at the root are always cotree edges.
pub fn spanning_tree(graph: &GaugeGraph) -> Result<TreeCotreePartition> {
    let n = graph.vertex_count;
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &(dof, a, b) in &graph.edges {
        if a != b {
            adj[a].push((dof, b));
            adj[b].push((dof, a));
        }
    }
    let mut in_tree = vec![false; graph.edges.len()];
    let mut seen = vec![false; n];
    let mut reached = 0;
    if n > 0 {
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        reached = 1;
        while let Some(v) = queue.pop_front() {
            for &(dof, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    in_tree[dof] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    if reached != n {
        return Err(Error::DisconnectedGraph {
            reached,
            vertices: n,
        });
    }
    let (tree, cotree): (Vec<usize>, Vec<usize>) = (0..graph.edges.len()).partition(|&d| in_tree[d]);
    Ok(TreeCotreePartition::new(tree, cotree))
}

impl TreeCotreePartition {
    fn new(tree: Vec<usize>, cotree: Vec<usize>) -> Self {
        let perm: Vec<usize> = cotree.iter().chain(&tree).copied().collect();
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        Self {
            tree,
            cotree,
            perm,
            inverse,
        }
    }

    /// Tree DOFs, ascending.
    pub fn tree(&self) -> &[usize] {
        &self.tree
    }

    /// Cotree DOFs, ascending.
    pub fn cotree(&self) -> &[usize] {
        &self.cotree
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// `perm[new] = old` for the [R|T] ordering.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn reorder_vector<T: Copy>(&self, x: &[T]) -> Result<Vec<T>> {
        self.check(x.len())?;
        Ok(self.perm.iter().map(|&old| x[old]).collect())
    }

    pub fn restore_vector<T: Copy>(&self, y: &[T]) -> Result<Vec<T>> {
        self.check(y.len())?;
        Ok(self.inverse.iter().map(|&new| y[new]).collect())
    }

    /// Symmetric reordering `A[perm, perm]`.
    pub fn reorder_matrix(&self, a: &ComplexSparseMatrix) -> Result<ComplexSparseMatrix> {
        self.check(a.nrows())?;
        self.check(a.ncols())?;
        Ok(a.submatrix(&self.perm, &self.perm))
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == self.perm.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.perm.len(),
                found: n,
            })
        }
    }

    /// Tree edges as "nodeA nodeB edgeId" lines (mesh numbering).
    pub fn tree_edge_list(&self, mesh: &Mesh, edge_space: &EdgeSpace) -> String {
        let mut out = String::new();
        for &dof in &self.tree {
            let e = edge_space.free()[dof];
            let [a, b] = mesh.edge_nodes(e);
            let _ = writeln!(out, "{a} {b} {e}");
        }
        out
    }
}

/// Convenience for callers that only need a permuted copy of complex data.
pub fn reorder_system(
    partition: &TreeCotreePartition,
    a: &ComplexSparseMatrix,
    b: &[Complex64],
) -> Result<(ComplexSparseMatrix, Vec<Complex64>)> {
    Ok((partition.reorder_matrix(a)?, partition.reorder_vector(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble_curl_curl, Material, MaterialField};
    use crate::mesh::{boundary_entities, build_box_mesh, AxisBox};
    use crate::solve::dense::dense_rank;
    use crate::spaces::{build_edge_space, DirichletSpec};
    use rand::{Rng, SeedableRng};

    fn setup(n: usize, spec: &DirichletSpec) -> (Mesh, EdgeSpace) {
        let mesh = build_box_mesh([[0.0, 1.0]; 3], [n; 3]).unwrap();
        let tags = boundary_entities(&mesh);
        let e = build_edge_space(&mesh, &tags, spec);
        (mesh, e)
    }

    #[test]
    fn graph_shapes() {
        let (mesh, e) = setup(2, &DirichletSpec::homogeneous_everywhere());
        let g = build_gauge_graph(&mesh, &e);
        assert!(g.has_root());
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.gauge_nodes(), &[13]);

        let (mesh, e) = setup(1, &DirichletSpec::none());
        let g = build_gauge_graph(&mesh, &e);
        assert!(!g.has_root());
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.gauge_nodes().len(), 7);
    }

    #[test]
    fn tree_sizes() {
        let (mesh, e) = setup(1, &DirichletSpec::none());
        let t = spanning_tree(&build_gauge_graph(&mesh, &e)).unwrap();
        assert_eq!((t.tree().len(), t.cotree().len()), (7, 5));
        let (mesh, e) = setup(2, &DirichletSpec::homogeneous_everywhere());
        let t = spanning_tree(&build_gauge_graph(&mesh, &e)).unwrap();
        assert_eq!((t.tree().len(), t.cotree().len()), (1, 5));
        let (mesh, e) = setup(3, &DirichletSpec::homogeneous_everywhere());
        let t = spanning_tree(&build_gauge_graph(&mesh, &e)).unwrap();
        assert_eq!(t.tree().len(), 8);
        assert_eq!(t, spanning_tree(&build_gauge_graph(&mesh, &e)).unwrap());
    }

    #[test]
    fn tree_is_acyclic_and_spanning() {
        let (mesh, e) = setup(3, &DirichletSpec::homogeneous_everywhere());
        let g = build_gauge_graph(&mesh, &e);
        let t = spanning_tree(&g).unwrap();
        // union-find: no tree edge closes a cycle
        let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &dof in t.tree() {
            let [a, b] = mesh.edge_nodes(e.free()[dof]);
            let (ra, rb) = (find(&mut parent, g.vertex_of_node(a)), find(&mut parent, g.vertex_of_node(b)));
            assert_ne!(ra, rb);
            parent[ra] = rb;
        }
        assert_eq!(t.tree().len(), g.vertex_count() - 1);
        let dump = t.tree_edge_list(&mesh, &e);
        assert_eq!(dump.lines().count(), 8);
    }

    #[test]
    fn region_layout_does_not_change_the_tree() {
        let (mesh, e) = setup(3, &DirichletSpec::homogeneous_everywhere());
        let t = spanning_tree(&build_gauge_graph(&mesh, &e)).unwrap();
        // the graph only sees topology; materials never enter
        let _ = MaterialField::uniform(&mesh, Material::relative(1.0, 1.0, 1.0)).unwrap();
        let t2 = spanning_tree(&build_gauge_graph(&mesh, &e)).unwrap();
        assert_eq!(t, t2);
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        // two interior nodes, no free edges between them or to the root
        let graph = GaugeGraph {
            vertex_of_node: vec![],
            has_root: true,
            vertex_count: 3,
            edges: vec![(0, 0, 1)],
            gauge_nodes: vec![],
        };
        assert!(matches!(
            spanning_tree(&graph),
            Err(Error::DisconnectedGraph { reached: 2, vertices: 3 })
        ));
    }

    #[test]
    fn tree_size_equals_curl_kernel() {
        let cases = [
            (1, DirichletSpec::none()),
            (2, DirichletSpec::none()),
            (2, DirichletSpec::homogeneous_everywhere()),
            (3, DirichletSpec::homogeneous_everywhere()),
        ];
        for (n, spec) in cases {
            let (mesh, e) = setup(n, &spec);
            let mat = MaterialField::from_boxes(
                &mesh,
                &[
                    (mesh.domain(), Material::relative(0.0, 1.0, 1.0)),
                    (AxisBox::new([0.3, 0.3, 0.0], [0.7, 0.7, 1.0]), Material::relative(5.0, 5.0, 1.0)),
                ],
            )
            .unwrap();
            let c = assemble_curl_curl(&mesh, &mat).submatrix(e.free(), e.free());
            let t = spanning_tree(&build_gauge_graph(&mesh, &e)).unwrap();
            let kernel = e.n_free() - dense_rank(&c.to_dense());
            assert_eq!(kernel, t.tree().len(), "mesh {n}");
            let crr = c.submatrix(t.cotree(), t.cotree());
            assert_eq!(dense_rank(&crr.to_dense()), t.cotree().len(), "mesh {n}");
        }
    }

    #[test]
    fn permutation_roundtrip() {
        let (mesh, e) = setup(3, &DirichletSpec::homogeneous_everywhere());
        let t = spanning_tree(&build_gauge_graph(&mesh, &e)).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let x: Vec<f64> = (0..t.len()).map(|_| rng.random()).collect();
        assert_eq!(t.restore_vector(&t.reorder_vector(&x).unwrap()).unwrap(), x);
        assert!(t.reorder_vector(&x[1..]).is_err());
        let y = t.reorder_vector(&x).unwrap();
        assert_eq!(&y[t.cotree().len()..], t.tree().iter().map(|&d| x[d]).collect::<Vec<_>>().as_slice());
    }
}
