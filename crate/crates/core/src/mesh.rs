//! Structured hexahedral meshes of axis-aligned boxes.
//!
//! Entities are numbered lexicographically with x running fastest. Edges are
//! grouped by axis (all x-edges, then y-edges, then z-edges) and always stored
//! with the lower node index first. Cells use the VTK hexahedron node order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Offsets of the eight cell nodes in VTK hexahedron order.
pub const LOCAL_NODE_OFFSETS: [[usize; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [1, 1, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [1, 1, 1],
    [0, 1, 1],
];

/// Local edge `e` runs along axis `e / 4`; `(e % 4) % 2` and `(e % 4) / 2` are the
/// offsets along the two remaining axes in increasing axis order.
pub fn local_edge_layout(e: usize) -> (usize, [usize; 2]) {
    let axis = e / 4;
    let t = e % 4;
    (axis, [t % 2, t / 2])
}

/// The two remaining axes of `axis`, in increasing order.
pub fn transverse_axes(axis: usize) -> [usize; 2] {
    match axis {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedEdge {
    pub index: usize,
    /// +1 when the local (positive-axis) direction matches the global low→high orientation.
    pub sign: i8,
}

/// Closed axis-aligned box, used for domains and region predicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisBox {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl AxisBox {
    pub fn new(min: [f64; 3], max: [f64; 3]) -> Self {
        Self { min, max }
    }

    pub fn cube(lo: f64, hi: f64) -> Self {
        Self::new([lo; 3], [hi; 3])
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        (0..3).all(|d| p[d] >= self.min[d] && p[d] <= self.max[d])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    extents: [[f64; 2]; 3],
    subdivisions: [usize; 3],
    nodes: Vec<[f64; 3]>,
    cells: Vec<[usize; 8]>,
    edges: Vec<[usize; 2]>,
    edge_axis: Vec<u8>,
    cell_edges: Vec<[SignedEdge; 12]>,
}

/// Builds the box mesh `extents[0] × extents[1] × extents[2]` split into
/// `subdivisions[d]` equal cells along each axis.
pub fn build_box_mesh(extents: [[f64; 2]; 3], subdivisions: [usize; 3]) -> Result<Mesh> {
    for d in 0..3 {
        let [lo, hi] = extents[d];
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "extent along axis {d} must be a nonempty interval, got ({lo}, {hi})"
            )));
        }
        if subdivisions[d] == 0 {
            return Err(Error::InvalidArgument(format!(
                "subdivisions along axis {d} must be at least 1"
            )));
        }
    }
    let [nx, ny, nz] = subdivisions;
    let coord = |d: usize, i: usize| {
        let [lo, hi] = extents[d];
        let n = subdivisions[d];
        if i == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / n as f64
        }
    };

    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1) * (nz + 1));
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                nodes.push([coord(0, i), coord(1, j), coord(2, k)]);
            }
        }
    }

    let mut mesh = Mesh {
        extents,
        subdivisions,
        nodes,
        cells: Vec::with_capacity(nx * ny * nz),
        edges: Vec::new(),
        edge_axis: Vec::new(),
        cell_edges: Vec::with_capacity(nx * ny * nz),
    };

    let counts = mesh.edge_counts_per_axis();
    mesh.edges.reserve(counts.iter().sum());
    for axis in 0..3 {
        let mut dims = [nx + 1, ny + 1, nz + 1];
        dims[axis] -= 1;
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    let a = mesh.node_index(i, j, k);
                    let mut ijk = [i, j, k];
                    ijk[axis] += 1;
                    let b = mesh.node_index(ijk[0], ijk[1], ijk[2]);
                    mesh.edges.push([a.min(b), a.max(b)]);
                    mesh.edge_axis.push(axis as u8);
                }
            }
        }
    }

    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let base = [i, j, k];
                let cell = LOCAL_NODE_OFFSETS
                    .map(|o| mesh.node_index(base[0] + o[0], base[1] + o[1], base[2] + o[2]));
                let mut local = [SignedEdge { index: 0, sign: 1 }; 12];
                for (e, slot) in local.iter_mut().enumerate() {
                    let (axis, off) = local_edge_layout(e);
                    let [t0, t1] = transverse_axes(axis);
                    let mut start = base;
                    start[t0] += off[0];
                    start[t1] += off[1];
                    let mut end = start;
                    end[axis] += 1;
                    let a = mesh.node_index(start[0], start[1], start[2]);
                    let b = mesh.node_index(end[0], end[1], end[2]);
                    let index = mesh.edge_index(axis, start);
                    debug_assert_eq!(mesh.edges[index], [a.min(b), a.max(b)]);
                    *slot = SignedEdge {
                        index,
                        sign: if a < b { 1 } else { -1 },
                    };
                }
                mesh.cells.push(cell);
                mesh.cell_edges.push(local);
            }
        }
    }
    Ok(mesh)
}

impl Mesh {
    pub fn extents(&self) -> [[f64; 2]; 3] {
        self.extents
    }

    pub fn subdivisions(&self) -> [usize; 3] {
        self.subdivisions
    }

    pub fn domain(&self) -> AxisBox {
        AxisBox::new(
            self.extents.map(|e| e[0]),
            self.extents.map(|e| e[1]),
        )
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Number of quadrilateral faces, from the closed-form count.
    pub fn face_count(&self) -> usize {
        let n = self.subdivisions;
        (0..3)
            .map(|a| {
                let [t0, t1] = transverse_axes(a);
                (n[a] + 1) * n[t0] * n[t1]
            })
            .sum()
    }

    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    pub fn node(&self, n: usize) -> [f64; 3] {
        self.nodes[n]
    }

    pub fn cells(&self) -> &[[usize; 8]] {
        &self.cells
    }

    pub fn cell_nodes(&self, c: usize) -> &[usize; 8] {
        &self.cells[c]
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge_nodes(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn edge_axis(&self, e: usize) -> usize {
        self.edge_axis[e] as usize
    }

    pub fn cell_edges(&self, c: usize) -> &[SignedEdge; 12] {
        &self.cell_edges[c]
    }

    pub fn node_index(&self, i: usize, j: usize, k: usize) -> usize {
        let [nx, ny, _] = self.subdivisions;
        i + (nx + 1) * (j + (ny + 1) * k)
    }

    /// Grid indices of node `n`.
    pub fn node_ijk(&self, n: usize) -> [usize; 3] {
        let [nx, ny, _] = self.subdivisions;
        let i = n % (nx + 1);
        let j = (n / (nx + 1)) % (ny + 1);
        let k = n / ((nx + 1) * (ny + 1));
        [i, j, k]
    }

    pub fn cell_index(&self, i: usize, j: usize, k: usize) -> usize {
        let [nx, ny, _] = self.subdivisions;
        i + nx * (j + ny * k)
    }

    pub fn cell_ijk(&self, c: usize) -> [usize; 3] {
        let [nx, ny, _] = self.subdivisions;
        [c % nx, (c / nx) % ny, c / (nx * ny)]
    }

    fn edge_counts_per_axis(&self) -> [usize; 3] {
        let n = self.subdivisions;
        [0, 1, 2].map(|a| {
            let [t0, t1] = transverse_axes(a);
            n[a] * (n[t0] + 1) * (n[t1] + 1)
        })
    }

    /// Index of the edge starting at grid point `start` and running along `axis`.
    pub fn edge_index(&self, axis: usize, start: [usize; 3]) -> usize {
        let counts = self.edge_counts_per_axis();
        let offset: usize = counts[..axis].iter().sum();
        let mut dims = self.subdivisions.map(|n| n + 1);
        dims[axis] -= 1;
        offset + start[0] + dims[0] * (start[1] + dims[1] * start[2])
    }

    /// Lower and upper corner of cell `c`.
    pub fn cell_bounds(&self, c: usize) -> ([f64; 3], [f64; 3]) {
        let nodes = &self.cells[c];
        (self.nodes[nodes[0]], self.nodes[nodes[6]])
    }

    pub fn cell_size(&self, c: usize) -> [f64; 3] {
        let (lo, hi) = self.cell_bounds(c);
        [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]]
    }

    pub fn cell_centroid(&self, c: usize) -> [f64; 3] {
        let (lo, hi) = self.cell_bounds(c);
        [0, 1, 2].map(|d| 0.5 * (lo[d] + hi[d]))
    }

    /// Maps a reference point in [-1, 1]^3 of cell `c` to physical coordinates.
    pub fn map_to_physical(&self, c: usize, xi: [f64; 3]) -> [f64; 3] {
        let (lo, hi) = self.cell_bounds(c);
        [0, 1, 2].map(|d| lo[d] + 0.5 * (xi[d] + 1.0) * (hi[d] - lo[d]))
    }

    /// Finds a cell containing `p` and the reference coordinates of `p` in it.
    /// Points on shared faces resolve to the cell with the lower index.
    pub fn locate(&self, p: [f64; 3]) -> Option<(usize, [f64; 3])> {
        let mut ijk = [0usize; 3];
        for d in 0..3 {
            let [lo, hi] = self.extents[d];
            let n = self.subdivisions[d];
            let tol = 1e-12 * (hi - lo);
            if !(p[d] >= lo - tol && p[d] <= hi + tol) {
                return None;
            }
            let t = ((p[d] - lo) / (hi - lo) * n as f64).floor();
            ijk[d] = (t.max(0.0) as usize).min(n - 1);
        }
        let c = self.cell_index(ijk[0], ijk[1], ijk[2]);
        let (lo, hi) = self.cell_bounds(c);
        let xi = [0, 1, 2].map(|d| (2.0 * (p[d] - lo[d]) / (hi[d] - lo[d]) - 1.0).clamp(-1.0, 1.0));
        Some((c, xi))
    }

    /// All quadrilateral faces (sorted node quadruples) with their adjacent cells.
    pub fn faces(&self) -> Vec<([usize; 4], Vec<usize>)> {
        // VTK hexahedron faces.
        const FACES: [[usize; 4]; 6] = [
            [0, 3, 7, 4],
            [1, 2, 6, 5],
            [0, 1, 5, 4],
            [3, 2, 6, 7],
            [0, 1, 2, 3],
            [4, 5, 6, 7],
        ];
        let mut map: BTreeMap<[usize; 4], Vec<usize>> = BTreeMap::new();
        for (c, nodes) in self.cells.iter().enumerate() {
            for f in FACES {
                let mut key = f.map(|l| nodes[l]);
                key.sort_unstable();
                map.entry(key).or_default().push(c);
            }
        }
        map.into_iter().collect()
    }

    /// Cells adjacent to each node.
    pub fn node_cells(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (c, nodes) in self.cells.iter().enumerate() {
            for &n in nodes {
                adj[n].push(c);
            }
        }
        adj
    }

    /// Cells adjacent to each edge.
    pub fn edge_cells(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.edges.len()];
        for (c, edges) in self.cell_edges.iter().enumerate() {
            for e in edges {
                adj[e.index].push(c);
            }
        }
        adj
    }
}

/// Conductor (σ > 0) or air (σ = 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Conductor,
    Air,
}

/// Region labels per cell plus the derived node and edge index sets.
///
/// A node or edge belongs to the conductor set iff at least one adjacent cell
/// is a conductor cell; all others are supported only in air.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionTags {
    pub cell_region: Vec<Region>,
    pub node_conductor: Vec<bool>,
    pub edge_conductor: Vec<bool>,
}

impl RegionTags {
    pub fn from_cell_regions(mesh: &Mesh, cell_region: Vec<Region>) -> Self {
        let mut node_conductor = vec![false; mesh.node_count()];
        let mut edge_conductor = vec![false; mesh.edge_count()];
        for (c, r) in cell_region.iter().enumerate() {
            if *r == Region::Conductor {
                for &n in mesh.cell_nodes(c) {
                    node_conductor[n] = true;
                }
                for e in mesh.cell_edges(c) {
                    edge_conductor[e.index] = true;
                }
            }
        }
        Self {
            cell_region,
            node_conductor,
            edge_conductor,
        }
    }

    pub fn conductor_cells(&self) -> usize {
        self.cell_region.iter().filter(|r| **r == Region::Conductor).count()
    }

    pub fn conductor_nodes(&self) -> Vec<usize> {
        indices_where(&self.node_conductor, true)
    }

    pub fn air_nodes(&self) -> Vec<usize> {
        indices_where(&self.node_conductor, false)
    }

    pub fn conductor_edges(&self) -> Vec<usize> {
        indices_where(&self.edge_conductor, true)
    }

    pub fn air_edges(&self) -> Vec<usize> {
        indices_where(&self.edge_conductor, false)
    }
}

fn indices_where(flags: &[bool], value: bool) -> Vec<usize> {
    flags
        .iter()
        .enumerate()
        .filter_map(|(i, f)| (*f == value).then_some(i))
        .collect()
}

/// For every cell, the index of the last predicate whose box contains the
/// cell centroid.
pub fn assign_cells<T>(mesh: &Mesh, predicates: &[(AxisBox, T)]) -> Result<Vec<usize>> {
    (0..mesh.cell_count())
        .map(|c| {
            let centroid = mesh.cell_centroid(c);
            predicates
                .iter()
                .rposition(|(b, _)| b.contains(centroid))
                .ok_or(Error::UncoveredRegion { cell: c, centroid })
        })
        .collect()
}

/// Labels every cell by centroid membership; later predicates win.
pub fn tag_regions(mesh: &Mesh, predicates: &[(AxisBox, Region)]) -> Result<RegionTags> {
    let owner = assign_cells(mesh, predicates)?;
    let cell_region = owner.into_iter().map(|p| predicates[p].1).collect();
    Ok(RegionTags::from_cell_regions(mesh, cell_region))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundaryLabel {
    Xmin,
    Xmax,
    Ymin,
    Ymax,
    Zmin,
    Zmax,
}

impl BoundaryLabel {
    pub const ALL: [BoundaryLabel; 6] = [
        BoundaryLabel::Xmin,
        BoundaryLabel::Xmax,
        BoundaryLabel::Ymin,
        BoundaryLabel::Ymax,
        BoundaryLabel::Zmin,
        BoundaryLabel::Zmax,
    ];

    pub fn axis(self) -> usize {
        self as usize / 2
    }

    pub fn is_max(self) -> bool {
        self as usize % 2 == 1
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryLabel::Xmin => "xmin",
            BoundaryLabel::Xmax => "xmax",
            BoundaryLabel::Ymin => "ymin",
            BoundaryLabel::Ymax => "ymax",
            BoundaryLabel::Zmin => "zmin",
            BoundaryLabel::Zmax => "zmax",
        }
    }
}

impl fmt::Display for BoundaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundaryLabel::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownBoundaryLabel(s.to_string()))
    }
}

/// Node, edge and face index sets of each of the six box faces.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTags {
    pub nodes: BTreeMap<BoundaryLabel, Vec<usize>>,
    pub edges: BTreeMap<BoundaryLabel, Vec<usize>>,
    /// Boundary faces as sorted node quadruples.
    pub faces: BTreeMap<BoundaryLabel, Vec<[usize; 4]>>,
}

impl BoundaryTags {
    pub fn nodes(&self, label: BoundaryLabel) -> &[usize] {
        &self.nodes[&label]
    }

    pub fn edges(&self, label: BoundaryLabel) -> &[usize] {
        &self.edges[&label]
    }

    /// Union of all boundary nodes, ascending.
    pub fn all_nodes(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.nodes.values().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }
}

pub fn boundary_entities(mesh: &Mesh) -> BoundaryTags {
    let n = mesh.subdivisions();
    let on_face = |label: BoundaryLabel, node: usize| {
        let ijk = mesh.node_ijk(node);
        let a = label.axis();
        ijk[a] == if label.is_max() { n[a] } else { 0 }
    };
    let mut nodes = BTreeMap::new();
    let mut edges = BTreeMap::new();
    let mut faces = BTreeMap::new();
    let all_faces = mesh.faces();
    for label in BoundaryLabel::ALL {
        let ns: Vec<usize> = (0..mesh.node_count()).filter(|&v| on_face(label, v)).collect();
        let es: Vec<usize> = (0..mesh.edge_count())
            .filter(|&e| {
                let [a, b] = mesh.edge_nodes(e);
                on_face(label, a) && on_face(label, b)
            })
            .collect();
        let fs: Vec<[usize; 4]> = all_faces
            .iter()
            .filter(|(f, cells)| cells.len() == 1 && f.iter().all(|&v| on_face(label, v)))
            .map(|(f, _)| *f)
            .collect();
        nodes.insert(label, ns);
        edges.insert(label, es);
        faces.insert(label, fs);
    }
    BoundaryTags { nodes, edges, faces }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use std::f64::consts::PI;

    fn unit(n: [usize; 3]) -> Mesh {
        build_box_mesh([[0.0, 1.0]; 3], n).unwrap()
    }

    #[test]
    fn single_cell_counts() {
        let m = unit([1, 1, 1]);
        assert_eq!((m.node_count(), m.edge_count(), m.cell_count()), (8, 12, 1));
    }

    #[test]
    fn two_by_two_counts() {
        let m = unit([2, 2, 2]);
        assert_eq!((m.node_count(), m.edge_count(), m.cell_count()), (27, 54, 8));
    }

    #[test]
    fn manufactured_domain_counts() {
        let m = build_box_mesh([[PI / 2.0, 1.5 * PI]; 3], [4, 4, 4]).unwrap();
        assert_eq!((m.node_count(), m.edge_count(), m.cell_count()), (125, 300, 64));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            build_box_mesh([[0.0, 1.0]; 3], [1, 0, 1]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(build_box_mesh([[0.0, 1.0], [1.0, 1.0], [0.0, 1.0]], [1, 1, 1]).is_err());
    }

    /// Brute force: node pairs at grid distance one.
    fn brute_force_edges(m: &Mesh) -> BTreeSet<[usize; 2]> {
        let mut set = BTreeSet::new();
        for a in 0..m.node_count() {
            for b in a + 1..m.node_count() {
                let (p, q) = (m.node_ijk(a), m.node_ijk(b));
                let dist: usize = (0..3).map(|d| p[d].abs_diff(q[d])).sum();
                if dist == 1 {
                    set.insert([a, b]);
                }
            }
        }
        set
    }

    #[test]
    fn edge_count_matches_brute_force_enumeration() {
        for nx in 1..=4 {
            for ny in 1..=4 {
                for nz in 1..=4 {
                    let m = unit([nx, ny, nz]);
                    let formula = nx * (ny + 1) * (nz + 1) + ny * (nx + 1) * (nz + 1) + nz * (nx + 1) * (ny + 1);
                    let listed: BTreeSet<[usize; 2]> = m.edges().iter().copied().collect();
                    assert_eq!(listed.len(), m.edge_count(), "duplicate edges");
                    assert_eq!(m.edge_count(), formula);
                    assert_eq!(listed, brute_force_edges(&m));
                    assert!(m.edges().iter().all(|e| e[0] < e[1]));
                }
            }
        }
    }

    #[test]
    fn euler_characteristic_of_box_is_one() {
        for n in [[1, 1, 1], [2, 3, 1], [3, 3, 3], [4, 2, 3]] {
            let m = unit(n);
            let faces = m.faces();
            assert_eq!(faces.len(), m.face_count());
            let chi = m.node_count() as i64 - m.edge_count() as i64 + m.face_count() as i64
                - m.cell_count() as i64;
            assert_eq!(chi, 1, "{n:?}");
        }
    }

    #[test]
    fn faces_are_shared_by_one_or_two_cells() {
        let m = unit([3, 2, 2]);
        let b = boundary_entities(&m);
        let boundary_faces: usize = b.faces.values().map(|f| f.len()).sum();
        let mut single = 0;
        for (_, cells) in m.faces() {
            assert!(cells.len() == 1 || cells.len() == 2);
            if cells.len() == 1 {
                single += 1;
            }
        }
        assert_eq!(single, boundary_faces);
        assert_eq!(single, 2 * (3 * 2 + 3 * 2 + 2 * 2));
    }

    #[test]
    fn cell_edges_reproduce_node_pairs() {
        let m = unit([2, 3, 2]);
        for c in 0..m.cell_count() {
            let nodes = m.cell_nodes(c);
            for (e, se) in m.cell_edges(c).iter().enumerate() {
                let (axis, off) = local_edge_layout(e);
                let [t0, t1] = transverse_axes(axis);
                let mut start = [0; 3];
                start[t0] = off[0];
                start[t1] = off[1];
                let mut end = start;
                end[axis] = 1;
                let local = |o: [usize; 3]| LOCAL_NODE_OFFSETS.iter().position(|x| *x == o).unwrap();
                let (a, b) = (nodes[local(start)], nodes[local(end)]);
                let [ga, gb] = m.edge_nodes(se.index);
                if se.sign > 0 {
                    assert_eq!((a, b), (ga, gb));
                } else {
                    assert_eq!((a, b), (gb, ga));
                }
                // Physical direction is +axis.
                let (pa, pb) = (m.node(a), m.node(b));
                assert!(pb[axis] > pa[axis]);
            }
        }
    }

    #[test]
    fn numbering_is_deterministic() {
        let a = build_box_mesh([[0.0, 2.0], [-1.0, 1.0], [0.0, 0.5]], [3, 2, 4]).unwrap();
        let b = build_box_mesh([[0.0, 2.0], [-1.0, 1.0], [0.0, 0.5]], [3, 2, 4]).unwrap();
        assert_eq!(a, b);
        // x runs fastest
        assert_eq!(a.node(1), [2.0 / 3.0, -1.0, 0.0]);
    }

    #[test]
    fn all_air_has_no_conductor_nodes() {
        let m = unit([2, 2, 2]);
        let t = tag_regions(&m, &[(m.domain(), Region::Air)]).unwrap();
        assert!(t.conductor_nodes().is_empty());
        assert_eq!(t.air_edges().len(), 54);
    }

    #[test]
    fn full_conductor_has_no_air_edges() {
        let m = unit([3, 3, 3]);
        let t = tag_regions(&m, &[(m.domain(), Region::Conductor)]).unwrap();
        assert!(t.air_edges().is_empty());
        assert!(t.air_nodes().is_empty());
    }

    #[test]
    fn bar_through_center_matches_centroid_brute_force() {
        let m = build_box_mesh([[0.0, 0.22]; 3], [5, 5, 5]).unwrap();
        let bar = AxisBox::new([0.08, 0.08, 0.0], [0.14, 0.14, 0.22]);
        let t = tag_regions(&m, &[(m.domain(), Region::Air), (bar, Region::Conductor)]).unwrap();
        let expected = (0..m.cell_count())
            .filter(|&c| bar.contains(m.cell_centroid(c)))
            .count();
        assert_eq!(t.conductor_cells(), expected);
        assert_eq!(expected, 5);
        // node/edge sets follow the adjacency rule
        for (e, adj) in m.edge_cells().iter().enumerate() {
            let touches = adj.iter().any(|&c| t.cell_region[c] == Region::Conductor);
            assert_eq!(t.edge_conductor[e], touches);
        }
        for (n, adj) in m.node_cells().iter().enumerate() {
            let touches = adj.iter().any(|&c| t.cell_region[c] == Region::Conductor);
            assert_eq!(t.node_conductor[n], touches);
        }
    }

    #[test]
    fn uncovered_cell_is_reported() {
        let m = unit([2, 2, 2]);
        let half = AxisBox::new([0.0; 3], [0.5, 1.0, 1.0]);
        assert!(matches!(
            tag_regions(&m, &[(half, Region::Air)]),
            Err(Error::UncoveredRegion { .. })
        ));
    }

    #[test]
    fn last_match_wins() {
        let m = unit([2, 2, 2]);
        let t = tag_regions(
            &m,
            &[(m.domain(), Region::Conductor), (m.domain(), Region::Air)],
        )
        .unwrap();
        assert_eq!(t.conductor_cells(), 0);
    }

    #[test]
    fn boundary_of_single_cell() {
        let m = unit([1, 1, 1]);
        let b = boundary_entities(&m);
        for l in BoundaryLabel::ALL {
            assert_eq!(b.nodes(l).len(), 4);
            assert_eq!(b.edges(l).len(), 4);
            assert_eq!(b.faces[&l].len(), 1);
        }
    }

    #[test]
    fn interior_node_counts() {
        let b = boundary_entities(&unit([2, 2, 2]));
        assert_eq!(b.all_nodes().len(), 26);
        let m = unit([3, 3, 3]);
        let b = boundary_entities(&m);
        assert_eq!(m.node_count() - b.all_nodes().len(), 8);
        // boundary nodes are exactly those with a coordinate at an extent endpoint
        for v in 0..m.node_count() {
            let p = m.node(v);
            let on = p.iter().any(|&x| x == 0.0 || x == 1.0);
            assert_eq!(on, b.all_nodes().binary_search(&v).is_ok());
        }
    }

    #[test]
    fn labels_parse() {
        assert_eq!("Zmax".parse::<BoundaryLabel>().unwrap(), BoundaryLabel::Zmax);
        assert!(matches!("top".parse::<BoundaryLabel>(), Err(Error::UnknownBoundaryLabel(_))));
    }

    #[test]
    fn locate_finds_reference_coordinates() {
        let m = unit([2, 2, 2]);
        let (c, xi) = m.locate([0.75, 0.25, 0.5]).unwrap();
        assert_eq!(m.cell_ijk(c)[0], 1);
        assert!((xi[0] - 0.0).abs() < 1e-14 && (xi[1] - 0.0).abs() < 1e-14);
        let p = m.map_to_physical(c, xi);
        assert!((p[0] - 0.75).abs() < 1e-14);
        assert!(m.locate([1.5, 0.0, 0.0]).is_none());
    }
}
