//! Scenario descriptions and their frequency-independent discretization.

use crate::assembly::{
    assemble_charge_vector, assemble_current_vector, Material, MaterialField, MatrixBundle, SourceVectors,
};
use crate::gauge::{build_gauge_graph, spanning_tree, GaugeGraph, TreeCotreePartition};
use crate::mesh::{boundary_entities, build_box_mesh, AxisBox, BoundaryLabel, BoundaryTags, Mesh};
use crate::physics::manufactured::ManufacturedCase;
use crate::spaces::{build_edge_space, build_scalar_space, DirichletSpec, EdgeSpace, ScalarSpace};
use crate::system::{scaling_factors, ScalingFactors};
use crate::{c64, Complex64, Result};

/// Volume excitation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    None,
    Manufactured(ManufacturedCase),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub extents: [[f64; 2]; 3],
    pub subdivisions: [usize; 3],
    /// Material boxes; later boxes win.
    pub zones: Vec<(AxisBox, Material)>,
    pub dirichlet: DirichletSpec,
    pub source: Source,
}

/// Edge length of the academic box in m.
pub const ACADEMIC_SIZE: f64 = 0.22;

impl Scenario {
    /// A 22 cm box of stacked dielectrics (ε_r = 5 below 10 cm and above
    /// 12 cm, ε_r = 1 in between) crossed along z by a 2 cm square bar with
    /// σ = 5 S/m, ε_r = 5 (σ = 1 S/m, ε_r = 1 in the middle layer). The bar
    /// is driven by φ = 0 at z = 0 and φ = 1 V at the top; A×n = 0 on all faces.
    pub fn academic(subdivisions: [usize; 3]) -> Self {
        let s = ACADEMIC_SIZE;
        let slab = AxisBox::new([0.0, 0.0, 0.10], [s, s, 0.12]);
        let bar = AxisBox::new([0.10, 0.10, 0.0], [0.12, 0.12, s]);
        let bar_gap = AxisBox::new([0.10, 0.10, 0.10], [0.12, 0.12, 0.12]);
        Self {
            extents: [[0.0, s]; 3],
            subdivisions,
            zones: vec![
                (AxisBox::cube(0.0, s), Material::relative(0.0, 5.0, 1.0)),
                (slab, Material::relative(0.0, 1.0, 1.0)),
                (bar, Material::relative(5.0, 5.0, 1.0)),
                (bar_gap, Material::relative(1.0, 1.0, 1.0)),
            ],
            dirichlet: DirichletSpec {
                scalar: vec![(BoundaryLabel::Zmin, c64(0.0)), (BoundaryLabel::Zmax, c64(1.0))],
                edge: BoundaryLabel::ALL.to_vec(),
            },
            source: Source::None,
        }
    }

    /// The manufactured-solution cube with `s_h` cells per axis.
    pub fn manufactured(s_h: usize, sigma: f64) -> Self {
        let case = ManufacturedCase::vacuum(sigma);
        let extents = ManufacturedCase::extents();
        Self {
            extents,
            subdivisions: [s_h; 3],
            zones: vec![(
                AxisBox::new(extents.map(|e| e[0]), extents.map(|e| e[1])),
                case.material,
            )],
            dirichlet: DirichletSpec::homogeneous_everywhere(),
            source: Source::Manufactured(case),
        }
    }

    pub fn manufactured_case(&self) -> Option<&ManufacturedCase> {
        match &self.source {
            Source::Manufactured(c) => Some(c),
            Source::None => None,
        }
    }
}

/// Everything that does not depend on the frequency.
#[derive(Debug, Clone)]
pub struct Problem {
    pub scenario: Scenario,
    pub mesh: Mesh,
    pub boundary: BoundaryTags,
    pub materials: MaterialField,
    pub scalar: ScalarSpace,
    pub edge: EdgeSpace,
    pub bundle: MatrixBundle,
    pub graph: GaugeGraph,
    pub partition: TreeCotreePartition,
}

impl Problem {
    pub fn build(scenario: &Scenario) -> Result<Self> {
        let mesh = build_box_mesh(scenario.extents, scenario.subdivisions)?;
        let boundary = boundary_entities(&mesh);
        let materials = MaterialField::from_boxes(&mesh, &scenario.zones)?;
        let scalar = build_scalar_space(&mesh, &boundary, &scenario.dirichlet);
        let edge = build_edge_space(&mesh, &boundary, &scenario.dirichlet);
        let graph = build_gauge_graph(&mesh, &edge);
        let partition = spanning_tree(&graph)?;
        let bundle = MatrixBundle::assemble(&mesh, &materials);
        Ok(Self {
            scenario: scenario.clone(),
            mesh,
            boundary,
            materials,
            scalar,
            edge,
            bundle,
            graph,
            partition,
        })
    }

    pub fn sources(&self, omega: f64) -> Result<SourceVectors> {
        match &self.scenario.source {
            Source::None => Ok(SourceVectors::zero(&self.mesh)),
            Source::Manufactured(case) => {
                // surface the undefined case before integrating
                case.charge_density(self.mesh.node(0), omega)?;
                let rho = |p: [f64; 3]| case.charge_density(p, omega).unwrap_or(c64(0.0));
                let current = |p: [f64; 3]| case.current_source(p, omega);
                Ok(SourceVectors {
                    q_s: assemble_charge_vector(&self.mesh, &rho),
                    j_s: assemble_current_vector(&self.mesh, &current),
                })
            }
        }
    }

    pub fn scaling(&self, omega: f64) -> ScalingFactors {
        scaling_factors(omega, self.materials.max_sigma(), self.materials.max_epsilon())
    }

    pub fn gauge_nodes(&self) -> &[usize] {
        self.graph.gauge_nodes()
    }

    /// Source current density at a point (zero without volume sources).
    pub fn current_source_at(&self, p: [f64; 3], omega: f64) -> [Complex64; 3] {
        match &self.scenario.source {
            Source::None => [c64(0.0); 3],
            Source::Manufactured(case) => case.current_source(p, omega),
        }
    }

    /// Source displacement at a point (zero without volume sources).
    pub fn displacement_source_at(&self, p: [f64; 3], omega: f64) -> Result<[Complex64; 3]> {
        match &self.scenario.source {
            Source::None => Ok([c64(0.0); 3]),
            Source::Manufactured(case) => case.displacement_source(p, omega),
        }
    }
}
