use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cell {cell} (centroid {centroid:?}) is not covered by any region")]
    UncoveredRegion { cell: usize, centroid: [f64; 3] },

    #[error("unknown boundary label `{0}`")]
    UnknownBoundaryLabel(String),

    #[error("gauge graph is disconnected: reached {reached} of {vertices} vertices")]
    DisconnectedGraph { reached: usize, vertices: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular: best pivot {pivot:.3e} at step {step} is below {threshold:.3e}")]
    SingularMatrix {
        step: usize,
        pivot: f64,
        threshold: f64,
    },

    #[error("conductor component {component} touches no scalar Dirichlet surface; static current flow is singular")]
    FloatingConductor { component: usize },

    #[error("point {0:?} lies outside the mesh")]
    PointOutsideDomain([f64; 3]),

    #[error("manufactured charge density is undefined at zero frequency in a conducting medium")]
    UndefinedSource,
}

impl Error {
    pub fn is_singular(&self) -> bool {
        matches!(self, Error::SingularMatrix { .. })
    }
}
