//! Frequency-domain solver for the two-step scalar/vector potential
//! formulation of Maxwell's equations.
//!
//! Step one solves the electroquasistatic problem for the electric scalar
//! potential, step two the curl-curl problem for the magnetic vector
//! potential. As the frequency goes to zero the curl system loses its
//! gradient part; the [`gauge`] and [`system`] modules restore it by replacing
//! the tree rows of a tree-cotree split with a region-scaled discrete
//! divergence constraint (or, alternatively, by a Lagrange multiplier).
//!
//! Discretization: lowest-order nodal and edge elements on structured,
//! axis-aligned hexahedral meshes.

pub mod assembly;
pub mod error;
pub mod gauge;
pub mod mesh;
pub mod physics;
pub mod quadrature;
pub mod solve;
pub mod spaces;
pub mod sparse;
pub mod system;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Vacuum permittivity in F/m.
pub const EPS0: f64 = 8.854_187_8128e-12;
/// Vacuum permeability in H/m.
pub const MU0: f64 = 1.256_637_062_12e-6;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
