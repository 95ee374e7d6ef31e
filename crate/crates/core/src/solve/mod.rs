//! Direct sparse solves and 2-norm condition estimates.

pub mod condition;
pub mod dense;
pub mod lu;
pub mod ordering;

pub use condition::{condition_estimate, condition_estimate_with, ConditionEstimate, ConditionMethod};
pub use lu::{sparse_lu_solve, SolveReport, SparseLu};
