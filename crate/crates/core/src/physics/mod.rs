//! Two-step solves, derived fields and the manufactured-solution case.

pub mod fields;
pub mod manufactured;
pub mod scenario;
pub mod two_step;

pub use fields::{hcurl_error, DerivedFields, FieldSample};
pub use manufactured::ManufacturedCase;
pub use scenario::{Problem, Scenario, Source};
pub use two_step::{curl_system, curl_system_matrix, gauge_residual, run_two_step, Diagnostics, Method, Solution};
