//! Supply chain domain model: instance data, the variable catalog, the
//! builders that compile an instance into a tri-objective MILP, and the
//! solution feasibility checker.

pub mod build;
pub mod catalog;
pub mod instance;
pub mod validate;

pub use build::{compile, TriObjectiveModel};
pub use catalog::Catalog;
pub use instance::SscInstance;
pub use validate::{validate_solution, ViolationReport};
