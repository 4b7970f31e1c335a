//! Generic linear / mixed-integer model representation with a built-in
//! desk-scale solver (bounded-variable primal simplex plus best-bound
//! branch-and-bound) and an LP-file export path for external solvers.

mod branch_bound;
mod lp_format;
mod model;
mod result_io;
mod simplex;

pub use branch_bound::{solve_milp, SolveParams};
pub use lp_format::{parse_lp, to_lp_string, write_lp, LpParseError};
pub use model::{
    Block, LinConstraint, LinObjective, MilpResult, Model, ModelError, Sense, SolveStatus, VarDomain,
    VarId, VarSpec,
};
pub use result_io::{result_from_json, result_to_json};
pub use simplex::solve_lp;

/// Absolute feasibility tolerance applied to every constraint row.
pub const TOL_FEAS: f64 = 1e-6;
/// Distance from the nearest integer below which a value counts as integral.
pub const TOL_INT: f64 = 1e-6;
