//! Augmented epsilon-constraint engine: payoff bounds, grid construction,
//! bypass acceleration, infeasibility early exit and dominance filtering,
//! parameterized by a mono-objective subsolver.

pub mod dominance;
pub mod front_io;
pub mod mono;
pub mod run;

pub use dominance::{dominates, filter_dominated, non_dominated_mask};
pub use front_io::{front_from_json, front_to_csv, front_to_doc, front_to_json, FrontDoc};
pub use mono::{
    build_mop, ExactSolver, MonoOutcome, MonoProblem, MonoSolver, ObjectiveKind, PayoffBounds,
    SolutionPoint, SolveBudget,
};
pub use run::{estimate_bounds, run, CellLog, CellOutcome, FrontPoint, GridOutcome, GridParams};
