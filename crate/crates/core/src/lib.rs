//! Tri-objective sustainable supply chain network design, solved three ways.
//!
//! The crate builds a mixed-integer model of a multi-period supply chain
//! (suppliers, factories, warehouses, customers, air/sea hubs, forward and
//! reverse item flows) with economic, environmental and social objectives,
//! and approximates its Pareto frontier with:
//!
//! * an exact augmented epsilon-constraint grid over a built-in
//!   branch-and-bound solver,
//! * a Lagrangian subgradient matheuristic for the grid's mono-objective
//!   subproblems, and
//! * a variable-fixing matheuristic for the same subproblems.
//!
//! A seeded instance generator and front quality metrics round out the
//! toolkit; the `sscopt` binary drives the whole pipeline.

pub mod milp;

pub mod instgen;
pub mod ssc;

pub mod grid;

pub mod lagrangian;

pub mod fixing;

pub mod metrics;
