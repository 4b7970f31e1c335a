//! The augmented epsilon-constraint grid: payoff bounds, the nested
//! epsilon loops with slack-driven bypass jumps and infeasibility early
//! exit, and the final dominance filter.

use std::time::Instant;

use crate::ssc::build::TriObjectiveModel;

use super::dominance::filter_dominated;
use super::mono::{build_mop, MonoOutcome, MonoProblem, MonoSolver, PayoffBounds, SolveBudget, SolutionPoint};

#[derive(Debug, Clone)]
pub struct GridParams {
    /// Grid points per constrained objective.
    pub grid: usize,
    /// Slack reward weight in the aggregate objective.
    pub eps: f64,
    pub budget: SolveBudget,
}

impl Default for GridParams {
    fn default() -> Self {
        GridParams { grid: 10, eps: 1e-3, budget: SolveBudget::default() }
    }
}

#[derive(Debug, Clone)]
pub enum CellOutcome {
    Feasible {
        /// Index into the raw point list (before dominance filtering).
        point: usize,
        slack_env: f64,
        slack_soc: f64,
        /// Cells skipped on the social axis: 1 + floor(l_soc / step_soc).
        jump: u64,
    },
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct CellLog {
    pub env_index: usize,
    pub soc_index: usize,
    pub eps_env: f64,
    pub eps_soc: f64,
    pub time_s: f64,
    pub outcome: CellOutcome,
}

#[derive(Debug, Clone)]
pub struct FrontPoint {
    pub point: SolutionPoint,
    pub eps_env: f64,
    pub eps_soc: f64,
    pub cell: (usize, usize),
    pub method: String,
    pub time_s: f64,
}

#[derive(Debug, Clone)]
pub struct GridOutcome {
    /// Non-dominated points, provenance attached.
    pub front: Vec<FrontPoint>,
    pub bounds: Option<PayoffBounds>,
    pub log: Vec<CellLog>,
    /// Subsolver invocations, payoff estimation included.
    pub mono_calls: usize,
    pub wall_time_s: f64,
    pub method: String,
}

/// Estimate per-objective bounds by optimizing each objective individually
/// with the given subsolver: the lower bound is the subsolver's proven or
/// relaxation bound, the upper bound the worst value of that objective
/// among the three incumbents.
pub fn estimate_bounds(
    tri: &TriObjectiveModel,
    subsolver: &dyn MonoSolver,
    budget: &SolveBudget,
    calls: &mut usize,
) -> Option<PayoffBounds> {
    let mut lower = [0.0; 3];
    let mut incumbents: Vec<SolutionPoint> = Vec::with_capacity(3);
    for k in 0..3 {
        let problem = MonoProblem::payoff(tri, k);
        *calls += 1;
        match subsolver.solve_mono(&problem, budget) {
            MonoOutcome::Feasible { point, lower_bound } => {
                lower[k] = lower_bound;
                incumbents.push(*point);
            }
            MonoOutcome::Infeasible => return None,
        }
    }
    let mut upper = [f64::NEG_INFINITY; 3];
    for inc in &incumbents {
        for k in 0..3 {
            upper[k] = upper[k].max(inc.minimized[k]);
        }
    }
    for k in 0..3 {
        // A heuristic bound may sit above an incumbent's value on another
        // objective; the envelope keeps lower <= upper.
        lower[k] = lower[k].min(upper[k]);
    }
    Some(PayoffBounds { lower, upper })
}

/// Run the grid with a subsolver and collect the front, the cell log and
/// effort counters.
pub fn run(tri: &TriObjectiveModel, subsolver: &dyn MonoSolver, params: &GridParams) -> GridOutcome {
    let start = Instant::now();
    let method = subsolver.name().to_string();
    let mut calls = 0usize;
    let mut log: Vec<CellLog> = Vec::new();

    let bounds = match estimate_bounds(tri, subsolver, &params.budget, &mut calls) {
        Some(b) => b,
        None => {
            return GridOutcome {
                front: Vec::new(),
                bounds: None,
                log,
                mono_calls: calls,
                wall_time_s: start.elapsed().as_secs_f64(),
                method,
            }
        }
    };

    let dg = params.grid.max(1);
    let r_env = bounds.range_env();
    let r_soc = bounds.range_soc();
    let step_env = r_env / dg as f64;
    let step_soc = r_soc / dg as f64;
    let env_degenerate = step_env <= 0.0;
    let soc_degenerate = step_soc <= 0.0;

    let mut raw_points: Vec<FrontPoint> = Vec::new();

    let mut gr_env = 0usize;
    let mut eps_env = bounds.upper[1];
    while gr_env < dg {
        let mut gr_soc = 0usize;
        let mut eps_soc = bounds.upper[2];
        while gr_soc < dg {
            let mop = build_mop(tri, &bounds, eps_env, eps_soc, params.eps);
            let cell_start = Instant::now();
            calls += 1;
            let outcome = subsolver.solve_mono(&mop, &params.budget);
            let cell_time = cell_start.elapsed().as_secs_f64();
            match outcome {
                MonoOutcome::Feasible { point, .. } => {
                    let jump = if soc_degenerate {
                        dg as u64
                    } else {
                        1 + (point.slack_soc / step_soc).floor().max(0.0).min(1e15) as u64
                    };
                    log.push(CellLog {
                        env_index: gr_env,
                        soc_index: gr_soc,
                        eps_env,
                        eps_soc,
                        time_s: cell_time,
                        outcome: CellOutcome::Feasible {
                            point: raw_points.len(),
                            slack_env: point.slack_env,
                            slack_soc: point.slack_soc,
                            jump,
                        },
                    });
                    raw_points.push(FrontPoint {
                        point: *point,
                        eps_env,
                        eps_soc,
                        cell: (gr_env, gr_soc),
                        method: method.clone(),
                        time_s: cell_time,
                    });
                    gr_soc = gr_soc.saturating_add(jump as usize);
                    eps_soc -= step_soc * jump as f64;
                }
                MonoOutcome::Infeasible => {
                    log.push(CellLog {
                        env_index: gr_env,
                        soc_index: gr_soc,
                        eps_env,
                        eps_soc,
                        time_s: cell_time,
                        outcome: CellOutcome::Infeasible,
                    });
                    gr_soc = dg;
                }
            }
        }
        gr_env += 1;
        if env_degenerate {
            break;
        }
        eps_env -= step_env;
    }

    let front = filter_dominated(raw_points, |p| p.point.minimized);
    GridOutcome {
        front,
        bounds: Some(bounds),
        log,
        mono_calls: calls,
        wall_time_s: start.elapsed().as_secs_f64(),
        method,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::mono::ExactSolver;
    use crate::instgen::{generate, GenConfig};
    use crate::ssc::{compile, validate_solution};

    fn tiny_tri() -> TriObjectiveModel {
        let mut cfg = GenConfig::default();
        cfg.seed = 1;
        cfg.suppliers = 1;
        cfg.factories = 1;
        cfg.warehouses = 1;
        cfg.customers = 1;
        cfg.airports = 0;
        cfg.seaports = 0;
        cfg.overseas_warehouses = 0;
        cfg.overseas_customers = 0;
        cfg.overseas_airports = 0;
        cfg.overseas_seaports = 0;
        cfg.prod_techs = 2;
        cfg.rem_techs = 2;
        cfg.trucks = 1;
        cfg.periods = 2;
        compile(&generate(&cfg).unwrap()).unwrap()
    }

    #[test]
    fn exact_grid_two_by_two() {
        let tri = tiny_tri();
        let params = GridParams { grid: 2, eps: 1e-3, budget: SolveBudget::default() };
        let out = run(&tri, &ExactSolver, &params);
        assert!(out.bounds.is_some());
        assert!(!out.front.is_empty());
        // Grid structure: at most grid^2 cells plus the three payoff runs.
        assert!(out.mono_calls <= 2 * 2 + 3);
        // No duplicate epsilon pairs among solved cells.
        let mut pairs: Vec<(u64, u64)> = out
            .log
            .iter()
            .map(|c| (c.eps_env.to_bits(), c.eps_soc.to_bits()))
            .collect();
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        assert_eq!(before, pairs.len());
        // Every returned point is feasible for the full model and respects
        // its epsilon thresholds.
        for fp in &out.front {
            let base_vars = tri.model.num_vars();
            let report = validate_solution(&tri.model, &fp.point.assignment[..base_vars].to_vec());
            assert!(report.is_feasible(), "{}", report.summary());
            assert!(fp.point.minimized[1] <= fp.eps_env + 1e-6);
            assert!(fp.point.minimized[2] <= fp.eps_soc + 1e-6);
        }
    }
}
