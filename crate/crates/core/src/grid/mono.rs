//! The mono-objective subproblem and the subsolver interface shared by the
//! exact solver and the two matheuristics.

use std::time::{Duration, Instant};

use crate::milp::{
    solve_milp, LinConstraint, LinObjective, Model, Sense, SolveParams, VarId, Block,
};
use crate::ssc::build::{SolverMeta, TriObjectiveModel};

/// Which function a mono problem optimizes. The aggregate is the economic
/// function augmented with the epsilon-slack reward term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    Economic,
    Environmental,
    Social,
    Aggregate,
}

/// One epsilon-constrained (or payoff) subproblem, ready for a subsolver.
#[derive(Debug, Clone)]
pub struct MonoProblem {
    pub model: Model,
    pub objective: LinObjective,
    pub kind: ObjectiveKind,
    /// The three original objectives in minimization sense, over the base
    /// variables; used to evaluate solution points.
    pub objectives: [LinObjective; 3],
    pub meta: SolverMeta,
    pub eps: f64,
    pub eps_env: Option<f64>,
    pub eps_soc: Option<f64>,
    pub slack_env: Option<VarId>,
    pub slack_soc: Option<VarId>,
    pub range_env: f64,
    pub range_soc: f64,
}

/// A feasible assignment with its objective values in both senses.
#[derive(Debug, Clone)]
pub struct SolutionPoint {
    pub assignment: Vec<f64>,
    /// (f_eco, f_env, f_soc), minimization sense.
    pub minimized: [f64; 3],
    /// (f'_eco, f'_env, f'_soc), original sense.
    pub primed: [f64; 3],
    /// Value of the subproblem objective at this point.
    pub aggregate: f64,
    pub slack_env: f64,
    pub slack_soc: f64,
}

impl MonoProblem {
    /// Wrap an assignment of this problem's model into a solution point.
    pub fn point(&self, assignment: Vec<f64>) -> SolutionPoint {
        let minimized = [
            self.objectives[0].value(&assignment),
            self.objectives[1].value(&assignment),
            self.objectives[2].value(&assignment),
        ];
        let aggregate = self.objective.value(&assignment);
        let slack_env = match self.slack_env {
            Some(l) => assignment[l.index()],
            None => self.eps_env.map_or(0.0, |e| e - minimized[1]),
        };
        let slack_soc = match self.slack_soc {
            Some(l) => assignment[l.index()],
            None => self.eps_soc.map_or(0.0, |e| e - minimized[2]),
        };
        SolutionPoint {
            minimized,
            primed: [-minimized[0], minimized[1], -minimized[2]],
            aggregate,
            slack_env,
            slack_soc,
            assignment,
        }
    }

    /// Payoff subproblem: one objective, no epsilon rows.
    pub fn payoff(tri: &TriObjectiveModel, which: usize) -> MonoProblem {
        let kind = match which {
            0 => ObjectiveKind::Economic,
            1 => ObjectiveKind::Environmental,
            _ => ObjectiveKind::Social,
        };
        MonoProblem {
            model: tri.model.clone(),
            objective: tri.objectives[which].clone(),
            kind,
            objectives: tri.objectives.clone(),
            meta: tri.meta.clone(),
            eps: 0.0,
            eps_env: None,
            eps_soc: None,
            slack_env: None,
            slack_soc: None,
            range_env: 0.0,
            range_soc: 0.0,
        }
    }
}

/// Bounds estimated from the payoff table.
#[derive(Debug, Clone, Copy)]
pub struct PayoffBounds {
    /// Best (lowest) value seen or proven per objective, minimization sense.
    pub lower: [f64; 3],
    /// Worst value among the payoff incumbents per objective.
    pub upper: [f64; 3],
}

impl PayoffBounds {
    pub fn range_env(&self) -> f64 {
        (self.upper[1] - self.lower[1]).max(0.0)
    }

    pub fn range_soc(&self) -> f64 {
        (self.upper[2] - self.lower[2]).max(0.0)
    }
}

/// Degenerate ranges collapse that axis to a single cell and drop its
/// slack term from the aggregate objective.
const RANGE_TINY: f64 = 1e-9;

/// Assemble the epsilon-constrained subproblem: slack variables, the two
/// equality rows appended to the kept block, and the augmented objective
///   f_eco - eps (l_env / r_env + 0.1 l_soc / r_soc).
pub fn build_mop(
    tri: &TriObjectiveModel,
    bounds: &PayoffBounds,
    eps_env: f64,
    eps_soc: f64,
    eps: f64,
) -> MonoProblem {
    let mut model = tri.model.clone();
    let mut objective = tri.objectives[0].clone();
    let r_env = bounds.range_env();
    let r_soc = bounds.range_soc();

    let mut slack_env = None;
    if r_env > RANGE_TINY {
        let l = model
            .add_var("l_env", crate::milp::VarDomain::Continuous, 0.0, f64::INFINITY)
            .expect("fresh slack name");
        let mut coeffs = tri.objectives[1].coeffs.clone();
        coeffs.push((l, 1.0));
        model
            .add_constraint(LinConstraint::new(
                "eps_env",
                coeffs,
                Sense::Eq,
                eps_env - tri.objectives[1].constant,
                Block::Kept,
            ))
            .expect("fresh eps row");
        objective = objective.add_scaled(&LinObjective::new(vec![(l, 1.0)], 0.0), -eps / r_env);
        slack_env = Some(l);
    }
    let mut slack_soc = None;
    if r_soc > RANGE_TINY {
        let l = model
            .add_var("l_soc", crate::milp::VarDomain::Continuous, 0.0, f64::INFINITY)
            .expect("fresh slack name");
        let mut coeffs = tri.objectives[2].coeffs.clone();
        coeffs.push((l, 1.0));
        model
            .add_constraint(LinConstraint::new(
                "eps_soc",
                coeffs,
                Sense::Eq,
                eps_soc - tri.objectives[2].constant,
                Block::Kept,
            ))
            .expect("fresh eps row");
        objective = objective.add_scaled(&LinObjective::new(vec![(l, 1.0)], 0.0), -0.1 * eps / r_soc);
        slack_soc = Some(l);
    }

    MonoProblem {
        model,
        objective,
        kind: ObjectiveKind::Aggregate,
        objectives: tri.objectives.clone(),
        meta: tri.meta.clone(),
        eps,
        eps_env: Some(eps_env),
        eps_soc: Some(eps_soc),
        slack_env,
        slack_soc,
        range_env: r_env,
        range_soc: r_soc,
    }
}

/// Per-subproblem solve budget.
#[derive(Debug, Clone, Copy)]
pub struct SolveBudget {
    pub rel_gap: f64,
    pub time_limit: Duration,
}

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget { rel_gap: 0.01, time_limit: Duration::from_secs(60) }
    }
}

impl SolveBudget {
    pub fn milp_params(&self, deadline: Instant) -> SolveParams {
        let remaining = deadline.saturating_duration_since(Instant::now());
        SolveParams { rel_gap: self.rel_gap, time_limit: Some(remaining.max(Duration::from_millis(50))) }
    }
}

#[derive(Debug, Clone)]
pub enum MonoOutcome {
    Feasible {
        point: Box<SolutionPoint>,
        /// The subsolver's lower bound on the subproblem objective: the
        /// solver bound in exact mode, the relaxation bound in heuristic
        /// modes.
        lower_bound: f64,
    },
    Infeasible,
}

pub trait MonoSolver {
    fn name(&self) -> &'static str;
    fn solve_mono(&self, problem: &MonoProblem, budget: &SolveBudget) -> MonoOutcome;
}

/// The exact subsolver: branch-and-bound on the untouched subproblem.
#[derive(Debug, Default, Clone)]
pub struct ExactSolver;

impl MonoSolver for ExactSolver {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn solve_mono(&self, problem: &MonoProblem, budget: &SolveBudget) -> MonoOutcome {
        let params = SolveParams { rel_gap: budget.rel_gap, time_limit: Some(budget.time_limit) };
        let r = solve_milp(&problem.model, &problem.objective, &params);
        if r.has_point() {
            MonoOutcome::Feasible { point: Box::new(problem.point(r.assignment)), lower_bound: r.best_bound }
        } else {
            MonoOutcome::Infeasible
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::{generate, GenConfig};
    use crate::ssc::compile;

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
    fn zero_eps_gives_plain_constrained_problem() {
        let tri = tiny_tri();
        let bounds = PayoffBounds { lower: [0.0, 0.0, -10.0], upper: [1.0, 5.0, 0.0] };
        let mop = build_mop(&tri, &bounds, 5.0, 0.0, 0.0);
        // eps = 0: the objective equals the economic objective on base vars.
        assert_eq!(mop.objective.coeffs, tri.objectives[0].coeffs);
        assert!(mop.slack_env.is_some());
        assert!(mop.slack_soc.is_some());
    }

    #[test]
    fn degenerate_range_drops_axis() {
        let tri = tiny_tri();
        let bounds = PayoffBounds { lower: [0.0, 3.0, -10.0], upper: [1.0, 3.0, 0.0] };
        let mop = build_mop(&tri, &bounds, 3.0, 0.0, 1e-3);
        assert!(mop.slack_env.is_none());
        assert!(mop.slack_soc.is_some());
    }

    #[test]
    fn slack_equals_full_headroom_at_upper_epsilon() {
        let tri = tiny_tri();
        let bounds = PayoffBounds { lower: [0.0, 0.0, -10.0], upper: [1.0, 5.0, 0.0] };
        let mop = build_mop(&tri, &bounds, 5.0, 0.0, 1e-3);
        // For any assignment satisfying the eps rows, l_env = eps_env - f_env.
        let mut x = vec![0.0; mop.model.num_vars()];
        let f_env = mop.objectives[1].value(&x);
        x[mop.slack_env.unwrap().index()] = 5.0 - f_env;
        let p = mop.point(x);
        assert!((p.slack_env - (5.0 - f_env)).abs() < 1e-12);
    }
}
