//! Best-bound branch-and-bound on top of the simplex relaxation.
//!
//! Node selection is best-bound (lowest relaxation value first), branching
//! picks the most fractional discrete variable with ties broken by the
//! lowest variable id, so repeated solves of the same model are identical.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use super::model::{LinObjective, MilpResult, Model, SolveStatus, VarId};
use super::simplex::{solve_lp_with_bounds, LpStatus};
use super::TOL_INT;

#[derive(Debug, Clone)]
pub struct SolveParams {
    /// Relative optimality gap at which the search stops.
    pub rel_gap: f64,
    pub time_limit: Option<Duration>,
}

impl Default for SolveParams {
    fn default() -> Self {
        // 1% mirrors the usual MIP-solver stopping rule for this problem family.
        SolveParams { rel_gap: 0.01, time_limit: None }
    }
}

impl SolveParams {
    pub fn exact() -> Self {
        SolveParams { rel_gap: 1e-9, time_limit: None }
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }
}

struct Node {
    bound: f64,
    id: u64,
    /// Bound tightenings accumulated from the root.
    tightenings: Vec<(VarId, f64, f64)>,
    x: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.id == other.id
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; reverse so the lowest bound pops first.
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.id.cmp(&self.id))
    }
}

fn rel_gap_of(incumbent: f64, bound: f64) -> f64 {
    ((incumbent - bound).max(0.0)) / incumbent.abs().max(1.0)
}

/// Solve `model` to the requested relative gap. Models without discrete
/// variables reduce to a single simplex solve.
pub fn solve_milp(model: &Model, objective: &LinObjective, params: &SolveParams) -> MilpResult {
    let discrete: Vec<VarId> = model.discrete_vars().collect();
    if discrete.is_empty() {
        return super::simplex::solve_lp(model, objective);
    }

    let start = Instant::now();
    let out_of_time = |start: &Instant| match params.time_limit {
        Some(limit) => start.elapsed() >= limit,
        None => false,
    };

    let base_bounds: Vec<(f64, f64)> = model.vars().iter().map(|v| (v.lower, v.upper)).collect();
    let materialize = |tightenings: &[(VarId, f64, f64)]| {
        let mut b = base_bounds.clone();
        for &(v, lo, hi) in tightenings {
            let e = &mut b[v.index()];
            e.0 = e.0.max(lo);
            e.1 = e.1.min(hi);
        }
        b
    };

    let root = solve_lp_with_bounds(model, objective, Some(&base_bounds));
    match root.status {
        LpStatus::Infeasible => return MilpResult::infeasible(),
        LpStatus::Unbounded => return MilpResult::unbounded(),
        LpStatus::Optimal => {}
    }

    // Rounding repair: binaries snap to the nearest value (ceiling them can
    // overfill at-most-one rows), general integers round up so capacity-type
    // rows keep holding, the continuous remainder re-solves. Cheap
    // incumbents keep best-bound search from wandering without a pruning
    // reference.
    let try_repair = |x: &[f64], node_bounds: &[(f64, f64)]| -> Option<(f64, Vec<f64>)> {
        let mut bounds = node_bounds.to_vec();
        for &v in &discrete {
            let (lo, hi) = bounds[v.index()];
            let val = match model.var(v).domain {
                super::model::VarDomain::Binary => x[v.index()].round().clamp(lo, hi),
                _ => (x[v.index()] - TOL_INT).ceil().clamp(lo, hi),
            };
            bounds[v.index()] = (val, val);
        }
        let sol = solve_lp_with_bounds(model, objective, Some(&bounds));
        match sol.status {
            LpStatus::Optimal => Some((sol.objective, sol.x)),
            _ => None,
        }
    };

    let mut heap: BinaryHeap<Node> = BinaryHeap::new();
    let mut next_id: u64 = 0;
    heap.push(Node { bound: root.objective, id: next_id, tightenings: Vec::new(), x: root.x });
    next_id += 1;

    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut popped: u64 = 0;
    let mut repair_tries: u64 = 0;
    let mut repair_ok: u64 = 0;
    let mut repair_best = f64::INFINITY;
    // Lowest bound ever discarded; the proven bound can not be better than it.
    let mut pruned_floor = f64::INFINITY;
    let mut timed_out = false;
    let mut last_bound = root.objective;

    while let Some(node) = heap.pop() {
        last_bound = node.bound;
        if out_of_time(&start) {
            timed_out = true;
            heap.push(node);
            break;
        }
        if let Some((inc_obj, _)) = incumbent {
            if rel_gap_of(inc_obj, node.bound) <= params.rel_gap {
                heap.push(node);
                break;
            }
        }
        popped += 1;
        if incumbent.is_none() || popped % 16 == 0 {
            let node_bounds = materialize(&node.tightenings);
            repair_tries += 1;
            if let Some((obj, x)) = try_repair(&node.x, &node_bounds) {
                repair_ok += 1;
                repair_best = repair_best.min(obj);
                if std::env::var("SSCOPT_BB_DEBUG").is_ok() {
                    let viol = model.max_violation(&x);
                    if viol > 1e-5 {
                        eprintln!("bb: repair incumbent violates rows by {viol:.4e}");
                        let dump = std::path::Path::new("/tmp/bb_repair_fail.lp");
                        if !dump.exists() {
                            let mut bounded = model.clone();
                            let mut bounds = node_bounds.clone();
                            for &v in &discrete {
                                let (lo, hi) = bounds[v.index()];
                                let val = match model.var(v).domain {
                                    super::model::VarDomain::Binary => x[v.index()].round().clamp(lo, hi),
                                    _ => (x[v.index()] - TOL_INT).ceil().clamp(lo, hi),
                                };
                                bounds[v.index()] = (val, val);
                            }
                            for (i, &(lo, hi)) in bounds.iter().enumerate() {
                                bounded.set_bounds(super::model::VarId(i as u32), lo, hi);
                            }
                            std::fs::write(dump, super::lp_format::to_lp_string(&bounded, objective)).ok();
                            eprintln!("bb: dumped failing repair LP");
                        }
                    }
                }
                match &incumbent {
                    Some((best, _)) if obj >= *best - 1e-12 => {}
                    _ => incumbent = Some((obj, x)),
                }
            }
        }

        // Most fractional discrete variable; ties to the lowest id. Binaries
        // take priority over general integers: trip and fleet counts sit at
        // structurally fractional values whose branches barely move the
        // bound, while the binaries decide the combinatorial structure.
        let mut branch_var: Option<(VarId, f64)> = None;
        let mut best_score = f64::INFINITY;
        let mut best_is_binary = false;
        for &v in &discrete {
            let val = node.x[v.index()];
            let frac_dist = (val - val.round()).abs();
            if frac_dist > TOL_INT {
                let is_binary = model.var(v).domain == super::model::VarDomain::Binary;
                if best_is_binary && !is_binary {
                    continue;
                }
                let score = (frac_dist - 0.5).abs();
                if (is_binary && !best_is_binary) || score < best_score - 1e-12 {
                    best_score = score;
                    branch_var = Some((v, val));
                    best_is_binary = is_binary;
                }
            }
        }

        let (v, val) = match branch_var {
            None => {
                let obj = objective.value(&node.x);
                if std::env::var("SSCOPT_BB_DEBUG").is_ok() {
                    let viol = model.max_violation(&node.x);
                    if viol > 1e-5 {
                        eprintln!("bb: integral node violates rows by {viol:.4e}");
                    }
                }
                match &incumbent {
                    Some((best, _)) if obj >= *best - 1e-12 => {}
                    _ => incumbent = Some((obj, node.x)),
                }
                continue;
            }
            Some(p) => p,
        };

        let prune_cut = incumbent
            .as_ref()
            .map(|(inc, _)| inc - params.rel_gap * inc.abs().max(1.0))
            .unwrap_or(f64::INFINITY);

        let children = [
            (v, f64::NEG_INFINITY, val.floor()),
            (v, val.ceil(), f64::INFINITY),
        ];
        for &(bv, lo, hi) in &children {
            let mut tight = node.tightenings.clone();
            tight.push((bv, lo, hi));
            let bounds = materialize(&tight);
            if bounds[bv.index()].0 > bounds[bv.index()].1 {
                continue;
            }
            let sol = solve_lp_with_bounds(model, objective, Some(&bounds));
            match sol.status {
                LpStatus::Infeasible => continue,
                LpStatus::Unbounded => return MilpResult::unbounded(),
                LpStatus::Optimal => {}
            }
            let bound = sol.objective.max(node.bound);
            if bound >= prune_cut {
                pruned_floor = pruned_floor.min(bound);
                continue;
            }
            heap.push(Node { bound, id: next_id, tightenings: tight, x: sol.x });
            next_id += 1;
        }
    }

    if std::env::var("SSCOPT_BB_DEBUG").is_ok() {
        eprintln!(
            "bb: {} nodes popped, heap {}, incumbent {:?}, last bound {:.4}, repairs {}/{} best {:.4}, elapsed {:?}",
            popped,
            heap.len(),
            incumbent.as_ref().map(|(o, _)| *o),
            last_bound,
            repair_ok,
            repair_tries,
            repair_best,
            start.elapsed()
        );
    }
    let open_floor = heap.peek().map(|n| n.bound).unwrap_or(f64::INFINITY);
    match incumbent {
        Some((obj, x)) => {
            let best_bound = obj.min(pruned_floor).min(open_floor).min(if timed_out { last_bound } else { f64::INFINITY });
            let gap = rel_gap_of(obj, best_bound);
            let status = if timed_out && gap > params.rel_gap {
                SolveStatus::TimeLimit
            } else {
                SolveStatus::Optimal
            };
            MilpResult { status, assignment: x, objective: obj, best_bound, rel_gap: gap }
        }
        None => {
            if timed_out {
                MilpResult {
                    status: SolveStatus::TimeLimit,
                    assignment: Vec::new(),
                    objective: f64::INFINITY,
                    best_bound: last_bound,
                    rel_gap: f64::INFINITY,
                }
            } else {
                MilpResult::infeasible()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::model::{Block, LinConstraint, Sense, VarDomain};
    use crate::milp::solve_lp;

    #[test]
    fn pure_lp_matches_solve_lp() {
        let mut m = Model::new();
        let x = m.add_var("x", VarDomain::Continuous, 0.0, f64::INFINITY).unwrap();
        let y = m.add_var("y", VarDomain::Continuous, 0.0, f64::INFINITY).unwrap();
        m.add_constraint(LinConstraint::new("c", vec![(x, 1.0), (y, 2.0)], Sense::Ge, 3.0, Block::Kept))
            .unwrap();
        let obj = LinObjective::new(vec![(x, 1.0), (y, 1.0)], 0.0);
        let lp = solve_lp(&m, &obj);
        let mip = solve_milp(&m, &obj, &SolveParams::exact());
        assert_eq!(lp.status, SolveStatus::Optimal);
        assert_eq!(mip.status, SolveStatus::Optimal);
        assert!((lp.objective - mip.objective).abs() < 1e-9);
    }

    #[test]
    fn two_binary_knapsack() {
        // min -(3a+4b) s.t. 2a+3b <= 4, a,b binary: best is b=1 -> -4.
        let mut m = Model::new();
        let a = m.add_var("a", VarDomain::Binary, 0.0, 1.0).unwrap();
        let b = m.add_var("b", VarDomain::Binary, 0.0, 1.0).unwrap();
        m.add_constraint(LinConstraint::new("c", vec![(a, 2.0), (b, 3.0)], Sense::Le, 4.0, Block::Kept))
            .unwrap();
        let obj = LinObjective::new(vec![(a, -3.0), (b, -4.0)], 0.0);
        let r = solve_milp(&m, &obj, &SolveParams::exact());
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.objective - (-4.0)).abs() < 1e-9);
        assert!((r.assignment[a.index()] - 0.0).abs() < 1e-6);
        assert!((r.assignment[b.index()] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn integer_rounding_forced() {
        // min q s.t. 5q >= 8, q integer nonneg -> q = 2.
        let mut m = Model::new();
        let q = m.add_var("q", VarDomain::Integer, 0.0, f64::INFINITY).unwrap();
        m.add_constraint(LinConstraint::new("c", vec![(q, 5.0)], Sense::Ge, 8.0, Block::Kept))
            .unwrap();
        let r = solve_milp(&m, &LinObjective::new(vec![(q, 1.0)], 0.0), &SolveParams::exact());
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.objective - 2.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_integer_model() {
        let mut m = Model::new();
        let a = m.add_var("a", VarDomain::Binary, 0.0, 1.0).unwrap();
        m.add_constraint(LinConstraint::new("c", vec![(a, 1.0)], Sense::Ge, 2.0, Block::Kept))
            .unwrap();
        let r = solve_milp(&m, &LinObjective::new(vec![(a, 1.0)], 0.0), &SolveParams::exact());
        assert_eq!(r.status, SolveStatus::Infeasible);
    }

    #[test]
    fn relaxation_bounds_milp_from_below() {
        let mut m = Model::new();
        let a = m.add_var("a", VarDomain::Binary, 0.0, 1.0).unwrap();
        let b = m.add_var("b", VarDomain::Binary, 0.0, 1.0).unwrap();
        m.add_constraint(LinConstraint::new("c", vec![(a, 2.0), (b, 3.0)], Sense::Le, 4.0, Block::Kept))
            .unwrap();
        let obj = LinObjective::new(vec![(a, -3.0), (b, -4.0)], 0.0);
        let relaxed = solve_lp(&m.relax_integrality(), &obj);
        let exact = solve_milp(&m, &obj, &SolveParams::exact());
        assert!(relaxed.objective <= exact.objective + 1e-9);
    }
}
