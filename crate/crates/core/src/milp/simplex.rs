//! Bounded-variable primal simplex, two phases, Bland's pivot rule.
//!
//! The tableau is dense; fine for desk-scale models. Bland's rule (always
//! pick the lowest eligible index) terminates without cycling and makes
//! every solve deterministic. Reduced costs and basic values drift as the
//! tableau is pivoted, so both are refreshed from the maintained
//! basis-inverse image periodically and before any optimality or
//! unboundedness verdict.

use super::model::{LinObjective, MilpResult, Model, SolveStatus};

const TOL_RC: f64 = 1e-9;
const TOL_PIV: f64 = 1e-9;
const TOL_RATIO_TIE: f64 = 1e-7;
const REFRESH_EVERY: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub(crate) struct LpOutcome {
    pub status: LpStatus,
    /// Values of the structural variables (model order). Empty unless Optimal.
    pub x: Vec<f64>,
    pub objective: f64,
}

/// Solve the LP relaxation of `model` under `objective`, treating every
/// variable as continuous within its bounds.
pub fn solve_lp(model: &Model, objective: &LinObjective) -> MilpResult {
    let out = solve_lp_with_bounds(model, objective, None);
    match out.status {
        LpStatus::Optimal => MilpResult {
            status: SolveStatus::Optimal,
            assignment: out.x,
            objective: out.objective,
            best_bound: out.objective,
            rel_gap: 0.0,
        },
        LpStatus::Infeasible => MilpResult::infeasible(),
        LpStatus::Unbounded => MilpResult::unbounded(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau {
    m: usize,
    ncols: usize,
    /// Rows of B^-1 A.
    t: Vec<Vec<f64>>,
    /// B^-1 b, pivoted alongside the rows.
    btilde: Vec<f64>,
    /// Pristine scaled rows and right-hand side, for refactorization.
    a0: Vec<Vec<f64>>,
    b0: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    /// Reduced-cost row for the active phase.
    z: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<VarState>,
    x: Vec<f64>,
    blocked: Vec<bool>,
}

enum StepOutcome {
    Unbounded,
    Pivoted,
}

impl Tableau {
    /// Rebuild the basis-inverse image from the pristine matrix: LU-factor
    /// the basis columns and solve for every tableau column. Resets all
    /// error accumulated by pivoting.
    fn refactorize(&mut self) {
        let m = self.m;
        if m == 0 {
            return;
        }
        let mut lu: Vec<Vec<f64>> = (0..m)
            .map(|i| self.basis.iter().map(|&k| self.a0[i][k]).collect())
            .collect();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut singular = false;
        for col in 0..m {
            let mut best = col;
            let mut best_mag = lu[col][col].abs();
            for r in (col + 1)..m {
                let mag = lu[r][col].abs();
                if mag > best_mag {
                    best = r;
                    best_mag = mag;
                }
            }
            if best_mag < 1e-12 {
                singular = true;
                break;
            }
            lu.swap(col, best);
            perm.swap(col, best);
            let inv = 1.0 / lu[col][col];
            for r in (col + 1)..m {
                let f = lu[r][col] * inv;
                lu[r][col] = f;
                if f != 0.0 {
                    for c in (col + 1)..m {
                        lu[r][c] -= f * lu[col][c];
                    }
                }
            }
        }
        if singular {
            // Numerically singular basis: keep the pivoted image.
            return;
        }
        let solve = |lu: &[Vec<f64>], perm: &[usize], rhs: &mut [f64]| {
            let mut y = vec![0.0; m];
            for i in 0..m {
                let mut v = rhs[perm[i]];
                for j in 0..i {
                    v -= lu[i][j] * y[j];
                }
                y[i] = v;
            }
            for i in (0..m).rev() {
                let mut v = y[i];
                for j in (i + 1)..m {
                    v -= lu[i][j] * rhs[j];
                }
                rhs[i] = v / lu[i][i];
            }
        };
        // One solve per tableau column, transposed through a scratch vector.
        let mut col = vec![0.0; m];
        for j in 0..self.ncols {
            for i in 0..m {
                col[i] = self.a0[i][j];
            }
            let mut rhs = col.clone();
            solve(&lu, &perm, &mut rhs);
            for i in 0..m {
                self.t[i][j] = rhs[i];
            }
        }
        let mut rhs = self.b0.clone();
        solve(&lu, &perm, &mut rhs);
        self.btilde.copy_from_slice(&rhs);
    }

    /// Recompute basic values and reduced costs from the maintained
    /// basis-inverse image; nonbasic values sit exactly on their bounds.
    /// `full` refactorizes that image from the pristine matrix first.
    fn refresh(&mut self, full: bool) {
        if full {
            self.refactorize();
        }
        for i in 0..self.m {
            let k = self.basis[i];
            let mut v = self.btilde[i];
            for j in 0..self.ncols {
                if self.state[j] != VarState::Basic && self.x[j] != 0.0 {
                    v -= self.t[i][j] * self.x[j];
                }
            }
            self.x[k] = v;
        }
        self.z.copy_from_slice(&self.cost);
        for i in 0..self.m {
            let cb = self.z[self.basis[i]];
            if cb != 0.0 {
                for j in 0..self.ncols {
                    self.z[j] -= cb * self.t[i][j];
                }
            }
        }
        // Basic columns are exactly zero in the cost row by definition.
        for &b in &self.basis {
            self.z[b] = 0.0;
        }
    }

    fn entering(&self) -> Option<usize> {
        (0..self.ncols).find(|&j| {
            !self.blocked[j]
                && self.upper[j] - self.lower[j] > 0.0
                && match self.state[j] {
                    VarState::AtLower => self.z[j] < -TOL_RC,
                    VarState::AtUpper => self.z[j] > TOL_RC,
                    VarState::Basic => false,
                }
        })
    }

    /// Step limit a basic row imposes on the entering move; `slack_relax`
    /// widens the binding bound, letting the caller trade a bounded amount
    /// of infeasibility for pivot quality (Harris ratio test).
    fn row_limit(&self, i: usize, dir: f64, q: usize, slack_relax: f64) -> Option<f64> {
        let delta = dir * self.t[i][q];
        let k = self.basis[i];
        if delta > TOL_PIV {
            Some(((self.x[k] - self.lower[k]) + slack_relax).max(0.0) / delta)
        } else if delta < -TOL_PIV {
            if self.upper[k].is_infinite() {
                None
            } else {
                Some(((self.upper[k] - self.x[k]) + slack_relax).max(0.0) / (-delta))
            }
        } else {
            None
        }
    }

    /// One ratio test + pivot for entering column `q`.
    ///
    /// Two-pass Harris ratio test: the first pass finds the smallest step
    /// with every binding bound relaxed by an absolute feasibility
    /// tolerance, the second picks the largest pivot element among rows
    /// whose strict limit fits under that relaxed step (index tie-break).
    /// Each pivot injects at most the tolerance into any basic bound, and
    /// the periodic refactorization clears what accumulates.
    fn step(&mut self, q: usize) -> StepOutcome {
        const DELTA_FEAS: f64 = 1e-9;
        let dir: f64 = if self.state[q] == VarState::AtLower { 1.0 } else { -1.0 };
        let flip_dist = self.upper[q] - self.lower[q]; // may be +inf
        let mut t_relaxed = flip_dist;
        for i in 0..self.m {
            if let Some(limit) = self.row_limit(i, dir, q, DELTA_FEAS) {
                t_relaxed = t_relaxed.min(limit);
            }
        }
        if t_relaxed.is_infinite() {
            return StepOutcome::Unbounded;
        }
        let mut leaving: Option<(usize, f64)> = None;
        for i in 0..self.m {
            if let Some(limit) = self.row_limit(i, dir, q, 0.0) {
                if limit <= t_relaxed {
                    let mag = self.t[i][q].abs();
                    let better = match leaving {
                        None => true,
                        Some((r, best_mag)) => {
                            mag > best_mag * (1.0 + 1e-12)
                                || ((mag - best_mag).abs() <= best_mag * 1e-12
                                    && self.basis[i] < self.basis[r])
                        }
                    };
                    if better {
                        leaving = Some((i, mag));
                    }
                }
            }
        }
        let leaving = match leaving {
            Some((r, _)) => {
                // A bound flip that stops before every basic limit wins.
                if flip_dist <= self.row_limit(r, dir, q, 0.0).unwrap_or(f64::INFINITY) {
                    None
                } else {
                    Some(r)
                }
            }
            None => None,
        };
        let step = match leaving {
            Some(r) => self.row_limit(r, dir, q, 0.0).unwrap_or(t_relaxed).max(0.0),
            None => flip_dist.max(0.0),
        };

        match leaving {
            None => {
                // Bound flip, basis unchanged.
                for i in 0..self.m {
                    self.x[self.basis[i]] -= dir * step * self.t[i][q];
                }
                self.x[q] = if self.state[q] == VarState::AtLower { self.upper[q] } else { self.lower[q] };
                self.state[q] =
                    if self.state[q] == VarState::AtLower { VarState::AtUpper } else { VarState::AtLower };
            }
            Some(r) => {
                let k = self.basis[r];
                for i in 0..self.m {
                    if i != r {
                        self.x[self.basis[i]] -= dir * step * self.t[i][q];
                    }
                }
                self.x[q] += dir * step;
                // Park the leaving variable exactly on the bound it hit.
                let delta = dir * self.t[r][q];
                if delta > 0.0 {
                    self.x[k] = self.lower[k];
                    self.state[k] = VarState::AtLower;
                } else {
                    self.x[k] = self.upper[k];
                    self.state[k] = VarState::AtUpper;
                }
                self.state[q] = VarState::Basic;
                self.basis[r] = q;

                let piv = self.t[r][q];
                let inv = 1.0 / piv;
                for j in 0..self.ncols {
                    self.t[r][j] *= inv;
                }
                self.btilde[r] *= inv;
                self.t[r][q] = 1.0;
                for i in 0..self.m {
                    if i != r {
                        let f = self.t[i][q];
                        if f != 0.0 {
                            for j in 0..self.ncols {
                                self.t[i][j] -= f * self.t[r][j];
                            }
                            self.t[i][q] = 0.0;
                            self.btilde[i] -= f * self.btilde[r];
                        }
                    }
                }
                let f = self.z[q];
                if f != 0.0 {
                    for j in 0..self.ncols {
                        self.z[j] -= f * self.t[r][j];
                    }
                    self.z[q] = 0.0;
                }
            }
        }
        StepOutcome::Pivoted
    }

    /// Run simplex until verified optimal (true) or unbounded (false).
    fn iterate(&mut self, max_iter: usize) -> bool {
        let debug = std::env::var("SSCOPT_SIMPLEX_DEBUG").is_ok();
        let mut pivots = 0usize;
        let mut since_refresh = 0usize;
        loop {
            if debug && pivots % 5000 == 0 && pivots > 0 {
                let obj: f64 = (0..self.ncols).map(|j| self.cost[j] * self.x[j]).sum();
                eprintln!("pivot {pivots}: phase obj {obj:.9}");
            }
            if pivots > max_iter {
                panic!("simplex exceeded {max_iter} iterations; numerical trouble");
            }
            let q = match self.entering() {
                Some(q) => q,
                None => {
                    // Verify against a refactorized tableau.
                    self.refresh(true);
                    since_refresh = 0;
                    match self.entering() {
                        Some(q) => q,
                        None => return true,
                    }
                }
            };
            match self.step(q) {
                StepOutcome::Pivoted => {
                    pivots += 1;
                    since_refresh += 1;
                    if since_refresh >= REFRESH_EVERY {
                        self.refresh(false);
                        since_refresh = 0;
                    }
                }
                StepOutcome::Unbounded => {
                    // A stale reduced cost can fake a ray: re-verify.
                    self.refresh(true);
                    since_refresh = 0;
                    let still = match self.state[q] {
                        VarState::AtLower => self.z[q] < -TOL_RC,
                        VarState::AtUpper => self.z[q] > TOL_RC,
                        VarState::Basic => false,
                    };
                    if still {
                        match self.step(q) {
                            StepOutcome::Unbounded => return false,
                            StepOutcome::Pivoted => {
                                pivots += 1;
                            }

                        }
                    }
                }

            }
        }
    }
}

pub(crate) fn solve_lp_with_bounds(
    model: &Model,
    objective: &LinObjective,
    bound_overrides: Option<&[(f64, f64)]>,
) -> LpOutcome {
    let nstruct = model.num_vars();
    let rows = model.constraints();
    let m = rows.len();

    let mut lower: Vec<f64> = Vec::with_capacity(nstruct);
    let mut upper: Vec<f64> = Vec::with_capacity(nstruct);
    for (i, v) in model.vars().iter().enumerate() {
        let (lo, up) = match bound_overrides {
            Some(b) => b[i],
            None => (v.lower, v.upper),
        };
        if lo > up {
            return LpOutcome { status: LpStatus::Infeasible, x: Vec::new(), objective: f64::INFINITY };
        }
        lower.push(lo);
        upper.push(up);
    }

    use super::model::Sense;
    let nslack = rows.iter().filter(|r| r.sense != Sense::Eq).count();
    let ncols_max = nstruct + nslack + m;
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    let mut slack_col_of_row: Vec<Option<usize>> = vec![None; m];

    for row in rows.iter() {
        let maxabs = row.coeffs.iter().map(|&(_, a)| a.abs()).fold(0.0, f64::max);
        let scale = if maxabs > 0.0 { 1.0 / maxabs } else { 1.0 };
        let mut dense = vec![0.0; ncols_max];
        for &(v, a) in &row.coeffs {
            dense[v.index()] += a * scale;
        }
        t.push(dense);
        rhs.push(row.rhs * scale);
    }

    let mut ncols = nstruct;
    for (i, row) in rows.iter().enumerate() {
        match row.sense {
            Sense::Le => {
                t[i][ncols] = 1.0;
                slack_col_of_row[i] = Some(ncols);
                ncols += 1;
            }
            Sense::Ge => {
                t[i][ncols] = -1.0;
                slack_col_of_row[i] = Some(ncols);
                ncols += 1;
            }
            Sense::Eq => {}
        }
    }
    lower.resize(ncols_max, 0.0);
    upper.resize(ncols_max, f64::INFINITY);

    // Start every structural variable at a finite bound.
    let mut x = vec![0.0; ncols_max];
    for j in 0..nstruct {
        x[j] = if lower[j].is_finite() { lower[j] } else { upper[j] };
    }

    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut state = vec![VarState::AtLower; ncols_max];
    let mut artificials: Vec<usize> = Vec::new();

    for i in 0..m {
        let residual = rhs[i] - (0..nstruct).map(|j| t[i][j] * x[j]).sum::<f64>();
        let slack_ok = match (rows[i].sense, slack_col_of_row[i]) {
            (Sense::Le, Some(s)) if residual >= 0.0 => Some((s, residual, false)),
            (Sense::Ge, Some(s)) if residual <= 0.0 => Some((s, -residual, true)),
            _ => None,
        };
        if let Some((s, value, flip)) = slack_ok {
            if flip {
                for v in t[i].iter_mut() {
                    *v = -*v;
                }
                rhs[i] = -rhs[i];
            }
            x[s] = value;
            state[s] = VarState::Basic;
            basis.push(s);
        } else {
            let mut value = residual;
            if value < 0.0 {
                for v in t[i].iter_mut() {
                    *v = -*v;
                }
                rhs[i] = -rhs[i];
                value = -value;
            }
            let a = ncols;
            ncols += 1;
            t[i][a] = 1.0;
            x[a] = value;
            state[a] = VarState::Basic;
            basis.push(a);
            artificials.push(a);
        }
    }
    for row in t.iter_mut() {
        row.truncate(ncols);
    }
    lower.truncate(ncols);
    upper.truncate(ncols);
    x.truncate(ncols);
    state.truncate(ncols);

    let max_iter = 800 * (m + ncols) + 50_000;
    let mut tab = Tableau {
        m,
        ncols,
        a0: t.clone(),
        b0: rhs.clone(),
        t,
        btilde: rhs.clone(),
        lower,
        upper,
        cost: vec![0.0; ncols],
        z: vec![0.0; ncols],
        basis,
        state,
        x,
        blocked: vec![false; ncols],
    };

    if !artificials.is_empty() {
        for &a in &artificials {
            tab.cost[a] = 1.0;
        }
        tab.refresh(false);
        if !tab.iterate(max_iter) {
            return LpOutcome { status: LpStatus::Unbounded, x: Vec::new(), objective: f64::NEG_INFINITY };
        }
        let art_sum: f64 = artificials.iter().map(|&a| tab.x[a]).sum();
        let bnorm = tab.btilde.iter().map(|b| b.abs()).fold(1.0, f64::max);
        if art_sum > 1e-7 * bnorm {
            return LpOutcome { status: LpStatus::Infeasible, x: Vec::new(), objective: f64::INFINITY };
        }
        for &a in &artificials {
            tab.upper[a] = 0.0;
            tab.blocked[a] = true;
            tab.cost[a] = 0.0;
        }
    }

    let dense_cost = objective.dense(nstruct);
    tab.cost[..nstruct].copy_from_slice(&dense_cost);
    for j in nstruct..tab.ncols {
        tab.cost[j] = 0.0;
    }
    tab.refresh(true);
    if !tab.iterate(max_iter) {
        return LpOutcome { status: LpStatus::Unbounded, x: Vec::new(), objective: f64::NEG_INFINITY };
    }

    let xs: Vec<f64> = tab.x[..nstruct].to_vec();
    let obj = objective.value(&xs);
    LpOutcome { status: LpStatus::Optimal, x: xs, objective: obj }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::model::{Block, LinConstraint, Sense, VarDomain};

    fn var(m: &mut Model, name: &str) -> super::super::model::VarId {
        m.add_var(name, VarDomain::Continuous, 0.0, f64::INFINITY).unwrap()
    }

    #[test]
    fn single_variable_bound() {
        // min x s.t. x >= 3, x >= 0
        let mut m = Model::new();
        let x = var(&mut m, "x");
        m.add_constraint(LinConstraint::new("c", vec![(x, 1.0)], Sense::Ge, 3.0, Block::Kept))
            .unwrap();
        let r = solve_lp(&m, &LinObjective::new(vec![(x, 1.0)], 0.0));
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.objective - 3.0).abs() < 1e-9);
        assert!((r.assignment[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn empty_region_is_infeasible() {
        // min x s.t. x <= -1, x >= 0
        let mut m = Model::new();
        let x = var(&mut m, "x");
        m.add_constraint(LinConstraint::new("c", vec![(x, 1.0)], Sense::Le, -1.0, Block::Kept))
            .unwrap();
        let r = solve_lp(&m, &LinObjective::new(vec![(x, 1.0)], 0.0));
        assert_eq!(r.status, SolveStatus::Infeasible);
    }

    #[test]
    fn two_var_vertex() {
        // min -x-y s.t. x+y <= 4, x <= 3; optimum -4 on the x+y=4 facet.
        let mut m = Model::new();
        let x = var(&mut m, "x");
        let y = var(&mut m, "y");
        m.add_constraint(LinConstraint::new("c1", vec![(x, 1.0), (y, 1.0)], Sense::Le, 4.0, Block::Kept))
            .unwrap();
        m.add_constraint(LinConstraint::new("c2", vec![(x, 1.0)], Sense::Le, 3.0, Block::Kept))
            .unwrap();
        let r = solve_lp(&m, &LinObjective::new(vec![(x, -1.0), (y, -1.0)], 0.0));
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.objective - (-4.0)).abs() < 1e-9);
    }

    #[test]
    fn unbounded_detected() {
        let mut m = Model::new();
        let x = var(&mut m, "x");
        let y = var(&mut m, "y");
        m.add_constraint(LinConstraint::new("c1", vec![(x, 1.0), (y, -1.0)], Sense::Le, 1.0, Block::Kept))
            .unwrap();
        let r = solve_lp(&m, &LinObjective::new(vec![(y, -1.0)], 0.0));
        assert_eq!(r.status, SolveStatus::Unbounded);
    }

    #[test]
    fn equality_and_upper_bounds() {
        // min 2a + b s.t. a + b = 5, a <= 3, b <= 4: b fills to 4, a = 1.
        let mut m = Model::new();
        let a = m.add_var("a", VarDomain::Continuous, 0.0, 3.0).unwrap();
        let b = m.add_var("b", VarDomain::Continuous, 0.0, 4.0).unwrap();
        m.add_constraint(LinConstraint::new("c", vec![(a, 1.0), (b, 1.0)], Sense::Eq, 5.0, Block::Kept))
            .unwrap();
        let r = solve_lp(&m, &LinObjective::new(vec![(a, 2.0), (b, 1.0)], 0.0));
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.objective - 6.0).abs() < 1e-9, "objective {}", r.objective);
        assert!((r.assignment[0] - 1.0).abs() < 1e-9);
        assert!((r.assignment[1] - 4.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_rows_do_not_cycle() {
        // Several redundant rows through the same vertex.
        let mut m = Model::new();
        let x = var(&mut m, "x");
        let y = var(&mut m, "y");
        for (i, c) in [(1.0, 1.0), (2.0, 2.0), (0.5, 0.5)].iter().enumerate() {
            m.add_constraint(LinConstraint::new(
                format!("c{i}"),
                vec![(x, c.0), (y, c.1)],
                Sense::Le,
                c.0 * 4.0,
                Block::Kept,
            ))
            .unwrap();
        }
        let r = solve_lp(&m, &LinObjective::new(vec![(x, -1.0), (y, -1.0)], 0.0));
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.objective - (-4.0)).abs() < 1e-9);
    }
}
