//! Feasibility checker: every violated row, bound and integrality breach
//! for a candidate assignment, with the violation amounts.

use crate::milp::{Model, Sense, TOL_FEAS, TOL_INT};

#[derive(Debug, Clone)]
pub struct Violation {
    pub label: String,
    pub lhs: f64,
    pub sense: Sense,
    pub rhs: f64,
    pub amount: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ViolationReport {
    pub rows: Vec<Violation>,
    pub bounds: Vec<(String, f64)>,
    pub integrality: Vec<(String, f64)>,
}

impl ViolationReport {
    pub fn is_feasible(&self) -> bool {
        self.rows.is_empty() && self.bounds.is_empty() && self.integrality.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.is_feasible() {
            return "feasible".to_string();
        }
        let mut s = String::new();
        for v in &self.rows {
            s.push_str(&format!("row {}: violated by {:.3e}\n", v.label, v.amount));
        }
        for (name, by) in &self.bounds {
            s.push_str(&format!("bound {}: out by {:.3e}\n", name, by));
        }
        for (name, frac) in &self.integrality {
            s.push_str(&format!("integrality {}: off by {:.3e}\n", name, frac));
        }
        s
    }
}

/// Check `x` against every row and variable of `model`. The report is empty
/// exactly when the assignment is feasible within the shared tolerance.
pub fn validate_solution(model: &Model, x: &[f64]) -> ViolationReport {
    let mut report = ViolationReport::default();
    assert_eq!(x.len(), model.num_vars(), "assignment must cover all variables");
    for row in model.constraints() {
        let violation = row.violation(x);
        if violation > TOL_FEAS {
            report.rows.push(Violation {
                label: row.label.clone(),
                lhs: row.lhs(x),
                sense: row.sense,
                rhs: row.rhs,
                amount: violation,
            });
        }
    }
    for (i, v) in model.vars().iter().enumerate() {
        let val = x[i];
        let out = (v.lower - val).max(val - v.upper).max(0.0);
        if out > TOL_FEAS {
            report.bounds.push((v.name.clone(), out));
        }
        if v.is_discrete() {
            let frac = (val - val.round()).abs();
            if frac > TOL_INT {
                report.integrality.push((v.name.clone(), frac));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::{generate, GenConfig};
    use crate::ssc::compile;

    fn tiny_cfg(seed: u64) -> GenConfig {
        let mut cfg = GenConfig::default();
        cfg.seed = seed;
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
        cfg.trucks = 1;
        cfg.periods = 2;
        cfg
    }

    #[test]
    fn all_zero_feasible_on_zero_demand() {
        let mut cfg = tiny_cfg(4);
        cfg.lbdc = 0.0;
        cfg.ubdc = 0.0;
        let inst = generate(&cfg).unwrap();
        let tri = compile(&inst).unwrap();
        let zero = vec![0.0; tri.model.num_vars()];
        let report = validate_solution(&tri.model, &zero);
        assert!(report.is_feasible(), "{}", report.summary());
    }

    #[test]
    fn negative_flow_or_imbalance_detected() {
        let inst = generate(&tiny_cfg(4)).unwrap();
        let tri = compile(&inst).unwrap();
        let mut x = vec![0.0; tri.model.num_vars()];
        // Positive demand with zero flow violates the demand rows.
        let report = validate_solution(&tri.model, &x);
        assert!(!report.is_feasible());
        assert!(report.rows.iter().any(|v| v.label.starts_with("reconstructed_demand_")));
        // A negative flow breaks its lower bound.
        let some_flow = tri.meta.flow_vars[0];
        x[some_flow.index()] = -1.0;
        let report = validate_solution(&tri.model, &x);
        assert!(report.bounds.iter().any(|(name, _)| name.starts_with("X_")));
    }

    #[test]
    fn hub_imbalance_detected() {
        let mut cfg = tiny_cfg(4);
        cfg.airports = 2;
        cfg.seaports = 0;
        cfg.overseas_airports = 0;
        let inst = generate(&cfg).unwrap();
        let tri = compile(&inst).unwrap();
        let mut x = vec![0.0; tri.model.num_vars()];
        // Push 5 units into an airport and only 4 out.
        let hub = inst.airports().start;
        let mut into = None;
        let mut out = None;
        for (&(m, _a, i, j, _t), &id) in &tri.catalog.flow {
            if inst.final_items().contains(&m) {
                if j == hub && into.is_none() {
                    into = Some(id);
                }
                if i == hub && out.is_none() {
                    out = Some(id);
                }
            }
        }
        x[into.unwrap().index()] = 5.0;
        x[out.unwrap().index()] = 4.0;
        let report = validate_solution(&tri.model, &x);
        assert!(report.rows.iter().any(|v| v.label.starts_with("reconstructed_hub_balance_")));
    }
}
