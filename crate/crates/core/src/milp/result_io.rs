//! JSON result files: how solutions come back from an external solver run
//! on an exported LP file.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::model::{MilpResult, Model, SolveStatus};

#[derive(Debug, Serialize, Deserialize)]
struct ResultFile {
    status: String,
    objective: f64,
    best_bound: f64,
    assignment: BTreeMap<String, f64>,
}

#[derive(Debug, Error)]
pub enum ResultIoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown status `{0}`")]
    UnknownStatus(String),
    #[error("assignment references unknown variable `{0}`")]
    UnknownVar(String),
}

fn status_str(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Feasible => "feasible",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::Unbounded => "unbounded",
        SolveStatus::TimeLimit => "time_limit",
    }
}

pub fn result_to_json(model: &Model, result: &MilpResult) -> String {
    let assignment: BTreeMap<String, f64> = if result.assignment.is_empty() {
        BTreeMap::new()
    } else {
        model
            .vars()
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.clone(), result.assignment[i]))
            .collect()
    };
    let file = ResultFile {
        status: status_str(result.status).to_string(),
        objective: result.objective,
        best_bound: result.best_bound,
        assignment,
    };
    serde_json::to_string_pretty(&file).expect("result serializes")
}

/// Variables missing from the file default to zero, the common convention
/// for sparse solver output.
pub fn result_from_json(model: &Model, text: &str) -> Result<MilpResult, ResultIoError> {
    let file: ResultFile = serde_json::from_str(text)?;
    let status = match file.status.as_str() {
        "optimal" => SolveStatus::Optimal,
        "feasible" => SolveStatus::Feasible,
        "infeasible" => SolveStatus::Infeasible,
        "unbounded" => SolveStatus::Unbounded,
        "time_limit" => SolveStatus::TimeLimit,
        other => return Err(ResultIoError::UnknownStatus(other.to_string())),
    };
    let assignment = if file.assignment.is_empty()
        && matches!(status, SolveStatus::Infeasible | SolveStatus::Unbounded)
    {
        Vec::new()
    } else {
        let mut x = vec![0.0; model.num_vars()];
        for (name, value) in &file.assignment {
            let id = model
                .var_by_name(name)
                .ok_or_else(|| ResultIoError::UnknownVar(name.clone()))?;
            x[id.index()] = *value;
        }
        x
    };
    let rel_gap = if file.objective.is_finite() {
        (file.objective - file.best_bound).max(0.0) / file.objective.abs().max(1.0)
    } else {
        0.0
    };
    Ok(MilpResult { status, assignment, objective: file.objective, best_bound: file.best_bound, rel_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::model::{LinObjective, VarDomain};
    use crate::milp::{solve_lp, LinConstraint};
    use crate::milp::{Block, Sense};

    #[test]
    fn round_trip_result() {
        let mut m = Model::new();
        let x = m.add_var("x", VarDomain::Continuous, 0.0, f64::INFINITY).unwrap();
        m.add_constraint(LinConstraint::new("c", vec![(x, 1.0)], Sense::Ge, 3.0, Block::Kept))
            .unwrap();
        let r = solve_lp(&m, &LinObjective::new(vec![(x, 1.0)], 0.0));
        let text = result_to_json(&m, &r);
        let back = result_from_json(&m, &text).unwrap();
        assert_eq!(back.status, r.status);
        assert!((back.objective - r.objective).abs() < 1e-12);
        assert_eq!(back.assignment, r.assignment);
    }

    #[test]
    fn sparse_assignment_defaults_to_zero() {
        let mut m = Model::new();
        m.add_var("a", VarDomain::Continuous, 0.0, 1.0).unwrap();
        m.add_var("b", VarDomain::Continuous, 0.0, 1.0).unwrap();
        let text = r#"{"status":"optimal","objective":1.0,"best_bound":1.0,"assignment":{"b":1.0}}"#;
        let r = result_from_json(&m, text).unwrap();
        assert_eq!(r.assignment, vec![0.0, 1.0]);
    }
}
