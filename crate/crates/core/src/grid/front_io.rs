//! Front exports: a CSV with one row per point and a JSON twin carrying
//! the full variable assignments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::milp::Model;

use super::run::GridOutcome;

pub const FRONT_CSV_HEADER: &str = "id,f_eco_prime,f_env_prime,f_soc_prime,eps_env,eps_soc,method,time_s";

pub fn front_to_csv(outcome: &GridOutcome) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", FRONT_CSV_HEADER);
    for (id, fp) in outcome.front.iter().enumerate() {
        let p = &fp.point;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            id, p.primed[0], p.primed[1], p.primed[2], fp.eps_env, fp.eps_soc, fp.method, fp.time_s
        );
    }
    s
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrontPointDoc {
    pub id: usize,
    pub f_eco_prime: f64,
    pub f_env_prime: f64,
    pub f_soc_prime: f64,
    pub eps_env: f64,
    pub eps_soc: f64,
    pub time_s: f64,
    /// Base-model variable values by name; zeros omitted.
    pub assignment: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrontDoc {
    pub method: String,
    pub mono_calls: usize,
    pub wall_time_s: f64,
    pub points: Vec<FrontPointDoc>,
}

impl FrontDoc {
    /// Objective triples in minimization sense (economic and social flip).
    pub fn minimized(&self) -> Vec<[f64; 3]> {
        self.points
            .iter()
            .map(|p| [-p.f_eco_prime, p.f_env_prime, -p.f_soc_prime])
            .collect()
    }
}

/// `base` is the model the assignments refer to; epsilon slack variables
/// added per cell are not part of it and are reported via the eps columns.
pub fn front_to_doc(base: &Model, outcome: &GridOutcome) -> FrontDoc {
    let points = outcome
        .front
        .iter()
        .enumerate()
        .map(|(id, fp)| {
            let p = &fp.point;
            let assignment: BTreeMap<String, f64> = base
                .vars()
                .iter()
                .enumerate()
                .filter(|&(i, _)| p.assignment[i] != 0.0)
                .map(|(i, v)| (v.name.clone(), p.assignment[i]))
                .collect();
            FrontPointDoc {
                id,
                f_eco_prime: p.primed[0],
                f_env_prime: p.primed[1],
                f_soc_prime: p.primed[2],
                eps_env: fp.eps_env,
                eps_soc: fp.eps_soc,
                time_s: fp.time_s,
                assignment,
            }
        })
        .collect();
    FrontDoc {
        method: outcome.method.clone(),
        mono_calls: outcome.mono_calls,
        wall_time_s: outcome.wall_time_s,
        points,
    }
}

pub fn front_to_json(base: &Model, outcome: &GridOutcome) -> String {
    serde_json::to_string_pretty(&front_to_doc(base, outcome)).expect("front serializes")
}

pub fn front_from_json(text: &str) -> Result<FrontDoc, serde_json::Error> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doc_round_trip() {
        let doc = FrontDoc {
            method: "exact".into(),
            mono_calls: 7,
            wall_time_s: 0.25,
            points: vec![FrontPointDoc {
                id: 0,
                f_eco_prime: 10.0,
                f_env_prime: 5.0,
                f_soc_prime: 2.0,
                eps_env: 6.0,
                eps_soc: -1.0,
                time_s: 0.1,
                assignment: [("Y_f0".to_string(), 1.0)].into_iter().collect(),
            }],
        };
        let text = serde_json::to_string(&doc).unwrap();
        let back = front_from_json(&text).unwrap();
        assert_eq!(back.points.len(), 1);
        assert_eq!(back.minimized()[0], [-10.0, 5.0, -2.0]);
    }
}
