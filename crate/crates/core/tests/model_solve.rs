//! End-to-end: generate a small instance, compile it, solve each objective
//! exactly, and check the solutions against the feasibility checker.

use std::time::Duration;

use sscopt::instgen::{generate, GenConfig};
use sscopt::milp::{solve_milp, SolveParams, SolveStatus};
use sscopt::ssc::{compile, validate_solution};

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
    cfg.prod_techs = 2;
    cfg.rem_techs = 2;
    cfg.trucks = 1;
    cfg.periods = 2;
    cfg
}

#[test]
fn tiny_instance_solves_on_all_objectives() {
    let inst = generate(&tiny_cfg(1)).unwrap();
    assert!(inst.validate().is_empty(), "{:?}", inst.validate());
    let tri = compile(&inst).unwrap();
    eprintln!(
        "tiny model: {} vars, {} rows",
        tri.model.num_vars(),
        tri.model.num_constraints()
    );
    let params = SolveParams { rel_gap: 0.01, time_limit: Some(Duration::from_secs(60)) };
    for (k, name) in ["eco", "env", "soc"].iter().enumerate() {
        let start = std::time::Instant::now();
        let r = solve_milp(&tri.model, &tri.objectives[k], &params);
        eprintln!(
            "{name}: status {:?} objective {:.3} gap {:.4} in {:?}",
            r.status,
            r.objective,
            r.rel_gap,
            start.elapsed()
        );
        assert_eq!(r.status, SolveStatus::Optimal, "objective {name}");
        let report = validate_solution(&tri.model, &r.assignment);
        assert!(report.is_feasible(), "objective {name}: {}", report.summary());
    }
}
