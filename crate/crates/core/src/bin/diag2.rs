use sscopt::milp::{parse_lp, solve_lp, SolveStatus};

fn main() {
    let text = std::fs::read_to_string("/tmp/bb_repair_fail.lp").unwrap();
    let (model, objective) = parse_lp(&text).unwrap();
    eprintln!("replay: {} vars {} rows", model.num_vars(), model.num_constraints());
    let r = solve_lp(&model, &objective);
    eprintln!("status {:?} obj {:.4}", r.status, r.objective);
    if r.status == SolveStatus::Optimal {
        let mut worst = (0.0, String::new());
        for c in model.constraints() {
            let v = c.violation(&r.assignment);
            if v > worst.0 {
                worst = (v, c.label.clone());
            }
        }
        eprintln!("max violation {:.4e} at {}", worst.0, worst.1);
        for c in model.constraints() {
            let v = c.violation(&r.assignment);
            if v > 1e-6 {
                eprintln!("  {}: violated {:.4e} (lhs {:.6} rhs {:.6})", c.label, v, c.lhs(&r.assignment), c.rhs);
            }
        }
    }
}
