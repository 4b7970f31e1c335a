//! Compile an instance into the tri-objective MILP.
//!
//! The strategic rows (everything coupled to the installation binaries Y
//! and the technology binaries Z) are tagged `Relaxable`; the tactical rows
//! are tagged `Kept`. The tactical block and the objective coefficients are
//! a reconstruction of the underlying planning model; every reconstructed
//! row carries a `reconstructed_` label prefix and lives in its own builder
//! so an alternative tactical core can be swapped in without touching the
//! algorithm modules.

use crate::milp::{Block, LinConstraint, LinObjective, Model, ModelError, Sense, VarId};

use super::catalog::Catalog;
use super::instance::{ModeKind, SscInstance};

/// The compiled model: variables and rows, the three objectives in
/// minimization sense, the catalog, and derived role metadata consumed by
/// the matheuristic subsolvers.
#[derive(Debug, Clone)]
pub struct TriObjectiveModel {
    pub model: Model,
    /// Minimization-sense objectives, ordered economic, environmental, social.
    pub objectives: [LinObjective; 3],
    pub catalog: Catalog,
    pub meta: SolverMeta,
}

/// Variable roles the mono-objective heuristics need.
#[derive(Debug, Clone, Default)]
pub struct SolverMeta {
    /// Installation binaries Y.
    pub open_vars: Vec<VarId>,
    /// Technology selection binaries Z.
    pub tech_vars: Vec<VarId>,
    /// All transport flow variables X.
    pub flow_vars: Vec<VarId>,
    /// One entry per (truck mode, arc, period).
    pub trip_groups: Vec<TripGroup>,
    /// One entry per (truck mode, source entity).
    pub fleet_groups: Vec<FleetGroup>,
}

#[derive(Debug, Clone)]
pub struct TripGroup {
    pub trips: VarId,
    /// (flow variable on the same arc and period, unit weight).
    pub weighted_flows: Vec<(VarId, f64)>,
    pub vehicle_capacity: f64,
    /// Cap from the installation-coupled trip rows.
    pub big_m: f64,
    /// (mode, from, to, t).
    pub key: (usize, usize, usize, usize),
}

#[derive(Debug, Clone)]
pub struct FleetGroup {
    pub fleet: VarId,
    /// Trip variables leaving the entity, one inner list per period.
    pub trips_by_period: Vec<Vec<VarId>>,
    pub trips_per_vehicle: f64,
    pub big_m: f64,
    /// (mode, entity).
    pub key: (usize, usize),
}

impl TriObjectiveModel {
    /// Minimization-sense objective values at `x`.
    pub fn minimized_values(&self, x: &[f64]) -> [f64; 3] {
        [
            self.objectives[0].value(x),
            self.objectives[1].value(x),
            self.objectives[2].value(x),
        ]
    }

    /// Original-sense values: economic and social flip sign.
    pub fn primed_values(&self, x: &[f64]) -> [f64; 3] {
        let m = self.minimized_values(x);
        [-m[0], m[1], -m[2]]
    }
}

/// Per-arc trip cap: total item weight that could ever cross the arc over
/// the horizon, divided by one trip's capacity. Computed per constraint
/// from instance data rather than one global constant.
fn trip_big_m(inst: &SscInstance, items: &[usize], vcap: f64) -> f64 {
    let weight: f64 = items.iter().map(|&m| inst.item_weight[m] * inst.item_flow_cap(m)).sum();
    if vcap <= 0.0 {
        return 0.0;
    }
    (weight / vcap).ceil().max(1.0)
}

fn fleet_big_m(inst: &SscInstance, cat: &Catalog, mode: usize, entity: usize) -> f64 {
    let mut total_trips = 0.0;
    for arc in &cat.arcs {
        if arc.from == entity && arc.modes.contains(&mode) {
            total_trips += trip_big_m(inst, &arc.items, inst.vehicle_capacity[mode]);
        }
    }
    if inst.trips_per_vehicle <= 0.0 {
        return total_trips.max(1.0);
    }
    (total_trips / inst.trips_per_vehicle).ceil().max(1.0)
}

pub fn build_strategic_constraints(
    inst: &SscInstance,
    cat: &Catalog,
) -> Result<Vec<LinConstraint>, ModelError> {
    let mut rows = Vec::new();
    let rel = Block::Relaxable;

    // Raw-material order window per selected supplier.
    for i in inst.suppliers() {
        for m in inst.raw_items() {
            for t in 0..inst.periods {
                let y = cat.open[&i];
                let out: Vec<(VarId, f64)> = cat
                    .flows_out_of(i, Some(m), t)
                    .into_iter()
                    .filter(|&(_, _, j, _)| inst.factories().contains(&j))
                    .map(|(_, _, _, id)| (id, 1.0))
                    .collect();
                let mut up = out.clone();
                up.push((y, -inst.supply_max[m][i]));
                rows.push(LinConstraint::new(
                    format!("supply_max_{}_{}_t{}", inst.entity_label(i), inst.item_label(m), t),
                    up,
                    Sense::Le,
                    0.0,
                    rel,
                ));
                let mut lo = out;
                lo.push((y, -inst.supply_min[m][i]));
                rows.push(LinConstraint::new(
                    format!("supply_min_{}_{}_t{}", inst.entity_label(i), inst.item_label(m), t),
                    lo,
                    Sense::Ge,
                    0.0,
                    rel,
                ));
            }
        }
    }

    // Any flow through an entity needs it installed.
    for i in 0..inst.n_entities() {
        for t in 0..inst.periods {
            let y = cat.open[&i];
            let cap = inst.flow_cap[i];
            let mut out: Vec<(VarId, f64)> =
                cat.flows_out_of(i, None, t).into_iter().map(|(_, _, _, id)| (id, 1.0)).collect();
            out.push((y, -cap));
            rows.push(LinConstraint::new(
                format!("outflow_cap_{}_t{}", inst.entity_label(i), t),
                out,
                Sense::Le,
                0.0,
                rel,
            ));
            let mut inflow: Vec<(VarId, f64)> =
                cat.flows_into(i, None, t).into_iter().map(|(_, _, _, id)| (id, 1.0)).collect();
            inflow.push((y, -cap));
            rows.push(LinConstraint::new(
                format!("inflow_cap_{}_t{}", inst.entity_label(i), t),
                inflow,
                Sense::Le,
                0.0,
                rel,
            ));
        }
    }

    // Stock window at installed sites.
    for m in inst.final_items() {
        for i in inst.factories().chain(inst.warehouses()) {
            let site = inst.site_of(i).unwrap();
            let fp = inst.final_local(m);
            for t in 0..inst.periods {
                let s = cat.stock[&(m, i, t)];
                let y = cat.open[&i];
                rows.push(LinConstraint::new(
                    format!("stock_max_{}_{}_t{}", inst.item_label(m), inst.entity_label(i), t),
                    vec![(s, 1.0), (y, -inst.stock_max[fp][site])],
                    Sense::Le,
                    0.0,
                    rel,
                ));
                rows.push(LinConstraint::new(
                    format!("stock_min_{}_{}_t{}", inst.item_label(m), inst.entity_label(i), t),
                    vec![(s, 1.0), (y, -inst.stock_min[fp][site])],
                    Sense::Ge,
                    0.0,
                    rel,
                ));
            }
        }
    }

    // Installed area window.
    for i in inst.factories().chain(inst.warehouses()) {
        let site = inst.site_of(i).unwrap();
        let yc = cat.capacity[&i];
        let y = cat.open[&i];
        rows.push(LinConstraint::new(
            format!("area_max_{}", inst.entity_label(i)),
            vec![(yc, 1.0), (y, -inst.area_max[site])],
            Sense::Le,
            0.0,
            rel,
        ));
        rows.push(LinConstraint::new(
            format!("area_min_{}", inst.entity_label(i)),
            vec![(yc, 1.0), (y, -inst.area_min[site])],
            Sense::Ge,
            0.0,
            rel,
        ));
    }

    // An installed entity moves at least one unit over the horizon. Rows
    // whose flow sum is structurally empty (suppliers receive nothing,
    // customers without a reverse channel send nothing) are skipped rather
    // than emitted as the unsatisfiable `0 >= Y`.
    for j in 0..inst.n_entities() {
        let y = cat.open[&j];
        let mut inflow: Vec<(VarId, f64)> = Vec::new();
        for t in 0..inst.periods {
            inflow.extend(cat.flows_into(j, None, t).into_iter().map(|(_, _, _, id)| (id, 1.0)));
        }
        if inflow.is_empty() {
            continue;
        }
        inflow.push((y, -1.0));
        rows.push(LinConstraint::new(
            format!("inflow_open_{}", inst.entity_label(j)),
            inflow,
            Sense::Ge,
            0.0,
            rel,
        ));
    }
    for i in 0..inst.n_entities() {
        let y = cat.open[&i];
        let mut out: Vec<(VarId, f64)> = Vec::new();
        for t in 0..inst.periods {
            out.extend(cat.flows_out_of(i, None, t).into_iter().map(|(_, _, _, id)| (id, 1.0)));
        }
        if out.is_empty() {
            continue;
        }
        out.push((y, -1.0));
        rows.push(LinConstraint::new(
            format!("outflow_open_{}", inst.entity_label(i)),
            out,
            Sense::Ge,
            0.0,
            rel,
        ));
    }

    // Trips need both endpoints installed.
    for (&(a, i, j, t), &q) in &cat.trips {
        let arc = cat
            .arcs
            .iter()
            .find(|arc| arc.from == i && arc.to == j)
            .expect("trip variable has an arc");
        let big_m = trip_big_m(inst, &arc.items, inst.vehicle_capacity[a]);
        rows.push(LinConstraint::new(
            format!(
                "trips_open_from_{}_{}_{}_t{}",
                inst.mode_label(a),
                inst.entity_label(i),
                inst.entity_label(j),
                t
            ),
            vec![(q, 1.0), (cat.open[&i], -big_m)],
            Sense::Le,
            0.0,
            rel,
        ));
        rows.push(LinConstraint::new(
            format!(
                "trips_open_to_{}_{}_{}_t{}",
                inst.mode_label(a),
                inst.entity_label(i),
                inst.entity_label(j),
                t
            ),
            vec![(q, 1.0), (cat.open[&j], -big_m)],
            Sense::Le,
            0.0,
            rel,
        ));
    }

    // Trucks are only purchased at installed entities.
    for (&(a, i), &k) in &cat.fleet {
        let big_m = fleet_big_m(inst, cat, a, i);
        rows.push(LinConstraint::new(
            format!("fleet_open_{}_{}", inst.mode_label(a), inst.entity_label(i)),
            vec![(k, 1.0), (cat.open[&i], -big_m)],
            Sense::Le,
            0.0,
            rel,
        ));
    }

    // Production and remanufacturing levels within the selected
    // technology's window.
    for (&(m, g, i, t), &p) in &cat.produced {
        let z = cat.tech_select[&(g, m, i)];
        rows.push(LinConstraint::new(
            format!(
                "prod_max_{}_{}_{}_t{}",
                inst.item_label(m),
                inst.tech_label(g),
                inst.entity_label(i),
                t
            ),
            vec![(p, 1.0), (z, -inst.tech_cap_max[g])],
            Sense::Le,
            0.0,
            rel,
        ));
        rows.push(LinConstraint::new(
            format!(
                "prod_min_{}_{}_{}_t{}",
                inst.item_label(m),
                inst.tech_label(g),
                inst.entity_label(i),
                t
            ),
            vec![(p, 1.0), (z, -inst.tech_cap_min[g])],
            Sense::Ge,
            0.0,
            rel,
        ));
    }
    for (&(m, g, i, t), &r) in &cat.reman {
        let z = cat.tech_select[&(g, m, i)];
        rows.push(LinConstraint::new(
            format!(
                "reman_max_{}_{}_{}_t{}",
                inst.item_label(m),
                inst.tech_label(g),
                inst.entity_label(i),
                t
            ),
            vec![(r, 1.0), (z, -inst.tech_cap_max[g])],
            Sense::Le,
            0.0,
            rel,
        ));
        rows.push(LinConstraint::new(
            format!(
                "reman_min_{}_{}_{}_t{}",
                inst.item_label(m),
                inst.tech_label(g),
                inst.entity_label(i),
                t
            ),
            vec![(r, 1.0), (z, -inst.tech_cap_min[g])],
            Sense::Ge,
            0.0,
            rel,
        ));
    }

    // At most one technology per product at an installed factory.
    for m in inst.final_items() {
        let fp = inst.final_local(m);
        for i in inst.factories() {
            let y = cat.open[&i];
            let mut row: Vec<(VarId, f64)> = inst
                .prod_compat
                .iter()
                .filter(|&&(f, _)| f == fp)
                .map(|&(_, g)| (cat.tech_select[&(g, m, i)], 1.0))
                .collect();
            row.push((y, -1.0));
            rows.push(LinConstraint::new(
                format!("prod_select_{}_{}", inst.item_label(m), inst.entity_label(i)),
                row,
                Sense::Le,
                0.0,
                rel,
            ));
            let mut row: Vec<(VarId, f64)> = inst
                .rem_compat
                .iter()
                .filter(|&&(f, _)| f == fp)
                .map(|&(_, g)| (cat.tech_select[&(g, m, i)], 1.0))
                .collect();
            row.push((y, -1.0));
            rows.push(LinConstraint::new(
                format!("reman_select_{}_{}", inst.item_label(m), inst.entity_label(i)),
                row,
                Sense::Le,
                0.0,
                rel,
            ));
        }
    }

    Ok(rows)
}

pub fn build_tactical_constraints(
    inst: &SscInstance,
    cat: &Catalog,
) -> Result<Vec<LinConstraint>, ModelError> {
    let mut rows = Vec::new();
    let kept = Block::Kept;

    // Raw materials bought equal raw materials consumed by production.
    for i in inst.factories() {
        for m in inst.raw_items() {
            for t in 0..inst.periods {
                let mut c: Vec<(VarId, f64)> =
                    cat.flows_into(i, Some(m), t).into_iter().map(|(_, _, _, id)| (id, 1.0)).collect();
                for (&(fm, g, fi, ft), &p) in &cat.produced {
                    if fi == i && ft == t {
                        let fp = inst.final_local(fm);
                        c.push((p, -inst.bom_prod[m][fp][g]));
                    }
                }
                rows.push(LinConstraint::new(
                    format!(
                        "reconstructed_raw_balance_{}_{}_t{}",
                        inst.entity_label(i),
                        inst.item_label(m),
                        t
                    ),
                    c,
                    Sense::Eq,
                    0.0,
                    kept,
                ));
            }
        }
    }

    // Factory product balance: production + remanufacturing + carried stock
    // equals shipped amount plus new stock.
    for i in inst.factories() {
        for m in inst.final_items() {
            for t in 0..inst.periods {
                let mut c: Vec<(VarId, f64)> = Vec::new();
                for (&(fm, _g, fi, ft), &p) in &cat.produced {
                    if fm == m && fi == i && ft == t {
                        c.push((p, 1.0));
                    }
                }
                for (&(fm, _g, fi, ft), &r) in &cat.reman {
                    if fm == m && fi == i && ft == t {
                        c.push((r, 1.0));
                    }
                }
                if t > 0 {
                    c.push((cat.stock[&(m, i, t - 1)], 1.0));
                }
                c.push((cat.stock[&(m, i, t)], -1.0));
                for (_, _, _, id) in cat.flows_out_of(i, Some(m), t) {
                    c.push((id, -1.0));
                }
                rows.push(LinConstraint::new(
                    format!(
                        "reconstructed_prod_balance_{}_{}_t{}",
                        inst.entity_label(i),
                        inst.item_label(m),
                        t
                    ),
                    c,
                    Sense::Eq,
                    0.0,
                    kept,
                ));
            }
        }
    }

    // Warehouse product balance.
    for i in inst.warehouses() {
        for m in inst.final_items() {
            for t in 0..inst.periods {
                let mut c: Vec<(VarId, f64)> =
                    cat.flows_into(i, Some(m), t).into_iter().map(|(_, _, _, id)| (id, 1.0)).collect();
                for (_, _, _, id) in cat.flows_out_of(i, Some(m), t) {
                    c.push((id, -1.0));
                }
                if t > 0 {
                    c.push((cat.stock[&(m, i, t - 1)], 1.0));
                }
                c.push((cat.stock[&(m, i, t)], -1.0));
                rows.push(LinConstraint::new(
                    format!(
                        "reconstructed_wh_balance_{}_{}_t{}",
                        inst.entity_label(i),
                        inst.item_label(m),
                        t
                    ),
                    c,
                    Sense::Eq,
                    0.0,
                    kept,
                ));
            }
        }
    }

    // Demand satisfaction.
    for i in inst.customers() {
        for m in inst.final_items() {
            let fp = inst.final_local(m);
            for t in 0..inst.periods {
                let c: Vec<(VarId, f64)> =
                    cat.flows_into(i, Some(m), t).into_iter().map(|(_, _, _, id)| (id, 1.0)).collect();
                rows.push(LinConstraint::new(
                    format!(
                        "reconstructed_demand_{}_{}_t{}",
                        inst.entity_label(i),
                        inst.item_label(m),
                        t
                    ),
                    c,
                    Sense::Eq,
                    inst.demand_at(fp, i, t),
                    kept,
                ));
            }
        }
    }

    // Customers return a fraction of the previous period's deliveries.
    for i in inst.customers() {
        for m in inst.recovered_items() {
            let rp = inst.recovered_local(m);
            let fp_item = inst.n_raw + inst.recovered_of[rp];
            for t in 0..inst.periods {
                let mut c: Vec<(VarId, f64)> =
                    cat.flows_out_of(i, Some(m), t).into_iter().map(|(_, _, _, id)| (id, 1.0)).collect();
                if t > 0 {
                    for (_, _, _, id) in cat.flows_into(i, Some(fp_item), t - 1) {
                        c.push((id, -inst.return_rate[rp]));
                    }
                }
                rows.push(LinConstraint::new(
                    format!(
                        "reconstructed_returns_{}_{}_t{}",
                        inst.entity_label(i),
                        inst.item_label(m),
                        t
                    ),
                    c,
                    Sense::Eq,
                    0.0,
                    kept,
                ));
            }
        }
    }

    // Warehouses pass recovered products through within the period.
    for i in inst.warehouses() {
        for m in inst.recovered_items() {
            for t in 0..inst.periods {
                let mut c: Vec<(VarId, f64)> =
                    cat.flows_into(i, Some(m), t).into_iter().map(|(_, _, _, id)| (id, 1.0)).collect();
                for (_, _, _, id) in cat.flows_out_of(i, Some(m), t) {
                    c.push((id, -1.0));
                }
                if c.is_empty() {
                    continue;
                }
                rows.push(LinConstraint::new(
                    format!(
                        "reconstructed_rp_wh_balance_{}_{}_t{}",
                        inst.entity_label(i),
                        inst.item_label(m),
                        t
                    ),
                    c,
                    Sense::Eq,
                    0.0,
                    kept,
                ));
            }
        }
    }

    // Remanufacturing consumes recovered products that reached the factory;
    // any surplus is discarded.
    for i in inst.factories() {
        for m in inst.recovered_items() {
            let rp = inst.recovered_local(m);
            for t in 0..inst.periods {
                let mut c: Vec<(VarId, f64)> =
                    cat.flows_into(i, Some(m), t).into_iter().map(|(_, _, _, id)| (id, 1.0)).collect();
                for (&(fm, _g, fi, ft), &r) in &cat.reman {
                    if fi == i && ft == t {
                        let fp = inst.final_local(fm);
                        let bill = inst.bom_rem[rp][fp];
                        if bill != 0.0 {
                            c.push((r, -bill));
                        }
                    }
                }
                rows.push(LinConstraint::new(
                    format!(
                        "reconstructed_rp_use_{}_{}_t{}",
                        inst.entity_label(i),
                        inst.item_label(m),
                        t
                    ),
                    c,
                    Sense::Ge,
                    0.0,
                    kept,
                ));
            }
        }
    }

    // Hubs neither store nor consume: inflow equals outflow per item.
    for h in inst.airports().chain(inst.seaports()) {
        for m in cat.items_through(h) {
            for t in 0..inst.periods {
                let mut c: Vec<(VarId, f64)> =
                    cat.flows_into(h, Some(m), t).into_iter().map(|(_, _, _, id)| (id, 1.0)).collect();
                for (_, _, _, id) in cat.flows_out_of(h, Some(m), t) {
                    c.push((id, -1.0));
                }
                rows.push(LinConstraint::new(
                    format!(
                        "reconstructed_hub_balance_{}_{}_t{}",
                        inst.entity_label(h),
                        inst.item_label(m),
                        t
                    ),
                    c,
                    Sense::Eq,
                    0.0,
                    kept,
                ));
            }
        }
    }

    // Stock occupies area; used area stays within the installed capacity.
    for i in inst.factories().chain(inst.warehouses()) {
        for t in 0..inst.periods {
            let yct = cat.capacity_used[&(i, t)];
            let mut c: Vec<(VarId, f64)> = inst
                .final_items()
                .map(|m| (cat.stock[&(m, i, t)], inst.item_area[m]))
                .collect();
            c.push((yct, -1.0));
            rows.push(LinConstraint::new(
                format!("reconstructed_area_used_{}_t{}", inst.entity_label(i), t),
                c,
                Sense::Eq,
                0.0,
                kept,
            ));
            rows.push(LinConstraint::new(
                format!("reconstructed_area_within_{}_t{}", inst.entity_label(i), t),
                vec![(yct, 1.0), (cat.capacity[&i], -1.0)],
                Sense::Le,
                0.0,
                kept,
            ));
        }
    }

    // Trips must carry the weight moved on their arc.
    for (&(a, i, j, t), &q) in &cat.trips {
        let arc = cat.arcs.iter().find(|arc| arc.from == i && arc.to == j).unwrap();
        let mut c: Vec<(VarId, f64)> = Vec::new();
        for &m in &arc.items {
            if let Some(&x) = cat.flow.get(&(m, a, i, j, t)) {
                c.push((x, inst.item_weight[m]));
            }
        }
        c.push((q, -inst.vehicle_capacity[a]));
        rows.push(LinConstraint::new(
            format!(
                "reconstructed_trip_weight_{}_{}_{}_t{}",
                inst.mode_label(a),
                inst.entity_label(i),
                inst.entity_label(j),
                t
            ),
            c,
            Sense::Le,
            0.0,
            kept,
        ));
    }

    // Truck fleets: per-period trips within what the owned trucks can do.
    for (&(a, i), &k) in &cat.fleet {
        for t in 0..inst.periods {
            let mut c: Vec<(VarId, f64)> = cat
                .trips
                .iter()
                .filter(|(&(ta, ti, _tj, tt), _)| ta == a && ti == i && tt == t)
                .map(|(_, &q)| (q, 1.0))
                .collect();
            c.push((k, -inst.trips_per_vehicle));
            rows.push(LinConstraint::new(
                format!(
                    "reconstructed_fleet_use_{}_{}_t{}",
                    inst.mode_label(a),
                    inst.entity_label(i),
                    t
                ),
                c,
                Sense::Le,
                0.0,
                kept,
            ));
            let kt = cat.fleet_period[&(a, i, t)];
            rows.push(LinConstraint::new(
                format!(
                    "reconstructed_fleet_link_{}_{}_t{}",
                    inst.mode_label(a),
                    inst.entity_label(i),
                    t
                ),
                vec![(kt, 1.0), (k, -1.0)],
                Sense::Le,
                0.0,
                kept,
            ));
        }
    }

    Ok(rows)
}

/// The three objectives in minimization sense: negated net present value,
/// total environmental impact, negated social benefit.
pub fn build_objectives(inst: &SscInstance, cat: &Catalog) -> [LinObjective; 3] {
    let mut eco: Vec<(VarId, f64)> = Vec::new();
    let mut env: Vec<(VarId, f64)> = Vec::new();
    let mut soc: Vec<(VarId, f64)> = Vec::new();

    let discount = |t: usize| (1.0 + inst.discount_rate).powi(-((t + 1) as i32));

    // Economic: discounted revenue minus operating outlays, minus the
    // undiscounted installation investments. Built in original (maximize)
    // sense and negated at the end.
    for (&(m, a, i, j, t), &x) in &cat.flow {
        let d = discount(t);
        let mut coeff = 0.0;
        // Revenue on deliveries to customers.
        if inst.customers().contains(&j) && inst.final_items().contains(&m) {
            coeff += inst.sell_price[inst.final_local(m)];
        }
        // Raw material purchase cost on supplier shipments.
        if inst.suppliers().contains(&i) {
            coeff -= inst.raw_cost[m][i];
        }
        // Collection cost on recovered products picked up at customers.
        if inst.customers().contains(&i) && inst.recovered_items().contains(&m) {
            coeff -= inst.recover_cost[inst.recovered_local(m)];
        }
        // Air and sea freight priced per kg km.
        let tariff = inst.mode_tariff[a];
        if tariff != 0.0 {
            coeff -= tariff * inst.dist[i][j] * inst.item_weight[m];
        }
        if coeff != 0.0 {
            eco.push((x, d * coeff));
        }
    }
    for (&(_m, g, _i, t), &p) in cat.produced.iter().chain(cat.reman.iter()) {
        eco.push((p, -discount(t) * inst.tech_op_cost[g]));
    }
    for (&(m, _i, t), &s) in &cat.stock {
        eco.push((s, -discount(t) * inst.stock_cost[inst.final_local(m)]));
    }
    for (&(a, i, j, t), &q) in &cat.trips {
        if inst.mode_kind(a) == ModeKind::Truck {
            let per_trip = inst.truck_consumption[a] / 100.0 * inst.dist[i][j] * inst.fuel_price;
            if per_trip != 0.0 {
                eco.push((q, -discount(t) * per_trip));
            }
        }
    }
    for (&i, &yc) in &cat.capacity {
        let site = inst.site_of(i).unwrap();
        eco.push((yc, -inst.build_cost[site]));
    }
    for (&(g, _m, _i), &z) in &cat.tech_select {
        eco.push((z, -inst.tech_cost[g]));
    }

    // Environmental: installation, production and transport impacts summed
    // over the assessment categories.
    let install_impact: f64 = inst.impact_install.iter().sum();
    for &yc in cat.capacity.values() {
        env.push((yc, install_impact));
    }
    for (&(m, g, _i, _t), &p) in cat.produced.iter().chain(cat.reman.iter()) {
        let fp = inst.final_local(m);
        let impact: f64 = inst.impact_production[fp][g].iter().sum();
        env.push((p, impact));
    }
    for (&(m, a, _i, _j, _t), &x) in &cat.flow {
        let impact: f64 = inst.impact_transport[a].iter().sum();
        env.push((x, impact * inst.item_weight[m]));
    }

    // Social: jobs weighted by local unemployment and inverse GDP. Built in
    // original (maximize) sense and negated at the end.
    for (&i, &y) in &cat.open {
        if let Some(site) = inst.site_of(i) {
            let w = inst.min_workers[site] * (inst.unemployment[i] / 100.0) / inst.gdp_index[i];
            soc.push((y, w));
        }
    }
    for (&i, &yc) in &cat.capacity {
        let site = inst.site_of(i).unwrap();
        let w = inst.workers_per_sqm[site] * (inst.unemployment[i] / 100.0) / inst.gdp_index[i];
        soc.push((yc, w));
    }
    for (&(g, _m, i), &z) in &cat.tech_select {
        soc.push((z, inst.tech_workers[g] / inst.gdp_index[i]));
    }

    let negate = |v: Vec<(VarId, f64)>| v.into_iter().map(|(id, c)| (id, -c)).collect();
    [
        LinObjective::new(negate(eco), 0.0),
        LinObjective::new(env, 0.0),
        LinObjective::new(negate(soc), 0.0),
    ]
}

fn build_meta(inst: &SscInstance, cat: &Catalog) -> SolverMeta {
    let mut meta = SolverMeta {
        open_vars: cat.open.values().copied().collect(),
        tech_vars: cat.tech_select.values().copied().collect(),
        flow_vars: cat.flow.values().copied().collect(),
        ..SolverMeta::default()
    };
    for (&(a, i, j, t), &q) in &cat.trips {
        if inst.mode_kind(a) != ModeKind::Truck {
            continue;
        }
        let arc = cat.arcs.iter().find(|arc| arc.from == i && arc.to == j).unwrap();
        let weighted_flows: Vec<(VarId, f64)> = arc
            .items
            .iter()
            .filter_map(|&m| cat.flow.get(&(m, a, i, j, t)).map(|&x| (x, inst.item_weight[m])))
            .collect();
        meta.trip_groups.push(TripGroup {
            trips: q,
            weighted_flows,
            vehicle_capacity: inst.vehicle_capacity[a],
            big_m: trip_big_m(inst, &arc.items, inst.vehicle_capacity[a]),
            key: (a, i, j, t),
        });
    }
    for (&(a, i), &k) in &cat.fleet {
        let trips_by_period: Vec<Vec<VarId>> = (0..inst.periods)
            .map(|t| {
                cat.trips
                    .iter()
                    .filter(|(&(ta, ti, _tj, tt), _)| ta == a && ti == i && tt == t)
                    .map(|(_, &q)| q)
                    .collect()
            })
            .collect();
        meta.fleet_groups.push(FleetGroup {
            fleet: k,
            trips_by_period,
            trips_per_vehicle: inst.trips_per_vehicle,
            big_m: fleet_big_m(inst, cat, a, i),
            key: (a, i),
        });
    }
    meta
}

/// Compile an instance into the full tri-objective model.
pub fn compile(inst: &SscInstance) -> Result<TriObjectiveModel, ModelError> {
    let mut model = Model::new();
    let catalog = Catalog::build(inst, &mut model)?;
    for row in build_strategic_constraints(inst, &catalog)? {
        model.add_constraint(row)?;
    }
    for row in build_tactical_constraints(inst, &catalog)? {
        model.add_constraint(row)?;
    }
    let objectives = build_objectives(inst, &catalog);
    let meta = build_meta(inst, &catalog);
    Ok(TriObjectiveModel { model, objectives, catalog, meta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::{generate, GenConfig};
    use crate::milp::Block;

    fn tiny() -> SscInstance {
        let mut cfg = GenConfig::default();
        cfg.seed = 9;
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
        generate(&cfg).unwrap()
    }

    #[test]
    fn strategic_row_counts() {
        let inst = tiny();
        let mut model = Model::new();
        let cat = Catalog::build(&inst, &mut model).unwrap();
        let rows = build_strategic_constraints(&inst, &cat).unwrap();
        let count = |prefix: &str| rows.iter().filter(|r| r.label.starts_with(prefix)).count();
        assert_eq!(count("supply_max_"), inst.n_suppliers * inst.n_raw * inst.periods);
        assert_eq!(count("supply_min_"), inst.n_suppliers * inst.n_raw * inst.periods);
        assert_eq!(count("outflow_cap_"), inst.n_entities() * inst.periods);
        assert_eq!(count("inflow_cap_"), inst.n_entities() * inst.periods);
        assert_eq!(count("stock_max_"), inst.n_final * inst.n_sites() * inst.periods);
        assert_eq!(count("area_max_"), inst.n_sites());
        // Suppliers have no inbound arcs, so their inflow row is skipped.
        assert_eq!(count("inflow_open_"), inst.n_entities() - inst.n_suppliers);
        assert_eq!(count("outflow_open_"), inst.n_entities());
        assert_eq!(count("prod_max_"), inst.prod_compat.len() * inst.n_factories * inst.periods);
        assert_eq!(count("reman_min_"), inst.rem_compat.len() * inst.n_factories * inst.periods);
        assert_eq!(count("prod_select_"), inst.n_final * inst.n_factories);
        assert_eq!(count("reman_select_"), inst.n_final * inst.n_factories);
    }

    #[test]
    fn every_relaxable_row_touches_a_binary() {
        let inst = tiny();
        let tri = compile(&inst).unwrap();
        let binaries: std::collections::BTreeSet<_> = tri
            .meta
            .open_vars
            .iter()
            .chain(tri.meta.tech_vars.iter())
            .copied()
            .collect();
        for row in tri.model.constraints() {
            match row.block {
                Block::Relaxable => assert!(
                    row.coeffs.iter().any(|(v, _)| binaries.contains(v)),
                    "row {} lacks a binary",
                    row.label
                ),
                Block::Kept => assert!(
                    row.coeffs.iter().all(|(v, _)| !binaries.contains(v)),
                    "kept row {} references a binary",
                    row.label
                ),
            }
        }
    }

    #[test]
    fn objectives_are_homogeneous() {
        let inst = tiny();
        let tri = compile(&inst).unwrap();
        let zero = vec![0.0; tri.model.num_vars()];
        let vals = tri.primed_values(&zero);
        assert_eq!(vals, [0.0, 0.0, 0.0]);
        let ones = vec![1.0; tri.model.num_vars()];
        let twos = vec![2.0; tri.model.num_vars()];
        let f1 = tri.minimized_values(&ones);
        let f2 = tri.minimized_values(&twos);
        for k in 0..3 {
            assert!((f2[k] - 2.0 * f1[k]).abs() <= 1e-9 * f1[k].abs().max(1.0));
        }
    }

    #[test]
    fn social_contribution_hand_value() {
        // One warehouse with capacity 100, 0.1 workers per m^2, 5 baseline
        // workers, 10% unemployment, GDP index 0.5: (5 + 10) * 0.1 * 2 = 3.
        let mut inst = tiny();
        let w_entity = inst.warehouses().start;
        let site = inst.site_of(w_entity).unwrap();
        inst.min_workers[site] = 5.0;
        inst.workers_per_sqm[site] = 0.1;
        inst.unemployment[w_entity] = 10.0;
        inst.gdp_index[w_entity] = 0.5;
        let tri = compile(&inst).unwrap();
        let mut x = vec![0.0; tri.model.num_vars()];
        x[tri.catalog.open[&w_entity].index()] = 1.0;
        x[tri.catalog.capacity[&w_entity].index()] = 100.0;
        let soc_prime = tri.primed_values(&x)[2];
        assert!((soc_prime - 3.0).abs() < 1e-9, "got {soc_prime}");
    }
}
