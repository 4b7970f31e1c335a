//! Variable catalog: the admissible arcs of the network and one model
//! variable per indexed decision (stocks, flows, production, capacities,
//! fleets, trips, installation and technology selection).

use std::collections::BTreeMap;

use crate::milp::{Model, ModelError, VarDomain, VarId};

use super::instance::{EntityKind, ModeKind, SscInstance};

#[derive(Debug, Clone)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    /// Global mode indices usable on this arc.
    pub modes: Vec<usize>,
    /// Global item indices that may travel on this arc.
    pub items: Vec<usize>,
}

/// All catalog keys use global indices: entities across all kinds, items
/// across raw/final/recovered, technologies across production and
/// remanufacturing, modes across trucks/planes/boats.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub arcs: Vec<Arc>,
    /// (item, entity, t) -> stock level.
    pub stock: BTreeMap<(usize, usize, usize), VarId>,
    /// (item, mode, from, to, t) -> flow amount.
    pub flow: BTreeMap<(usize, usize, usize, usize, usize), VarId>,
    /// (item, tech, factory, t) -> production amount.
    pub produced: BTreeMap<(usize, usize, usize, usize), VarId>,
    /// (item, tech, factory, t) -> remanufactured amount.
    pub reman: BTreeMap<(usize, usize, usize, usize), VarId>,
    /// site entity -> installed capacity (m^2).
    pub capacity: BTreeMap<usize, VarId>,
    /// (site entity, t) -> capacity in use.
    pub capacity_used: BTreeMap<(usize, usize), VarId>,
    /// (mode, entity, t) -> per-period fleet bound.
    pub fleet_period: BTreeMap<(usize, usize, usize), VarId>,
    /// (mode, entity) -> vehicles owned (integer).
    pub fleet: BTreeMap<(usize, usize), VarId>,
    /// (mode, from, to, t) -> trips (integer).
    pub trips: BTreeMap<(usize, usize, usize, usize), VarId>,
    /// entity -> installation decision (binary).
    pub open: BTreeMap<usize, VarId>,
    /// (tech, item, factory) -> technology selection (binary).
    pub tech_select: BTreeMap<(usize, usize, usize), VarId>,
}

fn hub(kind: EntityKind) -> bool {
    matches!(kind, EntityKind::Airport | EntityKind::Seaport)
}

/// Which items may travel from an entity of kind `a` to one of kind `b`.
fn arc_items(inst: &SscInstance, a: EntityKind, b: EntityKind) -> Vec<usize> {
    use EntityKind::*;
    let finals: Vec<usize> = inst.final_items().collect();
    let recovered: Vec<usize> = inst.recovered_items().collect();
    match (a, b) {
        (Supplier, Factory) => inst.raw_items().collect(),
        (Factory, Warehouse) | (Factory, Customer) | (Warehouse, Customer) => finals,
        (Warehouse, Factory) | (Customer, Factory) | (Customer, Warehouse) => recovered,
        (e, h) if hub(h) && matches!(e, Factory | Warehouse | Customer) => {
            let mut items = Vec::new();
            if matches!(e, Factory | Warehouse) {
                items.extend(finals);
            }
            if matches!(e, Warehouse | Customer) {
                items.extend(recovered);
            }
            items.sort_unstable();
            items
        }
        (h, e) if hub(h) && matches!(e, Factory | Warehouse | Customer) => {
            let mut items = Vec::new();
            if matches!(e, Warehouse | Customer) {
                items.extend(finals);
            }
            if matches!(e, Factory | Warehouse) {
                items.extend(recovered);
            }
            items.sort_unstable();
            items
        }
        (ha, hb) if hub(ha) && hub(hb) => {
            let mut items = finals;
            items.extend(recovered);
            items
        }
        _ => Vec::new(),
    }
}

/// Which modes may serve the arc: trucks stay on one continent and never
/// run between hubs; planes link airports; boats link seaports.
fn arc_modes(inst: &SscInstance, i: usize, j: usize) -> Vec<usize> {
    let (ka, kb) = (inst.entity_kind(i), inst.entity_kind(j));
    let mut modes = Vec::new();
    let same_continent = inst.overseas[i] == inst.overseas[j];
    let truck_pair = !(hub(ka) && hub(kb));
    if same_continent && truck_pair {
        modes.extend(inst.trucks());
    }
    if ka == EntityKind::Airport && kb == EntityKind::Airport {
        modes.extend(inst.n_trucks..inst.n_trucks + inst.n_planes);
    }
    if ka == EntityKind::Seaport && kb == EntityKind::Seaport {
        let s = inst.n_trucks + inst.n_planes;
        modes.extend(s..s + inst.n_boats);
    }
    modes
}

pub fn build_arcs(inst: &SscInstance) -> Vec<Arc> {
    let n = inst.n_entities();
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let items = arc_items(inst, inst.entity_kind(i), inst.entity_kind(j));
            if items.is_empty() {
                continue;
            }
            let modes = arc_modes(inst, i, j);
            if modes.is_empty() {
                continue;
            }
            arcs.push(Arc { from: i, to: j, modes, items });
        }
    }
    arcs
}

impl Catalog {
    /// Create every decision variable in `model` and index it.
    pub fn build(inst: &SscInstance, model: &mut Model) -> Result<Catalog, ModelError> {
        let mut cat = Catalog { arcs: build_arcs(inst), ..Catalog::default() };
        let inf = f64::INFINITY;

        for m in inst.final_items() {
            for i in inst.factories().chain(inst.warehouses()) {
                for t in 0..inst.periods {
                    let name = format!("S_{}_{}_t{}", inst.item_label(m), inst.entity_label(i), t);
                    let id = model.add_var(name, VarDomain::Continuous, 0.0, inf)?;
                    cat.stock.insert((m, i, t), id);
                }
            }
        }
        for arc in &cat.arcs {
            for &a in &arc.modes {
                for &m in &arc.items {
                    for t in 0..inst.periods {
                        let name = format!(
                            "X_{}_{}_{}_{}_t{}",
                            inst.item_label(m),
                            inst.mode_label(a),
                            inst.entity_label(arc.from),
                            inst.entity_label(arc.to),
                            t
                        );
                        let id = model.add_var(name, VarDomain::Continuous, 0.0, inf)?;
                        cat.flow.insert((m, a, arc.from, arc.to, t), id);
                    }
                }
            }
        }
        for &(fp, g) in &inst.prod_compat {
            let m = inst.n_raw + fp;
            for i in inst.factories() {
                for t in 0..inst.periods {
                    let name = format!(
                        "P_{}_{}_{}_t{}",
                        inst.item_label(m),
                        inst.tech_label(g),
                        inst.entity_label(i),
                        t
                    );
                    let id = model.add_var(name, VarDomain::Continuous, 0.0, inf)?;
                    cat.produced.insert((m, g, i, t), id);
                }
            }
        }
        for &(fp, g) in &inst.rem_compat {
            let m = inst.n_raw + fp;
            for i in inst.factories() {
                for t in 0..inst.periods {
                    let name = format!(
                        "R_{}_{}_{}_t{}",
                        inst.item_label(m),
                        inst.tech_label(g),
                        inst.entity_label(i),
                        t
                    );
                    let id = model.add_var(name, VarDomain::Continuous, 0.0, inf)?;
                    cat.reman.insert((m, g, i, t), id);
                }
            }
        }
        for i in inst.factories().chain(inst.warehouses()) {
            let id =
                model.add_var(format!("YC_{}", inst.entity_label(i)), VarDomain::Continuous, 0.0, inf)?;
            cat.capacity.insert(i, id);
        }
        for i in inst.factories().chain(inst.warehouses()) {
            for t in 0..inst.periods {
                let name = format!("YCT_{}_t{}", inst.entity_label(i), t);
                let id = model.add_var(name, VarDomain::Continuous, 0.0, inf)?;
                cat.capacity_used.insert((i, t), id);
            }
        }
        // Fleets exist where an entity has at least one outgoing truck arc.
        let mut truck_sources: Vec<usize> = cat
            .arcs
            .iter()
            .filter(|arc| arc.modes.iter().any(|&a| inst.mode_kind(a) == ModeKind::Truck))
            .map(|arc| arc.from)
            .collect();
        truck_sources.sort_unstable();
        truck_sources.dedup();
        for a in inst.trucks() {
            for &i in &truck_sources {
                for t in 0..inst.periods {
                    let name = format!("KT_{}_{}_t{}", inst.mode_label(a), inst.entity_label(i), t);
                    let id = model.add_var(name, VarDomain::Continuous, 0.0, inf)?;
                    cat.fleet_period.insert((a, i, t), id);
                }
            }
        }
        for a in inst.trucks() {
            for &i in &truck_sources {
                let name = format!("K_{}_{}", inst.mode_label(a), inst.entity_label(i));
                let id = model.add_var(name, VarDomain::Integer, 0.0, inf)?;
                cat.fleet.insert((a, i), id);
            }
        }
        for arc in &cat.arcs {
            for &a in &arc.modes {
                for t in 0..inst.periods {
                    let name = format!(
                        "Q_{}_{}_{}_t{}",
                        inst.mode_label(a),
                        inst.entity_label(arc.from),
                        inst.entity_label(arc.to),
                        t
                    );
                    let id = model.add_var(name, VarDomain::Integer, 0.0, inf)?;
                    cat.trips.insert((a, arc.from, arc.to, t), id);
                }
            }
        }
        for i in 0..inst.n_entities() {
            let id = model.add_var(format!("Y_{}", inst.entity_label(i)), VarDomain::Binary, 0.0, 1.0)?;
            cat.open.insert(i, id);
        }
        for &(fp, g) in inst.prod_compat.iter().chain(inst.rem_compat.iter()) {
            let m = inst.n_raw + fp;
            for i in inst.factories() {
                let name = format!(
                    "Z_{}_{}_{}",
                    inst.tech_label(g),
                    inst.item_label(m),
                    inst.entity_label(i)
                );
                let id = model.add_var(name, VarDomain::Binary, 0.0, 1.0)?;
                cat.tech_select.insert((g, m, i), id);
            }
        }
        Ok(cat)
    }

    /// Flow variables entering `entity`, optionally filtered by item.
    pub fn flows_into(
        &self,
        entity: usize,
        item: Option<usize>,
        t: usize,
    ) -> Vec<(usize, usize, usize, VarId)> {
        self.flow
            .iter()
            .filter(|(&(m, _a, _i, j, tt), _)| {
                j == entity && tt == t && item.map_or(true, |want| m == want)
            })
            .map(|(&(m, a, i, _j, _t), &id)| (m, a, i, id))
            .collect()
    }

    /// Flow variables leaving `entity`, optionally filtered by item.
    pub fn flows_out_of(
        &self,
        entity: usize,
        item: Option<usize>,
        t: usize,
    ) -> Vec<(usize, usize, usize, VarId)> {
        self.flow
            .iter()
            .filter(|(&(m, _a, i, _j, tt), _)| {
                i == entity && tt == t && item.map_or(true, |want| m == want)
            })
            .map(|(&(m, a, _i, j, _t), &id)| (m, a, j, id))
            .collect()
    }

    pub fn items_through(&self, entity: usize) -> Vec<usize> {
        let mut items: Vec<usize> = self
            .flow
            .keys()
            .filter(|&&(_m, _a, i, j, _t)| i == entity || j == entity)
            .map(|&(m, ..)| m)
            .collect();
        items.sort_unstable();
        items.dedup();
        items
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::{generate, GenConfig};
    use crate::ssc::instance::ItemKind;

    fn default_instance() -> SscInstance {
        let mut cfg = GenConfig::default();
        cfg.seed = 42;
        generate(&cfg).unwrap()
    }

    #[test]
    fn truck_arcs_stay_on_continent() {
        let inst = default_instance();
        for arc in build_arcs(&inst) {
            for &a in &arc.modes {
                if inst.mode_kind(a) == ModeKind::Truck {
                    assert_eq!(inst.overseas[arc.from], inst.overseas[arc.to]);
                }
            }
        }
    }

    #[test]
    fn planes_between_airports_boats_between_seaports() {
        let inst = default_instance();
        for arc in build_arcs(&inst) {
            for &a in &arc.modes {
                match inst.mode_kind(a) {
                    ModeKind::Plane => {
                        assert_eq!(inst.entity_kind(arc.from), EntityKind::Airport);
                        assert_eq!(inst.entity_kind(arc.to), EntityKind::Airport);
                    }
                    ModeKind::Boat => {
                        assert_eq!(inst.entity_kind(arc.from), EntityKind::Seaport);
                        assert_eq!(inst.entity_kind(arc.to), EntityKind::Seaport);
                    }
                    ModeKind::Truck => {}
                }
            }
        }
    }

    #[test]
    fn raw_material_only_from_suppliers_to_factories() {
        let inst = default_instance();
        for arc in build_arcs(&inst) {
            for &m in &arc.items {
                if inst.item_kind(m) == ItemKind::Raw {
                    assert_eq!(inst.entity_kind(arc.from), EntityKind::Supplier);
                    assert_eq!(inst.entity_kind(arc.to), EntityKind::Factory);
                }
            }
        }
    }

    #[test]
    fn catalog_indexes_are_bijective() {
        let inst = default_instance();
        let mut model = Model::new();
        let cat = Catalog::build(&inst, &mut model).unwrap();
        let total = cat.stock.len()
            + cat.flow.len()
            + cat.produced.len()
            + cat.reman.len()
            + cat.capacity.len()
            + cat.capacity_used.len()
            + cat.fleet_period.len()
            + cat.fleet.len()
            + cat.trips.len()
            + cat.open.len()
            + cat.tech_select.len();
        assert_eq!(total, model.num_vars());
    }
}
