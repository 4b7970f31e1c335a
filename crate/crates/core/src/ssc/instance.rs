//! The supply chain instance: sets, demands, bills of material, capacities,
//! costs, social and environmental coefficients. Everything the model
//! builder and the generator exchange lives here, serialized as a versioned
//! JSON document.

use serde::{Deserialize, Serialize};

pub const INSTANCE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntityKind {
    Supplier,
    Factory,
    Warehouse,
    Customer,
    Airport,
    Seaport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemKind {
    Raw,
    Final,
    Recovered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Truck,
    Plane,
    Boat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SscInstance {
    pub format_version: u32,
    pub name: String,
    /// Profile tag the generator applied (STD, TECHC, RAWC, SUP, CAP).
    pub profile: String,
    pub seed: u64,

    // Set cardinalities.
    pub n_suppliers: usize,
    pub n_factories: usize,
    pub n_warehouses: usize,
    pub n_customers: usize,
    pub n_airports: usize,
    pub n_seaports: usize,
    pub n_raw: usize,
    pub n_final: usize,
    pub n_recovered: usize,
    pub n_trucks: usize,
    pub n_planes: usize,
    pub n_boats: usize,
    pub n_prod_techs: usize,
    pub n_rem_techs: usize,
    pub n_impact_categories: usize,
    pub periods: usize,

    /// Per entity: true when located on the second continent. Land arcs
    /// only connect entities on the same continent.
    pub overseas: Vec<bool>,
    /// Compatible (final product, production technology) pairs; technology
    /// indices are global (production first, then remanufacturing).
    pub prod_compat: Vec<(usize, usize)>,
    /// Compatible (final product, remanufacturing technology) pairs.
    pub rem_compat: Vec<(usize, usize)>,
    /// Final product each recovered product originates from.
    pub recovered_of: Vec<usize>,

    // Demands and item specification.
    /// demand[final][customer][period], units per period.
    pub demand: Vec<Vec<Vec<f64>>>,
    /// bom_prod[raw][final][prod tech local], input units per output unit.
    pub bom_prod: Vec<Vec<Vec<f64>>>,
    /// bom_rem[recovered][final], input units per remanufactured unit.
    pub bom_rem: Vec<Vec<f64>>,
    /// Weight per unit (kg), global item index: raw, then final, then recovered.
    pub item_weight: Vec<f64>,
    /// Storage area per unit (m^2), global item index.
    pub item_area: Vec<f64>,
    /// Return fraction per recovered product.
    pub return_rate: Vec<f64>,
    /// Workers a technology requires, global tech index.
    pub tech_workers: Vec<f64>,

    // Capacities. A "site" is a factory or warehouse, indexed factories first.
    /// stock_max[final][site], units.
    pub stock_max: Vec<Vec<f64>>,
    pub stock_min: Vec<Vec<f64>>,
    /// Capacity per technology, units per period, global tech index.
    pub tech_cap_max: Vec<f64>,
    pub tech_cap_min: Vec<f64>,
    /// Installable area per site, m^2.
    pub area_max: Vec<f64>,
    pub area_min: Vec<f64>,
    /// supply_max[raw][supplier], units per period.
    pub supply_max: Vec<Vec<f64>>,
    pub supply_min: Vec<Vec<f64>>,
    /// Symmetric distances (km), global entity indices.
    pub dist: Vec<Vec<f64>>,
    /// Per-entity cap on total in- or out-flow per period, units.
    pub flow_cap: Vec<f64>,

    // Costs.
    /// Technology installation cost, global tech index.
    pub tech_cost: Vec<f64>,
    /// Operating cost per produced/remanufactured unit, global tech index.
    pub tech_op_cost: Vec<f64>,
    /// Selling price per final product unit.
    pub sell_price: Vec<f64>,
    /// Inventory cost per final product unit per period.
    pub stock_cost: Vec<f64>,
    /// Collection cost per recovered product unit.
    pub recover_cost: Vec<f64>,
    /// raw_cost[raw][supplier], purchase cost per unit.
    pub raw_cost: Vec<Vec<f64>>,
    /// Fuel consumption per truck type, litres per 100 km.
    pub truck_consumption: Vec<f64>,
    /// Freight tariff per kg km, global mode index; zero for trucks.
    pub mode_tariff: Vec<f64>,

    // Social and labor.
    /// Construction cost per m^2 of installed capacity, per site.
    pub build_cost: Vec<f64>,
    /// Labor cost index per entity.
    pub labor_cost: Vec<f64>,
    /// GDP index per entity.
    pub gdp_index: Vec<f64>,
    /// Unemployment index per entity (percent).
    pub unemployment: Vec<f64>,
    /// Baseline workers when a site is installed.
    pub min_workers: Vec<f64>,
    /// Additional workers per m^2 of installed capacity, per site.
    pub workers_per_sqm: Vec<f64>,

    // Environmental impact coefficients.
    /// Installation impact per m^2, per category.
    pub impact_install: Vec<f64>,
    /// impact_production[final][tech global][category], per unit.
    pub impact_production: Vec<Vec<Vec<f64>>>,
    /// impact_transport[mode][category], per kg moved.
    pub impact_transport: Vec<Vec<f64>>,

    // Logistics coefficients the strategic/tactical rows need.
    /// Weight one trip can carry, per mode (kg).
    pub vehicle_capacity: Vec<f64>,
    /// Trips one truck can make per period.
    pub trips_per_vehicle: f64,
    /// Fuel price per litre.
    pub fuel_price: f64,
    /// Per-period discount rate for the net-present-value objective.
    pub discount_rate: f64,
}

impl SscInstance {
    pub fn n_entities(&self) -> usize {
        self.n_suppliers + self.n_factories + self.n_warehouses + self.n_customers
            + self.n_airports
            + self.n_seaports
    }

    pub fn n_sites(&self) -> usize {
        self.n_factories + self.n_warehouses
    }

    pub fn n_items(&self) -> usize {
        self.n_raw + self.n_final + self.n_recovered
    }

    pub fn n_modes(&self) -> usize {
        self.n_trucks + self.n_planes + self.n_boats
    }

    pub fn n_techs(&self) -> usize {
        self.n_prod_techs + self.n_rem_techs
    }

    pub fn entity_kind(&self, i: usize) -> EntityKind {
        let mut x = i;
        for (kind, n) in [
            (EntityKind::Supplier, self.n_suppliers),
            (EntityKind::Factory, self.n_factories),
            (EntityKind::Warehouse, self.n_warehouses),
            (EntityKind::Customer, self.n_customers),
            (EntityKind::Airport, self.n_airports),
            (EntityKind::Seaport, self.n_seaports),
        ] {
            if x < n {
                return kind;
            }
            x -= n;
        }
        panic!("entity index {i} out of range");
    }

    pub fn suppliers(&self) -> std::ops::Range<usize> {
        0..self.n_suppliers
    }

    pub fn factories(&self) -> std::ops::Range<usize> {
        let s = self.n_suppliers;
        s..s + self.n_factories
    }

    pub fn warehouses(&self) -> std::ops::Range<usize> {
        let s = self.n_suppliers + self.n_factories;
        s..s + self.n_warehouses
    }

    pub fn customers(&self) -> std::ops::Range<usize> {
        let s = self.n_suppliers + self.n_factories + self.n_warehouses;
        s..s + self.n_customers
    }

    pub fn airports(&self) -> std::ops::Range<usize> {
        let s = self.n_suppliers + self.n_factories + self.n_warehouses + self.n_customers;
        s..s + self.n_airports
    }

    pub fn seaports(&self) -> std::ops::Range<usize> {
        let s = self.n_suppliers + self.n_factories + self.n_warehouses + self.n_customers + self.n_airports;
        s..s + self.n_seaports
    }

    /// Site index (factory/warehouse local) of a global entity, if any.
    pub fn site_of(&self, entity: usize) -> Option<usize> {
        match self.entity_kind(entity) {
            EntityKind::Factory => Some(entity - self.n_suppliers),
            EntityKind::Warehouse => Some(entity - self.n_suppliers),
            _ => None,
        }
    }

    /// Global entity index of a site.
    pub fn entity_of_site(&self, site: usize) -> usize {
        self.n_suppliers + site
    }

    pub fn item_kind(&self, m: usize) -> ItemKind {
        if m < self.n_raw {
            ItemKind::Raw
        } else if m < self.n_raw + self.n_final {
            ItemKind::Final
        } else {
            ItemKind::Recovered
        }
    }

    pub fn raw_items(&self) -> std::ops::Range<usize> {
        0..self.n_raw
    }

    pub fn final_items(&self) -> std::ops::Range<usize> {
        self.n_raw..self.n_raw + self.n_final
    }

    pub fn recovered_items(&self) -> std::ops::Range<usize> {
        let s = self.n_raw + self.n_final;
        s..s + self.n_recovered
    }

    pub fn final_local(&self, m: usize) -> usize {
        m - self.n_raw
    }

    pub fn recovered_local(&self, m: usize) -> usize {
        m - self.n_raw - self.n_final
    }

    /// Global item index of the recovered twin of a final product, if any.
    pub fn recovered_item_of_final(&self, fp_local: usize) -> Option<usize> {
        self.recovered_of
            .iter()
            .position(|&f| f == fp_local)
            .map(|rp| self.n_raw + self.n_final + rp)
    }

    pub fn mode_kind(&self, a: usize) -> ModeKind {
        if a < self.n_trucks {
            ModeKind::Truck
        } else if a < self.n_trucks + self.n_planes {
            ModeKind::Plane
        } else {
            ModeKind::Boat
        }
    }

    pub fn trucks(&self) -> std::ops::Range<usize> {
        0..self.n_trucks
    }

    pub fn entity_label(&self, i: usize) -> String {
        match self.entity_kind(i) {
            EntityKind::Supplier => format!("sup{}", i),
            EntityKind::Factory => format!("f{}", i - self.factories().start),
            EntityKind::Warehouse => format!("w{}", i - self.warehouses().start),
            EntityKind::Customer => format!("c{}", i - self.customers().start),
            EntityKind::Airport => format!("air{}", i - self.airports().start),
            EntityKind::Seaport => format!("sea{}", i - self.seaports().start),
        }
    }

    pub fn item_label(&self, m: usize) -> String {
        match self.item_kind(m) {
            ItemKind::Raw => format!("rm{}", m),
            ItemKind::Final => format!("fp{}", self.final_local(m)),
            ItemKind::Recovered => format!("rp{}", self.recovered_local(m)),
        }
    }

    pub fn mode_label(&self, a: usize) -> String {
        match self.mode_kind(a) {
            ModeKind::Truck => format!("trk{}", a),
            ModeKind::Plane => format!("pln{}", a - self.n_trucks),
            ModeKind::Boat => format!("shp{}", a - self.n_trucks - self.n_planes),
        }
    }

    pub fn tech_label(&self, g: usize) -> String {
        format!("g{}", g)
    }

    pub fn demand_at(&self, fp_local: usize, customer: usize, t: usize) -> f64 {
        let c_local = customer - self.customers().start;
        self.demand[fp_local][c_local][t]
    }

    pub fn total_demand_in_period(&self, t: usize) -> f64 {
        self.demand.iter().map(|per_c| per_c.iter().map(|d| d[t]).sum::<f64>()).sum()
    }

    /// Upper bound on the units of item `m` that can ever cross one arc over
    /// the horizon; drives flow caps and the per-row big-M values.
    pub fn item_flow_cap(&self, m: usize) -> f64 {
        match self.item_kind(m) {
            ItemKind::Final => {
                let fp = self.final_local(m);
                let horizon_demand: f64 =
                    self.demand[fp].iter().map(|d| d.iter().sum::<f64>()).sum();
                let max_stock: f64 = self.stock_max[fp].iter().sum();
                horizon_demand + max_stock
            }
            ItemKind::Recovered => {
                let fp = self.recovered_of[self.recovered_local(m)];
                self.item_flow_cap(self.n_raw + fp)
            }
            ItemKind::Raw => {
                let rm = m;
                (0..self.n_final)
                    .map(|fp| {
                        let worst_bill = self.bom_prod[rm][fp]
                            .iter()
                            .fold(0.0_f64, |acc, &b| acc.max(b));
                        worst_bill * self.item_flow_cap(self.n_raw + fp)
                    })
                    .sum()
            }
        }
    }

    /// Structural and range checks; returns every problem found.
    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        let mut check = |ok: bool, msg: String| {
            if !ok {
                issues.push(msg);
            }
        };
        check(self.format_version == INSTANCE_FORMAT_VERSION, "unknown format version".into());
        check(self.n_factories >= 1, "at least one factory required".into());
        check(self.n_customers >= 1, "at least one customer required".into());
        check(self.n_suppliers >= 1, "at least one supplier required".into());
        check(self.overseas.len() == self.n_entities(), "overseas flag per entity".into());
        check(self.n_recovered == self.recovered_of.len(), "recovered_of length".into());
        for (rp, &fp) in self.recovered_of.iter().enumerate() {
            check(fp < self.n_final, format!("recovered product {rp} maps to missing final {fp}"));
        }
        // Each recovered product must map to exactly one final product and
        // no two to the same one.
        let mut seen = vec![false; self.n_final];
        for &fp in &self.recovered_of {
            if fp < seen.len() {
                check(!seen[fp], format!("final product {fp} has two recovered twins"));
                seen[fp] = true;
            }
        }
        for &(m, g) in self.prod_compat.iter() {
            check(m < self.n_final, format!("prod_compat final {m} out of range"));
            check(g < self.n_prod_techs, format!("prod_compat tech {g} not a production tech"));
        }
        for &(m, g) in self.rem_compat.iter() {
            check(m < self.n_final, format!("rem_compat final {m} out of range"));
            check(
                g >= self.n_prod_techs && g < self.n_techs(),
                format!("rem_compat tech {g} not a remanufacturing tech"),
            );
        }
        for i in 0..self.n_entities() {
            for j in 0..self.n_entities() {
                check(self.dist[i][j] >= 0.0, format!("negative distance {i}->{j}"));
                check(
                    (self.dist[i][j] - self.dist[j][i]).abs() < 1e-9,
                    format!("asymmetric distance {i}<->{j}"),
                );
            }
        }
        for rp in 0..self.n_recovered {
            let r = self.return_rate[rp];
            check((0.0..=1.0).contains(&r), format!("return rate {r} outside [0,1]"));
        }
        for s in 0..self.n_sites() {
            check(self.area_min[s] <= self.area_max[s], format!("site {s} area min > max"));
            for fpl in 0..self.n_final {
                check(
                    self.stock_min[fpl][s] <= self.stock_max[fpl][s],
                    format!("site {s} stock min > max"),
                );
            }
        }
        for g in 0..self.n_techs() {
            check(
                self.tech_cap_min[g] <= self.tech_cap_max[g],
                format!("tech {g} capacity min > max"),
            );
        }
        for r in 0..self.n_raw {
            for s in 0..self.n_suppliers {
                check(
                    self.supply_min[r][s] <= self.supply_max[r][s],
                    format!("supplier {s} raw {r} supply min > max"),
                );
            }
        }
        check(self.demand.len() == self.n_final, "demand shape".into());
        for per_c in &self.demand {
            check(per_c.len() == self.n_customers, "demand customers shape".into());
            for d in per_c {
                check(d.len() == self.periods, "demand periods shape".into());
                check(d.iter().all(|v| *v >= 0.0), "negative demand".into());
            }
        }
        issues
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<SscInstance, serde_json::Error> {
        serde_json::from_str(text)
    }
}
