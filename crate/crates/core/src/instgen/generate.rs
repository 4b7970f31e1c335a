//! Seeded instance sampling. Each parameter family draws from its own
//! sub-stream (demands, items, capacities, costs, social, environmental),
//! so extending one family never shifts the draws of another.

use crate::ssc::instance::{SscInstance, INSTANCE_FORMAT_VERSION};

use super::config::{ConfigError, GenConfig, Profile};
use super::rng::Xoshiro256;

const SECTION_DEMANDS: u64 = 0;
const SECTION_ITEMS: u64 = 1;
const SECTION_CAPACITIES: u64 = 2;
const SECTION_COSTS: u64 = 3;
const SECTION_SOCIAL: u64 = 4;
const SECTION_ENV: u64 = 5;

// Intervals the source data pins regardless of configuration.
const TRUCK_CONSUMPTION_RANGE: (f64, f64) = (14.0, 18.0);
const LABOR_COST_RANGE: (f64, f64) = (3.5, 30.4);
const GDP_RANGE: (f64, f64) = (0.355, 1.24);
const UNEMPLOYMENT_RANGE: (f64, f64) = (4.8, 24.5);
const IMPACT_INSTALL_RANGE: (f64, f64) = (0.0, 83_200.0);
const IMPACT_PRODUCTION_RANGE: (f64, f64) = (0.000_004_9, 457_000.0);
const IMPACT_TRANSPORT_RANGE: (f64, f64) = (0.0, 0.003_14);

/// Demand of the first period is uniform; later periods grow by `vart`.
pub fn sample_demand(cfg: &GenConfig, rng: &mut Xoshiro256) -> Vec<Vec<Vec<f64>>> {
    let mut demand = vec![vec![vec![0.0; cfg.periods]; cfg.customers]; cfg.final_products];
    for per_fp in demand.iter_mut() {
        for per_c in per_fp.iter_mut() {
            per_c[0] = rng.uniform(cfg.lbdc, cfg.ubdc);
            for t in 1..cfg.periods {
                per_c[t] = per_c[t - 1] * (1.0 + cfg.vart);
            }
        }
    }
    demand
}

pub struct ItemData {
    pub bom_prod: Vec<Vec<Vec<f64>>>,
    pub bom_rem: Vec<Vec<f64>>,
    pub item_weight: Vec<f64>,
    pub item_area: Vec<f64>,
    pub return_rate: Vec<f64>,
}

/// Bills of material, unit weights/areas and return rates.
///
/// Weight and area of a final product are the bill-weighted raw values
/// averaged over the production technologies; a recovered product gets the
/// bill-weighted sum over the final products it refurbishes into.
pub fn sample_items(cfg: &GenConfig, recovered_of: &[usize], rng: &mut Xoshiro256) -> ItemData {
    let nr = cfg.raw_materials;
    let nf = cfg.final_products;
    let nrp = recovered_of.len();

    let mut bom_prod = vec![vec![vec![0.0; cfg.prod_techs]; nf]; nr];
    for per_fp in bom_prod.iter_mut() {
        for per_g in per_fp.iter_mut() {
            for b in per_g.iter_mut() {
                *b = rng.uniform(cfg.lbbomprod, cfg.ubbomprod);
            }
        }
    }
    let mut bom_rem = vec![vec![0.0; nf]; nrp];
    for (rp, &fp) in recovered_of.iter().enumerate() {
        bom_rem[rp][fp] = rng.uniform(cfg.lbbomrem, cfg.ubbomrem);
    }

    let mut item_weight = vec![0.0; nr + nf + nrp];
    let mut item_area = vec![0.0; nr + nf + nrp];
    for m in 0..nr {
        item_weight[m] = rng.uniform(cfg.lbpw, cfg.ubpw);
    }
    for m in 0..nr {
        item_area[m] = rng.uniform(cfg.lbapu, cfg.ubapu);
    }
    for fp in 0..nf {
        let mut w_sum = 0.0;
        let mut a_sum = 0.0;
        for g in 0..cfg.prod_techs {
            for rm in 0..nr {
                w_sum += bom_prod[rm][fp][g] * item_weight[rm];
                a_sum += bom_prod[rm][fp][g] * item_area[rm];
            }
        }
        item_weight[nr + fp] = w_sum / cfg.prod_techs as f64;
        item_area[nr + fp] = a_sum / cfg.prod_techs as f64;
    }
    for (rp, &fp) in recovered_of.iter().enumerate() {
        item_weight[nr + nf + rp] = bom_rem[rp][fp] * item_weight[nr + fp];
        item_area[nr + nf + rp] = bom_rem[rp][fp] * item_area[nr + fp];
    }

    let mut return_rate = vec![0.0; nrp];
    for r in return_rate.iter_mut() {
        *r = rng.uniform(0.0, cfg.ubret);
    }

    ItemData { bom_prod, bom_rem, item_weight, item_area, return_rate }
}

pub struct CapacityData {
    pub stock_max: Vec<Vec<f64>>,
    pub stock_min: Vec<Vec<f64>>,
    pub tech_cap_max: Vec<f64>,
    pub tech_cap_min: Vec<f64>,
    pub area_max: Vec<f64>,
    pub area_min: Vec<f64>,
    pub supply_max: Vec<Vec<f64>>,
    pub supply_min: Vec<Vec<f64>>,
    pub dist: Vec<Vec<f64>>,
}

pub fn sample_capacities(
    cfg: &GenConfig,
    demand: &[Vec<Vec<f64>>],
    bom_prod: &[Vec<Vec<f64>>],
    n_entities: usize,
    rng: &mut Xoshiro256,
) -> Result<CapacityData, ConfigError> {
    let n_sites = cfg.factories + cfg.warehouses;
    let total_demand_t =
        |t: usize| -> f64 { demand.iter().map(|per_c| per_c.iter().map(|d| d[t]).sum::<f64>()).sum() };
    let fp_demand_t = |fp: usize, t: usize| -> f64 { demand[fp].iter().map(|d| d[t]).sum() };

    let mut stock_max = vec![vec![0.0; n_sites]; cfg.final_products];
    let mut stock_min = vec![vec![0.0; n_sites]; cfg.final_products];
    for fp in 0..cfg.final_products {
        for s in 0..n_sites {
            let mut best = 0.0_f64;
            for t in 0..cfg.periods {
                let d = fp_demand_t(fp, t);
                let v = (cfg.icfracmax * d + rng.uniform(0.0, d)).ceil();
                best = best.max(v);
            }
            stock_max[fp][s] = best;
            stock_min[fp][s] = cfg.icfracmin * best;
        }
    }

    // Technology capacity: a per-factory share of demand, damped by 10% of
    // the total and stretched by a U[1,2] draw, maximized over products and
    // periods. Resample the whole set while production capacity cannot
    // cover some period's demand (at most 10 attempts).
    let n_techs = cfg.prod_techs + cfg.rem_techs;
    let mut tech_cap_max = vec![0.0; n_techs];
    let mut attempts = 0;
    loop {
        attempts += 1;
        for cap in tech_cap_max.iter_mut() {
            let mut best = 0.0_f64;
            for fp in 0..cfg.final_products {
                for t in 0..cfg.periods {
                    let d = fp_demand_t(fp, t);
                    let share = (d / cfg.factories as f64).ceil() - 0.1 * d;
                    let v = rng.uniform(1.0, 2.0) * share;
                    best = best.max(v);
                }
            }
            *cap = best;
        }
        let covered = (0..cfg.periods).all(|t| {
            let prod_total: f64 = tech_cap_max[..cfg.prod_techs].iter().sum();
            prod_total >= total_demand_t(t)
        });
        if covered {
            break;
        }
        if attempts >= 10 {
            return Err(ConfigError::Invalid(
                "production capacity draws cannot cover demand; widen factories or technologies".into(),
            ));
        }
    }
    let tech_cap_min: Vec<f64> = tech_cap_max.iter().map(|c| cfg.lbpcmin * c).collect();

    let mut area_max = vec![0.0; n_sites];
    let mut area_min = vec![0.0; n_sites];
    for s in 0..n_sites {
        let factory = s < cfg.factories;
        area_max[s] = if factory {
            rng.uniform(cfg.lbeafmax, cfg.ubeafmax)
        } else {
            rng.uniform(cfg.lbeawmax, cfg.ubeawmax)
        };
    }
    for s in 0..n_sites {
        let factory = s < cfg.factories;
        let v = if factory {
            rng.uniform(cfg.lbeafmin, cfg.ubeafmin)
        } else {
            rng.uniform(cfg.lbeawmin, cfg.ubeawmin)
        };
        area_min[s] = v.min(area_max[s]);
    }

    // Every supplier may cover 2/|suppliers| of the raw material needed at
    // full production.
    let mut supply_max = vec![vec![0.0; cfg.suppliers]; cfg.raw_materials];
    let mut supply_min = vec![vec![0.0; cfg.suppliers]; cfg.raw_materials];
    for rm in 0..cfg.raw_materials {
        let mut need = 0.0;
        for fp in 0..cfg.final_products {
            for g in 0..cfg.prod_techs {
                need += tech_cap_max[g] * bom_prod[rm][fp][g];
            }
        }
        let cap = 2.0 * (need / cfg.suppliers as f64).ceil();
        for s in 0..cfg.suppliers {
            supply_max[rm][s] = cap;
        }
    }
    for rm in 0..cfg.raw_materials {
        for s in 0..cfg.suppliers {
            supply_min[rm][s] = rng.uniform(cfg.lbsc * supply_max[rm][s], cfg.ubsc * supply_max[rm][s]);
        }
    }

    let mut dist = vec![vec![0.0; n_entities]; n_entities];
    for i in 0..n_entities {
        for j in (i + 1)..n_entities {
            let d = rng.uniform(cfg.lbdist, cfg.ubdist);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }

    Ok(CapacityData {
        stock_max,
        stock_min,
        tech_cap_max,
        tech_cap_min,
        area_max,
        area_min,
        supply_max,
        supply_min,
        dist,
    })
}

/// Deterministic generation: the same `(config, seed)` always yields the
/// same instance, byte for byte once serialized.
pub fn generate(cfg: &GenConfig) -> Result<SscInstance, ConfigError> {
    cfg.validate()?;
    let n_recovered = cfg.final_products;
    let recovered_of: Vec<usize> = (0..n_recovered).collect();

    let n_entities =
        cfg.suppliers + cfg.factories + cfg.warehouses + cfg.customers + cfg.airports + cfg.seaports;
    let n_sites = cfg.factories + cfg.warehouses;
    let n_modes = cfg.trucks + cfg.planes + cfg.boats;
    let n_techs = cfg.prod_techs + cfg.rem_techs;

    let mut overseas = vec![false; n_entities];
    {
        // The last k of each warehouse/customer/airport/seaport range sit on
        // the second continent; suppliers and factories never do.
        let mut mark = |start: usize, len: usize, k: usize| {
            for off in 0..k.min(len) {
                overseas[start + len - 1 - off] = true;
            }
        };
        let w0 = cfg.suppliers + cfg.factories;
        let c0 = w0 + cfg.warehouses;
        let a0 = c0 + cfg.customers;
        let p0 = a0 + cfg.airports;
        mark(w0, cfg.warehouses, cfg.overseas_warehouses);
        mark(c0, cfg.customers, cfg.overseas_customers);
        mark(a0, cfg.airports, cfg.overseas_airports);
        mark(p0, cfg.seaports, cfg.overseas_seaports);
    }

    let prod_compat: Vec<(usize, usize)> = (0..cfg.final_products)
        .flat_map(|m| (0..cfg.prod_techs).map(move |g| (m, g)))
        .collect();
    let rem_compat: Vec<(usize, usize)> = (0..cfg.final_products)
        .flat_map(|m| (cfg.prod_techs..n_techs).map(move |g| (m, g)))
        .collect();

    let mut rng = Xoshiro256::section(cfg.seed, SECTION_DEMANDS);
    let demand = sample_demand(cfg, &mut rng);

    let mut rng = Xoshiro256::section(cfg.seed, SECTION_ITEMS);
    let items = sample_items(cfg, &recovered_of, &mut rng);

    let mut rng = Xoshiro256::section(cfg.seed, SECTION_CAPACITIES);
    let caps = sample_capacities(cfg, &demand, &items.bom_prod, n_entities, &mut rng)?;

    // Costs.
    let mut rng = Xoshiro256::section(cfg.seed, SECTION_COSTS);
    let tech_cost: Vec<f64> = caps
        .tech_cap_max
        .iter()
        .map(|&cap| rng.uniform(cfg.lbtec * cap, cfg.ubtech * cap))
        .collect();
    let tech_op_cost: Vec<f64> = (0..n_techs).map(|_| rng.uniform(cfg.lbopc, cfg.ubopc)).collect();
    let sell_price: Vec<f64> = (0..cfg.final_products).map(|_| rng.uniform(cfg.lbpsu, cfg.ubpsu)).collect();
    let stock_cost: Vec<f64> = (0..cfg.final_products)
        .map(|fp| cfg.scfrac + items.item_weight[cfg.raw_materials + fp])
        .collect();
    let recover_cost: Vec<f64> = recovered_of
        .iter()
        .enumerate()
        .map(|(rp, &fp)| items.bom_rem[rp][fp] * sell_price[fp] * rng.uniform(cfg.lbrpc, cfg.ubrpc))
        .collect();
    let mut raw_cost = vec![vec![0.0; cfg.suppliers]; cfg.raw_materials];
    for per_s in raw_cost.iter_mut() {
        for c in per_s.iter_mut() {
            *c = rng.uniform(cfg.lbrmc, cfg.ubrmc);
        }
    }
    let truck_consumption: Vec<f64> = (0..cfg.trucks)
        .map(|_| rng.uniform(TRUCK_CONSUMPTION_RANGE.0, TRUCK_CONSUMPTION_RANGE.1))
        .collect();
    let tech_workers: Vec<f64> = tech_op_cost.iter().map(|&opc| cfg.fracwg * opc.ceil()).collect();

    // Social.
    let mut rng = Xoshiro256::section(cfg.seed, SECTION_SOCIAL);
    let labor_cost: Vec<f64> =
        (0..n_entities).map(|_| rng.uniform(LABOR_COST_RANGE.0, LABOR_COST_RANGE.1)).collect();
    let build_cost: Vec<f64> = (0..n_sites)
        .map(|s| {
            let entity = cfg.suppliers + s;
            let base = labor_cost[entity] * caps.area_max[s];
            rng.uniform(0.5 * base, cfg.ubsqmc + cfg.sqmcfac * base)
        })
        .collect();
    let gdp_index: Vec<f64> = (0..n_entities).map(|_| rng.uniform(GDP_RANGE.0, GDP_RANGE.1)).collect();
    let unemployment: Vec<f64> =
        (0..n_entities).map(|_| rng.uniform(UNEMPLOYMENT_RANGE.0, UNEMPLOYMENT_RANGE.1)).collect();
    let min_workers: Vec<f64> = (0..n_sites)
        .map(|s| {
            if s < cfg.factories {
                rng.uniform(cfg.lbwf, cfg.ubwf)
            } else {
                rng.uniform(cfg.lbww, cfg.ubww)
            }
        })
        .collect();
    let workers_per_sqm: Vec<f64> = (0..n_sites)
        .map(|s| {
            if s < cfg.factories {
                rng.uniform(cfg.lbwpsqf, cfg.ubwpsqf)
            } else {
                rng.uniform(cfg.lbwpsqw, cfg.ubwpsqw)
            }
        })
        .collect();

    // Environmental.
    let mut rng = Xoshiro256::section(cfg.seed, SECTION_ENV);
    let impact_install: Vec<f64> = (0..cfg.impact_categories)
        .map(|_| rng.uniform(IMPACT_INSTALL_RANGE.0, IMPACT_INSTALL_RANGE.1))
        .collect();
    let mut impact_production = vec![vec![vec![0.0; cfg.impact_categories]; n_techs]; cfg.final_products];
    for per_g in impact_production.iter_mut() {
        for per_c in per_g.iter_mut() {
            for v in per_c.iter_mut() {
                *v = rng.uniform(IMPACT_PRODUCTION_RANGE.0, IMPACT_PRODUCTION_RANGE.1);
            }
        }
    }
    let mut impact_transport = vec![vec![0.0; cfg.impact_categories]; n_modes];
    for per_c in impact_transport.iter_mut() {
        for v in per_c.iter_mut() {
            *v = rng.uniform(IMPACT_TRANSPORT_RANGE.0, IMPACT_TRANSPORT_RANGE.1);
        }
    }

    // Vehicle capacity scales with the heaviest per-period demand load.
    let peak_weight = (0..cfg.periods)
        .map(|t| {
            (0..cfg.final_products)
                .map(|fp| {
                    let w = items.item_weight[cfg.raw_materials + fp];
                    demand[fp].iter().map(|d| d[t]).sum::<f64>() * w
                })
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    let weight_base = if peak_weight > 0.0 { peak_weight } else { 1.0 };
    let mut vehicle_capacity = Vec::with_capacity(n_modes);
    let mut mode_tariff = Vec::with_capacity(n_modes);
    for _ in 0..cfg.trucks {
        vehicle_capacity.push((cfg.vcapfac_truck * weight_base).ceil());
        mode_tariff.push(0.0);
    }
    for _ in 0..cfg.planes {
        vehicle_capacity.push((cfg.vcapfac_plane * weight_base).ceil());
        mode_tariff.push(cfg.tariff_plane);
    }
    for _ in 0..cfg.boats {
        vehicle_capacity.push((cfg.vcapfac_boat * weight_base).ceil());
        mode_tariff.push(cfg.tariff_boat);
    }

    let mut instance = SscInstance {
        format_version: INSTANCE_FORMAT_VERSION,
        name: format!("{}_T{}_s{}", cfg.profile.name(), cfg.periods, cfg.seed),
        profile: cfg.profile.name().to_string(),
        seed: cfg.seed,
        n_suppliers: cfg.suppliers,
        n_factories: cfg.factories,
        n_warehouses: cfg.warehouses,
        n_customers: cfg.customers,
        n_airports: cfg.airports,
        n_seaports: cfg.seaports,
        n_raw: cfg.raw_materials,
        n_final: cfg.final_products,
        n_recovered,
        n_trucks: cfg.trucks,
        n_planes: cfg.planes,
        n_boats: cfg.boats,
        n_prod_techs: cfg.prod_techs,
        n_rem_techs: cfg.rem_techs,
        n_impact_categories: cfg.impact_categories,
        periods: cfg.periods,
        overseas,
        prod_compat,
        rem_compat,
        recovered_of,
        demand,
        bom_prod: items.bom_prod,
        bom_rem: items.bom_rem,
        item_weight: items.item_weight,
        item_area: items.item_area,
        return_rate: items.return_rate,
        tech_workers,
        stock_max: caps.stock_max,
        stock_min: caps.stock_min,
        tech_cap_max: caps.tech_cap_max,
        tech_cap_min: caps.tech_cap_min,
        area_max: caps.area_max,
        area_min: caps.area_min,
        supply_max: caps.supply_max,
        supply_min: caps.supply_min,
        dist: caps.dist,
        flow_cap: Vec::new(),
        tech_cost,
        tech_op_cost,
        sell_price,
        stock_cost,
        recover_cost,
        raw_cost,
        truck_consumption,
        mode_tariff,
        build_cost,
        labor_cost,
        gdp_index,
        unemployment,
        min_workers,
        workers_per_sqm,
        impact_install,
        impact_production,
        impact_transport,
        vehicle_capacity,
        trips_per_vehicle: cfg.ntrips,
        fuel_price: cfg.fuelprice,
        discount_rate: cfg.discount_rate,
    };
    // A per-entity flow cap that can never bind: the sum of every item's
    // horizon flow bound.
    let total_flow_bound: f64 = (0..instance.n_items()).map(|m| instance.item_flow_cap(m)).sum();
    instance.flow_cap = vec![total_flow_bound; n_entities];

    apply_profile(&mut instance, cfg.profile);
    Ok(instance)
}

/// Parameter patterns on top of a freshly sampled instance.
pub fn apply_profile(instance: &mut SscInstance, profile: Profile) {
    instance.profile = profile.name().to_string();
    match profile {
        Profile::Std => {}
        Profile::TechC => {
            let mean = instance.tech_cost.iter().sum::<f64>() / instance.tech_cost.len() as f64;
            for c in instance.tech_cost.iter_mut() {
                *c = mean;
            }
        }
        Profile::RawC => {
            for per_s in instance.raw_cost.iter_mut() {
                let mean = per_s.iter().sum::<f64>() / per_s.len() as f64;
                for c in per_s.iter_mut() {
                    *c = mean;
                }
            }
        }
        Profile::Sup => {
            for per_s in instance.supply_min.iter_mut() {
                for v in per_s.iter_mut() {
                    *v = 0.0;
                }
            }
        }
        Profile::Cap => {
            for v in instance.tech_cap_min.iter_mut() {
                *v = 0.0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_with(seed: u64) -> GenConfig {
        let mut cfg = GenConfig::default();
        cfg.seed = seed;
        cfg
    }

    #[test]
    fn deterministic_byte_identical() {
        let a = generate(&cfg_with(7)).unwrap();
        let b = generate(&cfg_with(7)).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let c = generate(&cfg_with(8)).unwrap();
        assert_ne!(a.to_json(), c.to_json());
    }

    #[test]
    fn default_shape_matches_benchmark_protocol() {
        let inst = generate(&cfg_with(1)).unwrap();
        assert_eq!(inst.n_suppliers, 3);
        assert_eq!(inst.n_factories, 3);
        assert_eq!(inst.n_warehouses, 3);
        assert_eq!(inst.n_customers, 4);
        assert_eq!(inst.n_airports, 2);
        assert_eq!(inst.n_seaports, 2);
        assert_eq!(inst.n_raw, 2);
        assert_eq!(inst.n_final, 1);
        assert_eq!(inst.n_techs(), 6);
        assert!(inst.validate().is_empty(), "{:?}", inst.validate());
    }

    #[test]
    fn demand_recurrence() {
        let mut cfg = cfg_with(3);
        cfg.lbdc = 100.0;
        cfg.ubdc = 100.0;
        cfg.vart = 0.1;
        let mut rng = Xoshiro256::section(3, SECTION_DEMANDS);
        let d = sample_demand(&cfg, &mut rng);
        assert!((d[0][0][0] - 100.0).abs() < 1e-12);
        assert!((d[0][0][1] - 110.0).abs() < 1e-9);
        assert!((d[0][0][2] - 121.0).abs() < 1e-9);
    }

    #[test]
    fn constant_demand_when_vart_zero() {
        let mut cfg = cfg_with(3);
        cfg.vart = 0.0;
        let mut rng = Xoshiro256::section(3, SECTION_DEMANDS);
        let d = sample_demand(&cfg, &mut rng);
        for per_c in &d {
            for series in per_c {
                for t in 1..series.len() {
                    assert_eq!(series[t], series[0]);
                }
            }
        }
    }

    #[test]
    fn derived_item_weights() {
        // One raw material, one tech: pw_fp = bom * pw_rm; pw_rp = bom_rem * pw_fp.
        let mut cfg = cfg_with(5);
        cfg.raw_materials = 1;
        cfg.prod_techs = 1;
        cfg.rem_techs = 1;
        cfg.lbpw = 2.0;
        cfg.ubpw = 2.0;
        cfg.lbbomprod = 3.0;
        cfg.ubbomprod = 3.0;
        cfg.lbbomrem = 2.0;
        cfg.ubbomrem = 2.0;
        let mut rng = Xoshiro256::section(5, SECTION_ITEMS);
        let items = sample_items(&cfg, &[0], &mut rng);
        assert!((items.item_weight[0] - 2.0).abs() < 1e-12);
        assert!((items.item_weight[1] - 6.0).abs() < 1e-9);
        assert!((items.item_weight[2] - 12.0).abs() < 1e-9);
    }

    #[test]
    fn zero_return_rate_possible() {
        let mut cfg = cfg_with(5);
        cfg.ubret = 0.0;
        let inst = generate(&cfg).unwrap();
        assert!(inst.return_rate.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn profiles() {
        let mut cfg = cfg_with(11);
        let std = generate(&cfg).unwrap();
        cfg.profile = Profile::Sup;
        let sup = generate(&cfg).unwrap();
        assert!(sup.supply_min.iter().flatten().all(|&v| v == 0.0));
        cfg.profile = Profile::Cap;
        let cap = generate(&cfg).unwrap();
        assert!(cap.tech_cap_min.iter().all(|&v| v == 0.0));
        cfg.profile = Profile::TechC;
        let techc = generate(&cfg).unwrap();
        let first = techc.tech_cost[0];
        assert!(techc.tech_cost.iter().all(|&v| (v - first).abs() < 1e-9));
        cfg.profile = Profile::RawC;
        let rawc = generate(&cfg).unwrap();
        for per_s in &rawc.raw_cost {
            let f = per_s[0];
            assert!(per_s.iter().all(|&v| (v - f).abs() < 1e-9));
        }
        // Profiles only rewrite their own family.
        assert_eq!(std.demand, sup.demand);
        assert_eq!(std.demand, techc.demand);
    }
}
