//! Exhaustive search over every catalog combination, used as the optimality
//! oracle for the analytical pipeline and as its complexity foil.

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::catalog::{BatteryPack, Catalog, PackLimits};
use crate::error::{Error, Result};
use crate::evaluator::{check_safety, hover_point};
use crate::model::battery::discharge_time;
use crate::model::{BladeCoeffs, DesignRequirements};
use crate::optimizer::{optimize, OptimizerConfig, Selection};
use crate::stats::StatModels;

pub const DEFAULT_COMBINATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default)]
pub struct BruteForceConfig {
    /// Refuse catalogs whose record combination count exceeds this.
    pub combination_cap: u64,
    pub pack_limits: PackLimits,
    pub blade_coeffs: BladeCoeffs,
    /// Spread combinations over the rayon pool.
    pub parallel: bool,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        Self {
            combination_cap: DEFAULT_COMBINATION_CAP,
            pack_limits: PackLimits::default(),
            blade_coeffs: BladeCoeffs::default(),
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct BruteForceResult {
    pub selection: Selection,
    pub system_weight_n: f64,
    pub endurance_min: f64,
    /// Propeller × motor × ESC × battery record combinations visited.
    pub combinations_evaluated: u64,
    /// Battery compositions scored across all combinations.
    pub pack_evaluations: u64,
}

struct Candidate {
    weight: f64,
    endurance: f64,
    idx: [usize; 4],
    pack: BatteryPack,
}

impl Candidate {
    fn key_cmp(&self, other: &Self, catalog: &Catalog) -> Ordering {
        let ids = |c: &Candidate| {
            (
                catalog.propellers[c.idx[0]].id.as_str(),
                catalog.motors[c.idx[1]].id.as_str(),
                catalog.escs[c.idx[2]].id.as_str(),
                catalog.batteries[c.idx[3]].id.as_str(),
                c.pack.series,
                c.pack.parallel,
            )
        };
        self.weight
            .total_cmp(&other.weight)
            .then_with(|| ids(self).cmp(&ids(other)))
    }
}

fn better(a: Option<Candidate>, b: Option<Candidate>, catalog: &Catalog) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.key_cmp(&a, catalog) == Ordering::Less { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Best feasible pack for one record combination, and how many packs were
/// scored. Packs grow heavier with the parallel count, so the first feasible
/// one per series count is the lightest for that series count.
fn score_combination(
    req: &DesignRequirements,
    catalog: &Catalog,
    idx: [usize; 4],
    config: &BruteForceConfig,
    k_c: f64,
) -> (Option<Candidate>, u64) {
    let prop = &catalog.propellers[idx[0]];
    let motor = &catalog.motors[idx[1]];
    let esc = &catalog.escs[idx[2]];
    let unit = &catalog.batteries[idx[3]];
    let per_rotor = f64::from(req.rotor_count) * (prop.weight_n + motor.weight_n + esc.weight_n);
    let mut best: Option<Candidate> = None;
    let mut scored = 0;
    let template = Selection {
        propeller: prop.clone(),
        motor: motor.clone(),
        esc: esc.clone(),
        battery: BatteryPack::compose(unit, 1, 1),
    };
    let voltage_limit = motor.params.max_voltage_v.min(esc.params.max_voltage_v);
    let full_load = f64::from(req.rotor_count) * motor.params.max_current_a + req.other_current_a;
    'series: for series in 1..=config.pack_limits.max_series {
        for parallel in 1..=config.pack_limits.max_parallel {
            let pack = BatteryPack::compose(unit, series, parallel);
            // cheap necessary conditions of the safety check
            if pack.params.voltage_v() > voltage_limit {
                break 'series;
            }
            if pack.params.max_current_a() < full_load {
                continue;
            }
            let weight = per_rotor + pack.weight_n;
            if best.as_ref().is_some_and(|b| b.weight < weight) {
                break;
            }
            scored += 1;
            let mut selection = template.clone();
            selection.battery = pack;
            let system = selection.system(req, config.blade_coeffs);
            if !check_safety(&system, req.max_thrust_n, k_c).is_empty() {
                continue;
            }
            let Ok(hover) = hover_point(&system, req.hover_thrust_n) else {
                continue;
            };
            let Ok(endurance) = discharge_time(system.battery.capacity_mah, hover.point.battery_current_a) else {
                continue;
            };
            if endurance >= req.endurance_min {
                let c = Candidate {
                    weight,
                    endurance,
                    idx,
                    pack: selection.battery,
                };
                best = better(best, Some(c), catalog);
                break;
            }
        }
    }
    (best, scored)
}

/// Lightest combination that passes every safety check and meets the
/// endurance target. Ties go to the lexicographically smallest identifiers.
pub fn brute_force(
    req: &DesignRequirements,
    catalog: &Catalog,
    k_c: f64,
    config: &BruteForceConfig,
) -> Result<BruteForceResult> {
    let [np, nm, ne, nb] = catalog.counts();
    let combinations = [np, nm, ne, nb]
        .iter()
        .try_fold(1u64, |acc, n| acc.checked_mul(*n as u64))
        .unwrap_or(u64::MAX);
    if combinations > config.combination_cap {
        return Err(Error::SearchTooLarge {
            combinations,
            cap: config.combination_cap,
        });
    }
    let index = |i: u64| {
        let i = i as usize;
        [i / (nm * ne * nb), (i / (ne * nb)) % nm, (i / nb) % ne, i % nb]
    };
    let (best, scored) = if config.parallel {
        (0..combinations)
            .into_par_iter()
            .map(|i| score_combination(req, catalog, index(i), config, k_c))
            .reduce(|| (None, 0), |a, b| (better(a.0, b.0, catalog), a.1 + b.1))
    } else {
        (0..combinations)
            .map(|i| score_combination(req, catalog, index(i), config, k_c))
            .fold((None, 0), |a, b| (better(a.0, b.0, catalog), a.1 + b.1))
    };
    let best = best.ok_or(Error::NoFeasibleCombination {
        evaluated: combinations,
    })?;
    Ok(BruteForceResult {
        selection: Selection {
            propeller: catalog.propellers[best.idx[0]].clone(),
            motor: catalog.motors[best.idx[1]].clone(),
            esc: catalog.escs[best.idx[2]].clone(),
            battery: best.pack,
        },
        system_weight_n: best.weight,
        endurance_min: best.endurance,
        combinations_evaluated: combinations,
        pack_evaluations: scored,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MethodSummary {
    pub system_weight_n: f64,
    pub endurance_min: f64,
    pub wall_time_ms: f64,
    /// Hover solves for the analytical method; record combinations for the
    /// exhaustive one.
    pub evaluations: u64,
    pub propeller: String,
    pub motor: String,
    pub esc: String,
    pub battery: String,
}

impl MethodSummary {
    fn new(selection: &Selection, weight: f64, endurance: f64, wall: f64, evaluations: u64) -> Self {
        Self {
            system_weight_n: weight,
            endurance_min: endurance,
            wall_time_ms: wall,
            evaluations,
            propeller: selection.propeller.id.clone(),
            motor: selection.motor.id.clone(),
            esc: selection.esc.id.clone(),
            battery: selection.battery.label(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ComparisonReport {
    pub analytical: MethodSummary,
    pub brute_force: MethodSummary,
    /// Analytical weight over exhaustive weight.
    pub weight_ratio: f64,
    /// True when the analytical design also meets the exhaustive search's
    /// rules (full endurance target), so the exhaustive weight must bound it.
    pub analytical_in_search_space: bool,
    pub lower_bound_holds: bool,
}

impl ComparisonReport {
    pub fn to_table(&self) -> String {
        let row = |name: &str, m: &MethodSummary| {
            format!(
                "{name:<12} {:>10.3} {:>10.2} {:>12.3} {:>12}  {} | {} | {} | {}\n",
                m.system_weight_n,
                m.endurance_min,
                m.wall_time_ms,
                m.evaluations,
                m.propeller,
                m.motor,
                m.esc,
                m.battery
            )
        };
        let mut s = format!(
            "{:<12} {:>10} {:>10} {:>12} {:>12}  selection\n",
            "method", "weight N", "t min", "time ms", "evaluations"
        );
        s += &row("analytical", &self.analytical);
        s += &row("brute force", &self.brute_force);
        s += &format!("weight ratio {:.4}\n", self.weight_ratio);
        s
    }
}

/// Runs both methods on the same inputs.
pub fn compare(
    req: &DesignRequirements,
    catalog: &Catalog,
    models: &StatModels,
    opt_config: &OptimizerConfig,
    bf_config: &BruteForceConfig,
) -> Result<ComparisonReport> {
    let start = Instant::now();
    let design = optimize(req, catalog, models, opt_config)?;
    let analytical_ms = start.elapsed().as_secs_f64() * 1000.0;

    let start = Instant::now();
    let bf = brute_force(req, catalog, models.k_c, bf_config)?;
    let brute_ms = start.elapsed().as_secs_f64() * 1000.0;

    let in_space = design.performance.endurance_min >= req.endurance_min && design.performance.violations.is_empty();
    let lower_bound_holds = !in_space || bf.system_weight_n <= design.system_weight_n * (1.0 + 1e-12);
    Ok(ComparisonReport {
        analytical: MethodSummary::new(
            &design.selection,
            design.system_weight_n,
            design.performance.endurance_min,
            analytical_ms,
            design.hover_evaluations as u64,
        ),
        brute_force: MethodSummary::new(
            &bf.selection,
            bf.system_weight_n,
            bf.endurance_min,
            brute_ms,
            bf.combinations_evaluated,
        ),
        weight_ratio: design.system_weight_n / bf.system_weight_n,
        analytical_in_search_space: in_space,
        lower_bound_holds,
    })
}
