//! Product selection rules. Every rule first filters on its safety floors
//! and then takes the lexicographic minimum of its ranking key; the product
//! identifier is always the last key, so catalog order never matters.

use std::cmp::Ordering;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::Product;
use crate::error::{Error, Result};
use crate::model::{BatteryParams, EscParams, MotorParams, PropellerParams};
use crate::units::cells_to_volts;

fn chain(orderings: impl IntoIterator<Item = Ordering>) -> Ordering {
    orderings.into_iter().find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MotorTarget {
    pub max_voltage_v: f64,
    pub max_current_a: f64,
    pub kv_rpm_per_v: f64,
}

/// Lowest rated voltage at or above the target, then KV nearest the target,
/// then the lowest rated current at or above the target, then lowest
/// resistance, then lowest no-load current.
pub fn select_motor<'a>(target: &MotorTarget, motors: &'a [Product<MotorParams>]) -> Result<&'a Product<MotorParams>> {
    let voltage_ok: Vec<_> = motors
        .iter()
        .filter(|m| m.params.max_voltage_v >= target.max_voltage_v)
        .collect();
    if voltage_ok.is_empty() {
        return Err(Error::SelectionInfeasible {
            class: "motor",
            constraint: format!("U*_mMax ≥ {:.2} V", target.max_voltage_v),
        });
    }
    voltage_ok
        .into_iter()
        .filter(|m| m.params.max_current_a >= target.max_current_a)
        .min_by(|a, b| {
            let (p, q) = (&a.params, &b.params);
            chain([
                p.max_voltage_v.total_cmp(&q.max_voltage_v),
                (p.kv_rpm_per_v - target.kv_rpm_per_v)
                    .abs()
                    .total_cmp(&(q.kv_rpm_per_v - target.kv_rpm_per_v).abs()),
                p.max_current_a.total_cmp(&q.max_current_a),
                p.resistance_ohm.total_cmp(&q.resistance_ohm),
                p.no_load_current_a.total_cmp(&q.no_load_current_a),
                a.weight_n.total_cmp(&b.weight_n),
                a.id.cmp(&b.id),
            ])
        })
        .ok_or_else(|| Error::SelectionInfeasible {
            class: "motor",
            constraint: format!(
                "I*_mMax ≥ {:.2} A at U*_mMax ≥ {:.2} V",
                target.max_current_a, target.max_voltage_v
            ),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PropellerTarget {
    pub blades: u32,
    pub pitch_angle: f64,
    pub diameter_m: f64,
    /// Half-width of the pitch-angle band, as a fraction of `pitch_angle`.
    pub pitch_band: f64,
}

/// Matching blade count, then pitch angle within the band around the target,
/// then the largest diameter not above the target, then the nearest pitch
/// angle. Without any product inside the band the nearest pitch angle comes
/// before diameter.
pub fn select_propeller<'a>(
    target: &PropellerTarget,
    propellers: &'a [Product<PropellerParams>],
) -> Result<&'a Product<PropellerParams>> {
    let blades: Vec<_> = propellers.iter().filter(|p| p.params.blades == target.blades).collect();
    if blades.is_empty() {
        return Err(Error::SelectionInfeasible {
            class: "propeller",
            constraint: format!("B*_p = {}", target.blades),
        });
    }
    let dphi = |p: &Product<PropellerParams>| (p.params.pitch_angle() - target.pitch_angle).abs();
    let half_width = target.pitch_band * target.pitch_angle;
    let in_band: Vec<_> = blades.iter().copied().filter(|p| dphi(p) <= half_width).collect();
    let banded = !in_band.is_empty();
    let pool = if banded { in_band } else { blades };
    pool.into_iter()
        .filter(|p| p.params.diameter_m <= target.diameter_m)
        .min_by(|a, b| {
            let diameter = b.params.diameter_m.total_cmp(&a.params.diameter_m);
            let pitch = dphi(a).total_cmp(&dphi(b));
            let (first, second) = if banded { (diameter, pitch) } else { (pitch, diameter) };
            chain([first, second, a.weight_n.total_cmp(&b.weight_n), a.id.cmp(&b.id)])
        })
        .ok_or_else(|| Error::SelectionInfeasible {
            class: "propeller",
            constraint: format!("D*_p ≤ {:.4} m", target.diameter_m),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EscTarget {
    pub max_voltage_v: f64,
    pub max_current_a: f64,
}

/// Lowest rated voltage, then lowest rated current, each at or above the
/// target, then lowest resistance.
pub fn select_esc<'a>(target: &EscTarget, escs: &'a [Product<EscParams>]) -> Result<&'a Product<EscParams>> {
    escs.iter()
        .filter(|e| e.params.max_voltage_v >= target.max_voltage_v && e.params.max_current_a >= target.max_current_a)
        .min_by(|a, b| {
            let (p, q) = (&a.params, &b.params);
            chain([
                p.max_voltage_v.total_cmp(&q.max_voltage_v),
                p.max_current_a.total_cmp(&q.max_current_a),
                p.resistance_ohm.total_cmp(&q.resistance_ohm),
                a.weight_n.total_cmp(&b.weight_n),
                a.id.cmp(&b.id),
            ])
        })
        .ok_or_else(|| Error::SelectionInfeasible {
            class: "esc",
            constraint: format!(
                "U*_eMax ≥ {:.2} V and I*_eMax ≥ {:.2} A",
                target.max_voltage_v, target.max_current_a
            ),
        })
}

/// Series/parallel composition caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct PackLimits {
    pub max_series: u32,
    pub max_parallel: u32,
}

impl Default for PackLimits {
    fn default() -> Self {
        Self {
            max_series: 8,
            max_parallel: 8,
        }
    }
}

/// A battery built from identical catalog units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct BatteryPack {
    pub unit_id: String,
    pub unit: BatteryParams,
    pub series: u32,
    pub parallel: u32,
    /// Electrical parameters of the whole pack.
    pub params: BatteryParams,
    pub weight_n: f64,
}

impl BatteryPack {
    pub fn compose(unit: &Product<BatteryParams>, series: u32, parallel: u32) -> Self {
        let u = unit.params;
        Self {
            unit_id: unit.id.clone(),
            unit: u,
            series,
            parallel,
            params: BatteryParams {
                cells: u.cells * series,
                capacity_mah: u.capacity_mah * f64::from(parallel),
                max_discharge_c: u.max_discharge_c,
                resistance_ohm: u.resistance_ohm * f64::from(series) / f64::from(parallel),
            },
            weight_n: unit.weight_n * f64::from(series * parallel),
        }
    }

    pub fn units(&self) -> u32 {
        self.series * self.parallel
    }

    /// Every composition of every unit within `limits`.
    pub fn enumerate<'a>(
        batteries: &'a [Product<BatteryParams>],
        limits: PackLimits,
    ) -> impl Iterator<Item = BatteryPack> + 'a {
        batteries.iter().flat_map(move |b| {
            (1..=limits.max_series)
                .flat_map(move |s| (1..=limits.max_parallel).map(move |p| BatteryPack::compose(b, s, p)))
        })
    }

    pub fn label(&self) -> String {
        match (self.series, self.parallel) {
            (1, 1) => self.unit_id.clone(),
            (s, 1) => format!("{} ×{s} series", self.unit_id),
            (1, p) => format!("{} ×{p} parallel", self.unit_id),
            (s, p) => format!("{} ×{s} series ×{p} parallel", self.unit_id),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct BatteryTarget {
    pub cells: u32,
    pub capacity_mah: f64,
    pub max_discharge_c: f64,
    /// Pack current the motors can draw together at their rated limits.
    pub min_pack_current_a: f64,
    /// Packs below this fraction of the target capacity are not considered.
    pub capacity_floor: f64,
}

/// Exact voltage, discharge rate and pack current as hard limits; then the
/// capacity closest to the target, then lowest weight, then fewest units.
pub fn select_battery(
    target: &BatteryTarget,
    batteries: &[Product<BatteryParams>],
    limits: PackLimits,
) -> Result<BatteryPack> {
    if batteries.is_empty() {
        return Err(Error::SelectionInfeasible {
            class: "battery",
            constraint: "a nonempty battery catalog".into(),
        });
    }
    let voltage_ok: Vec<BatteryPack> = BatteryPack::enumerate(batteries, limits)
        .filter(|p| p.params.cells == target.cells)
        .collect();
    if voltage_ok.is_empty() {
        let want = cells_to_volts(target.cells);
        let nearest = BatteryPack::enumerate(batteries, limits)
            .map(|p| p.params.voltage_v())
            .min_by(|a, b| (a - want).abs().total_cmp(&(b - want).abs()))
            .unwrap_or(0.0);
        return Err(Error::SelectionInfeasible {
            class: "battery",
            constraint: format!("U*_b = {want} V (nearest composable voltage {nearest} V)"),
        });
    }
    let floor = target.capacity_floor * target.capacity_mah;
    voltage_ok
        .into_iter()
        .filter(|p| {
            p.params.max_discharge_c >= target.max_discharge_c
                && p.params.max_current_a() >= target.min_pack_current_a
                && p.params.capacity_mah >= floor
        })
        .min_by(|a, b| {
            chain([
                (a.params.capacity_mah - target.capacity_mah)
                    .abs()
                    .total_cmp(&(b.params.capacity_mah - target.capacity_mah).abs()),
                a.weight_n.total_cmp(&b.weight_n),
                a.units().cmp(&b.units()),
                a.unit_id.cmp(&b.unit_id),
                a.series.cmp(&b.series),
            ])
        })
        .ok_or_else(|| Error::SelectionInfeasible {
            class: "battery",
            constraint: format!(
                "K*_b ≥ {:.2} C, pack current ≥ {:.1} A and C*_b ≥ {:.0} mAh at {} V",
                target.max_discharge_c,
                target.min_pack_current_a,
                floor,
                cells_to_volts(target.cells)
            ),
        })
}
