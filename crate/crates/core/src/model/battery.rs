use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{cells_to_volts, GRAVITY};

/// Usable fraction of capacity; 15% is held in reserve.
pub const USABLE_CAPACITY_FRACTION: f64 = 0.85;

/// Typical LiPo specific energy, Wh/kg.
pub const LIPO_ENERGY_DENSITY_WH_PER_KG: f64 = 140.0;

/// Current drawn by avionics when only a flight controller is fitted.
pub const DEFAULT_OTHER_CURRENT_A: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct BatteryParams {
    pub cells: u32,
    pub capacity_mah: f64,
    /// Maximum discharge rate in "C".
    pub max_discharge_c: f64,
    pub resistance_ohm: f64,
}

impl BatteryParams {
    pub fn validate(&self) -> Result<()> {
        if self.cells == 0 {
            return Err(Error::domain("battery needs at least one cell"));
        }
        if !(self.capacity_mah > 0.0 && self.max_discharge_c > 0.0) {
            return Err(Error::domain("battery capacity and discharge rate must be positive"));
        }
        if !(self.resistance_ohm >= 0.0) {
            return Err(Error::domain("battery resistance must be nonnegative"));
        }
        Ok(())
    }

    pub fn voltage_v(&self) -> f64 {
        cells_to_volts(self.cells)
    }

    /// I_bMax = K_b·C_b/1000.
    pub fn max_current_a(&self) -> f64 {
        self.max_discharge_c * self.capacity_mah / 1000.0
    }

    pub fn energy_wh(&self) -> f64 {
        self.capacity_mah * self.voltage_v() / 1000.0
    }
}

/// Battery current and ESC supply voltage for `rotors` ESCs each drawing
/// `esc_current_a`.
pub fn battery_chain(
    esc_current_a: f64,
    rotors: u32,
    other_current_a: f64,
    battery_voltage_v: f64,
    resistance_ohm: f64,
) -> Result<(f64, f64)> {
    if esc_current_a < 0.0 || other_current_a < 0.0 || battery_voltage_v < 0.0 || resistance_ohm < 0.0 {
        return Err(Error::domain("battery chain inputs must be nonnegative"));
    }
    let battery_current = f64::from(rotors) * esc_current_a + other_current_a;
    let esc_voltage = battery_voltage_v - battery_current * resistance_ohm;
    if esc_voltage <= 0.0 {
        return Err(Error::Brownout {
            esc_voltage_v: esc_voltage,
        });
    }
    Ok((battery_current, esc_voltage))
}

/// Minutes until 85% of `capacity_mah` is drained at `battery_current_a`.
pub fn discharge_time(capacity_mah: f64, battery_current_a: f64) -> Result<f64> {
    if battery_current_a == 0.0 {
        return Err(Error::InfiniteEndurance);
    }
    if !(battery_current_a > 0.0) || !(capacity_mah >= 0.0) {
        return Err(Error::domain(
            "discharge time needs nonnegative capacity and positive current",
        ));
    }
    Ok(USABLE_CAPACITY_FRACTION * capacity_mah / battery_current_a * 60.0 / 1000.0)
}

/// Capacity (mAh) that sustains `battery_current_a` for `minutes`.
pub fn capacity_for_endurance(minutes: f64, battery_current_a: f64) -> f64 {
    minutes * battery_current_a / USABLE_CAPACITY_FRACTION * 1000.0 / 60.0
}

/// Battery weight in newtons from stored energy and specific energy. The
/// energy over specific energy gives a mass, so gravity multiplies.
pub fn battery_weight(capacity_mah: f64, voltage_v: f64, energy_density_wh_per_kg: f64) -> Result<f64> {
    if !(energy_density_wh_per_kg > 0.0) || capacity_mah < 0.0 || voltage_v < 0.0 {
        return Err(Error::domain("battery weight needs positive energy density"));
    }
    Ok(GRAVITY * capacity_mah * voltage_v / 1000.0 / energy_density_wh_per_kg)
}

/// η_b = (1 − I_b·R_b/U_b)·(1 − I_other/I_b).
pub fn battery_efficiency(
    battery_current_a: f64,
    voltage_v: f64,
    resistance_ohm: f64,
    other_current_a: f64,
) -> Result<f64> {
    if !(battery_current_a > 0.0 && voltage_v > 0.0) {
        return Err(Error::domain("battery efficiency needs positive current and voltage"));
    }
    let eta = (1.0 - battery_current_a * resistance_ohm / voltage_v) * (1.0 - other_current_a / battery_current_a);
    if (0.0..=1.0).contains(&eta) {
        Ok(eta)
    } else {
        Err(Error::ModelInconsistent(format!(
            "battery efficiency {eta} outside [0, 1]"
        )))
    }
}
