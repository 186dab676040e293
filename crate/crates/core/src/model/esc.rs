use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EscParams {
    pub max_voltage_v: f64,
    pub max_current_a: f64,
    pub resistance_ohm: f64,
}

impl EscParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.max_voltage_v > 0.0 && self.max_current_a > 0.0) {
            return Err(Error::domain("ESC voltage and current ratings must be positive"));
        }
        if !(self.resistance_ohm >= 0.0) {
            return Err(Error::domain("ESC resistance must be nonnegative"));
        }
        Ok(())
    }
}

/// Throttle and input current of the ESC for a given motor state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EscState {
    pub throttle: f64,
    pub current_a: f64,
}

/// Solves σ·U_e = U_m + I_m·R_e and I_e = σ·I_m.
pub fn esc_solve(
    motor_voltage_v: f64,
    motor_current_a: f64,
    esc_voltage_v: f64,
    resistance_ohm: f64,
) -> Result<EscState> {
    if !(esc_voltage_v > 0.0) {
        return Err(Error::domain(format!(
            "ESC input voltage {esc_voltage_v} V must be positive"
        )));
    }
    let throttle = (motor_voltage_v + motor_current_a * resistance_ohm) / esc_voltage_v;
    if throttle < 0.0 {
        return Err(Error::domain(format!("negative throttle {throttle}")));
    }
    if throttle > 1.0 {
        return Err(Error::ThrottleInfeasible { throttle });
    }
    Ok(EscState {
        throttle,
        current_a: throttle * motor_current_a,
    })
}

/// η_e = 1 / (1 + I_m·R_e/U_m).
pub fn esc_efficiency(motor_voltage_v: f64, motor_current_a: f64, resistance_ohm: f64) -> Result<f64> {
    if !(motor_voltage_v > 0.0) {
        return Err(Error::domain("ESC efficiency needs a positive motor voltage"));
    }
    let eta = 1.0 / (1.0 + motor_current_a * resistance_ohm / motor_voltage_v);
    if (0.0..=1.0).contains(&eta) {
        Ok(eta)
    } else {
        Err(Error::ModelInconsistent(format!("ESC efficiency {eta} outside [0, 1]")))
    }
}
