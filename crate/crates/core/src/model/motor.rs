use std::f64::consts::PI;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::propeller::AeroCoeffs;
use crate::error::{Error, Result};

/// Manufacturer no-load test voltage when the datasheet is silent.
pub const DEFAULT_NO_LOAD_VOLTAGE_V: f64 = 10.0;

fn default_no_load_voltage() -> f64 {
    DEFAULT_NO_LOAD_VOLTAGE_V
}

/// BLDC motor datasheet parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MotorParams {
    pub max_voltage_v: f64,
    pub max_current_a: f64,
    pub kv_rpm_per_v: f64,
    pub no_load_current_a: f64,
    #[serde(default = "default_no_load_voltage")]
    pub no_load_voltage_v: f64,
    pub resistance_ohm: f64,
    /// Highest thrust reported in the vendor's bench tests, used only to fit
    /// catalog statistics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_max_thrust_n: Option<f64>,
}

/// Speed and torque of a motor driven at its rated voltage and current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MotorLimits {
    pub max_speed_rpm: f64,
    pub max_torque_nm: f64,
}

impl MotorParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.max_voltage_v,
            self.max_current_a,
            self.kv_rpm_per_v,
            self.no_load_current_a,
            self.no_load_voltage_v,
            self.resistance_ohm,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::domain("motor parameters must be finite"));
        }
        if self.max_voltage_v <= 0.0 || self.kv_rpm_per_v <= 0.0 {
            return Err(Error::domain("motor voltage and KV must be positive"));
        }
        if self.no_load_current_a < 0.0 || self.resistance_ohm < 0.0 {
            return Err(Error::domain(
                "motor no-load current and resistance must be nonnegative",
            ));
        }
        if self.max_current_a <= self.no_load_current_a {
            return Err(Error::domain(format!(
                "motor max current {} A must exceed no-load current {} A",
                self.max_current_a, self.no_load_current_a
            )));
        }
        if self.back_emf_voltage() <= 0.0 {
            return Err(Error::domain("motor no-load voltage must exceed I_m0·R_m"));
        }
        Ok(())
    }

    /// U_m0 − I_m0·R_m, the back-EMF at the no-load test point.
    fn back_emf_voltage(&self) -> f64 {
        self.no_load_voltage_v - self.no_load_current_a * self.resistance_ohm
    }

    /// Equivalent current and voltage (I_m, U_m) when the motor delivers
    /// `torque_nm` at `speed_rpm`.
    pub fn electrical_state(&self, torque_nm: f64, speed_rpm: f64) -> Result<(f64, f64)> {
        if torque_nm < 0.0 || speed_rpm < 0.0 {
            return Err(Error::domain("motor torque and speed must be nonnegative"));
        }
        let emf = self.back_emf_voltage();
        if emf <= 0.0 {
            return Err(Error::domain("degenerate motor: U_m0 ≤ I_m0·R_m"));
        }
        let current =
            PI * torque_nm * self.kv_rpm_per_v * self.no_load_voltage_v / (30.0 * emf) + self.no_load_current_a;
        let voltage = current * self.resistance_ohm + emf * speed_rpm / (self.kv_rpm_per_v * self.no_load_voltage_v);
        Ok((current, voltage))
    }

    pub fn limits(&self) -> Result<MotorLimits> {
        let emf = self.back_emf_voltage();
        if emf <= 0.0 {
            return Err(Error::domain("degenerate motor: U_m0 ≤ I_m0·R_m"));
        }
        let headroom = self.max_voltage_v - self.resistance_ohm * self.max_current_a;
        if headroom <= 0.0 {
            return Err(Error::InfeasibleMotor(format!(
                "U_mMax {} V ≤ R_m·I_mMax {} V",
                self.max_voltage_v,
                self.resistance_ohm * self.max_current_a
            )));
        }
        Ok(MotorLimits {
            max_speed_rpm: headroom * self.kv_rpm_per_v * self.no_load_voltage_v / emf,
            max_torque_nm: 30.0 * (self.max_current_a - self.no_load_current_a) * emf
                / (PI * self.kv_rpm_per_v * self.no_load_voltage_v),
        })
    }

    /// Thrust reached when a propeller with `coeffs` is sized so that the
    /// motor hits both its speed and torque limits together.
    pub fn theoretical_max_thrust(&self, coeffs: AeroCoeffs, density: f64) -> Result<f64> {
        let lim = self.limits()?;
        Ok(coeffs.thrust_torque_ratio()
            * lim.max_torque_nm.powf(0.8)
            * density.powf(0.2)
            * coeffs.torque.powf(0.2)
            * lim.max_speed_rpm.powf(0.4)
            / 60f64.powf(0.4))
    }

    /// Thrust capability from the simplified ideal-motor relation with the
    /// empirical correction `k_c`, i.e. k_tm·(I_mMax²·U_mMax/K_V)^{2/5}.
    pub fn rated_thrust(&self, coeffs: AeroCoeffs, density: f64, k_c: f64) -> f64 {
        thrust_motor_constant(coeffs, density, k_c)
            * (self.max_current_a.powi(2) * self.max_voltage_v / self.kv_rpm_per_v).powf(0.4)
    }
}

/// k_tm = (k_c·255·ρ·C_T⁵ / (π⁴·C_M⁴))^{1/5}.
pub fn thrust_motor_constant(coeffs: AeroCoeffs, density: f64, k_c: f64) -> f64 {
    (k_c * 255.0 * density * coeffs.thrust.powi(5) / (PI.powi(4) * coeffs.torque.powi(4))).powf(0.2)
}

/// η_m = (1 − I_m·R_m/U_m)·(1 − I_m0/I_m). Values outside [0, 1] mean the
/// operating point is inconsistent with the motor and are reported as errors.
pub fn motor_efficiency(voltage_v: f64, current_a: f64, resistance_ohm: f64, no_load_current_a: f64) -> Result<f64> {
    if !(voltage_v > 0.0 && current_a > 0.0) {
        return Err(Error::domain("motor efficiency needs positive voltage and current"));
    }
    let eta = (1.0 - current_a * resistance_ohm / voltage_v) * (1.0 - no_load_current_a / current_a);
    if (0.0..=1.0).contains(&eta) {
        Ok(eta)
    } else {
        Err(Error::ModelInconsistent(format!(
            "motor efficiency {eta} outside [0, 1]"
        )))
    }
}

/// Resistance back-computed from a full-throttle bench point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ResistanceEstimate {
    pub resistance_ohm: f64,
    /// Set when a nominal value was supplied and the estimate lies outside
    /// [1.5, 4]× of it.
    pub suspicious: bool,
}

pub fn correct_motor_resistance(
    battery_voltage_v: f64,
    kv_rpm_per_v: f64,
    full_throttle_current_a: f64,
    full_throttle_speed_rpm: f64,
    nominal_resistance_ohm: Option<f64>,
) -> Result<ResistanceEstimate> {
    if !(full_throttle_current_a > 0.0) || !(kv_rpm_per_v > 0.0) {
        return Err(Error::domain("full-throttle current and KV must be positive"));
    }
    let r = (battery_voltage_v - full_throttle_speed_rpm / kv_rpm_per_v) / full_throttle_current_a;
    if r < 0.0 {
        return Err(Error::ModelInconsistent(format!(
            "test data imply negative resistance ({r:.4} Ω): speed exceeds U_b·K_V"
        )));
    }
    let suspicious = nominal_resistance_ohm
        .filter(|n| *n > 0.0)
        .is_some_and(|n| !(1.5 * n..=4.0 * n).contains(&r));
    Ok(ResistanceEstimate {
        resistance_ohm: r,
        suspicious,
    })
}
