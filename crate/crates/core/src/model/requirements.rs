use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::atmosphere::{Environment, DEFAULT_TEMPERATURE_C};
use super::battery::DEFAULT_OTHER_CURRENT_A;
use crate::error::{Error, Result};

/// Hover thrust over full-throttle thrust when the caller does not say.
pub const DEFAULT_THRUST_RATIO: f64 = 0.5;

/// Requirements as submitted by a user. Either the total weight or the
/// per-rotor hover thrust must be given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct RequirementsInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_weight_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hover_thrust_n: Option<f64>,
    pub rotor_count: u32,
    #[serde(default = "default_thrust_ratio")]
    pub thrust_ratio: f64,
    pub endurance_min: f64,
    #[serde(default)]
    pub altitude_m: f64,
    #[serde(default = "default_temperature")]
    pub temperature_c: f64,
    #[serde(default = "default_other_current")]
    pub other_current_a: f64,
}

fn default_thrust_ratio() -> f64 {
    DEFAULT_THRUST_RATIO
}

fn default_temperature() -> f64 {
    DEFAULT_TEMPERATURE_C
}

fn default_other_current() -> f64 {
    DEFAULT_OTHER_CURRENT_A
}

impl RequirementsInput {
    pub fn resolve(&self) -> Result<DesignRequirements> {
        if self.rotor_count == 0 {
            return Err(Error::InvalidRequirements("rotor_count must be at least 1".into()));
        }
        let hover_thrust_n = match (self.total_weight_n, self.hover_thrust_n) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidRequirements(
                    "give either total_weight_n or hover_thrust_n, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::InvalidRequirements(
                    "one of total_weight_n or hover_thrust_n is required".into(),
                ))
            }
            (Some(w), None) => w / f64::from(self.rotor_count),
            (None, Some(t)) => t,
        };
        if !(self.thrust_ratio > 0.0 && self.thrust_ratio < 1.0) {
            return Err(Error::InvalidRequirements(format!(
                "thrust_ratio {} must lie in (0, 1)",
                self.thrust_ratio
            )));
        }
        if !(hover_thrust_n.is_finite() && hover_thrust_n > 0.0) {
            return Err(Error::InvalidRequirements("hover thrust must be positive".into()));
        }
        if !(self.endurance_min.is_finite() && self.endurance_min > 0.0) {
            return Err(Error::InvalidRequirements("endurance_min must be positive".into()));
        }
        if !(self.other_current_a.is_finite() && self.other_current_a >= 0.0) {
            return Err(Error::InvalidRequirements("other_current_a must be nonnegative".into()));
        }
        let environment = Environment::new(self.altitude_m, self.temperature_c)
            .map_err(|e| Error::InvalidRequirements(e.to_string()))?;
        Ok(DesignRequirements {
            rotor_count: self.rotor_count,
            total_weight_n: self.total_weight_n,
            hover_thrust_n,
            thrust_ratio: self.thrust_ratio,
            max_thrust_n: hover_thrust_n / self.thrust_ratio,
            endurance_min: self.endurance_min,
            other_current_a: self.other_current_a,
            environment,
        })
    }
}

/// Validated design requirements, per propeller where applicable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct DesignRequirements {
    pub rotor_count: u32,
    pub total_weight_n: Option<f64>,
    pub hover_thrust_n: f64,
    pub thrust_ratio: f64,
    pub max_thrust_n: f64,
    pub endurance_min: f64,
    pub other_current_a: f64,
    pub environment: Environment,
}

impl DesignRequirements {
    /// Requirements from per-rotor hover thrust, with default γ, I_other and
    /// temperature.
    pub fn from_hover_thrust(
        rotor_count: u32,
        hover_thrust_n: f64,
        endurance_min: f64,
        altitude_m: f64,
    ) -> Result<Self> {
        RequirementsInput {
            total_weight_n: None,
            hover_thrust_n: Some(hover_thrust_n),
            rotor_count,
            thrust_ratio: DEFAULT_THRUST_RATIO,
            endurance_min,
            altitude_m,
            temperature_c: DEFAULT_TEMPERATURE_C,
            other_current_a: DEFAULT_OTHER_CURRENT_A,
        }
        .resolve()
    }
}

/// One steady electrical/mechanical state of a propulsion unit and the
/// shared battery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct OperatingPoint {
    pub speed_rpm: f64,
    pub torque_nm: f64,
    pub thrust_n: f64,
    pub motor_voltage_v: f64,
    pub motor_current_a: f64,
    pub throttle: f64,
    pub esc_voltage_v: f64,
    pub esc_current_a: f64,
    pub battery_current_a: f64,
}
