//! Statistics fitted from catalogs: the power/thrust constant, the voltage
//! tier table and monotone weight models.

mod power_law;
mod tiers;

use std::path::Path;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

pub use power_law::{fit_power_law, PowerLaw};
pub use tiers::{fit_voltage_tiers, VoltageTier, VoltageTierModel};

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::model::battery::LIPO_ENERGY_DENSITY_WH_PER_KG;
use crate::model::MotorParams;
use crate::units::GRAVITY;

pub const MODELS_SCHEMA_VERSION: u32 = 1;

/// Default thrust per watt of rated motor power, N/W.
pub const DEFAULT_G_W_CONST: f64 = 0.0624;

/// Empirical correction applied to the simplified max-thrust relation.
pub const DEFAULT_K_C: f64 = 0.82;

/// T_pMax ≈ G_WConst·U_mMax·I_mMax.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PowerThrustModel {
    pub g_w_const: f64,
    /// RMS of thrust residuals of the fit, N.
    #[serde(default)]
    pub residual_rms_n: f64,
    #[serde(default)]
    pub samples: usize,
}

impl Default for PowerThrustModel {
    fn default() -> Self {
        Self {
            g_w_const: DEFAULT_G_W_CONST,
            residual_rms_n: 0.0,
            samples: 0,
        }
    }
}

impl PowerThrustModel {
    pub fn max_thrust(&self, max_voltage_v: f64, max_current_a: f64) -> f64 {
        self.g_w_const * max_voltage_v * max_current_a
    }

    /// Current a motor of `voltage_v` needs to reach `thrust_n`.
    pub fn current_for(&self, thrust_n: f64, voltage_v: f64) -> f64 {
        thrust_n / (self.g_w_const * voltage_v)
    }
}

/// Slope through the origin of thrust against rated power, from
/// (power W, thrust N) pairs.
pub fn fit_power_thrust(records: &[(f64, f64)]) -> Result<PowerThrustModel> {
    if records.len() < 3 {
        return Err(Error::Fit(format!(
            "power/thrust fit needs at least 3 motors, got {}",
            records.len()
        )));
    }
    if records.iter().any(|(p, t)| !(*p > 0.0 && *t > 0.0)) {
        return Err(Error::Fit("power and thrust must be positive".into()));
    }
    let sxy: f64 = records.iter().map(|(p, t)| p * t).sum();
    let sxx: f64 = records.iter().map(|(p, _)| p * p).sum();
    let slope = sxy / sxx;
    let sse: f64 = records.iter().map(|(p, t)| (t - slope * p).powi(2)).sum();
    Ok(PowerThrustModel {
        g_w_const: slope,
        residual_rms_n: (sse / records.len() as f64).sqrt(),
        samples: records.len(),
    })
}

/// Component weight surfaces, all in newtons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct WeightModels {
    /// f(B_p, D_p)
    pub propeller: PowerLaw,
    /// f(U_mMax, T_pMax)
    pub motor: PowerLaw,
    /// f(U_eMax, I_eMax)
    pub esc: PowerLaw,
}

impl WeightModels {
    pub fn predict_propeller(&self, blades: u32, diameter_m: f64) -> Result<f64> {
        self.propeller.predict(&[f64::from(blades), diameter_m])
    }

    pub fn predict_motor(&self, max_voltage_v: f64, max_thrust_n: f64) -> Result<f64> {
        self.motor.predict(&[max_voltage_v, max_thrust_n])
    }

    pub fn predict_esc(&self, max_voltage_v: f64, max_current_a: f64) -> Result<f64> {
        self.esc.predict(&[max_voltage_v, max_current_a])
    }

    fn validate(&self) -> Result<()> {
        for (name, law, arity) in [
            ("propeller", &self.propeller, 2),
            ("motor", &self.motor, 2),
            ("esc", &self.esc, 2),
        ] {
            law.validate()
                .map_err(|e| Error::InvalidModels(format!("{name} weight model: {e}")))?;
            if law.exponents.len() != arity {
                return Err(Error::InvalidModels(format!(
                    "{name} weight model must take {arity} arguments"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct FitCounts {
    pub propellers: usize,
    pub motors: usize,
    pub escs: usize,
    pub batteries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Provenance {
    pub catalog_hash: String,
    pub fitted_at: String,
    pub counts: FitCounts,
}

/// The versioned model document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct StatModels {
    pub schema_version: u32,
    pub power_thrust: PowerThrustModel,
    pub voltage_tiers: VoltageTierModel,
    pub weight_models: WeightModels,
    pub k_c: f64,
    pub battery_energy_density_wh_per_kg: f64,
    pub provenance: Provenance,
}

/// Rated max thrust of a catalog motor: the bench figure when present,
/// otherwise the power/thrust relation.
pub fn motor_max_thrust(motor: &MotorParams, power_thrust: &PowerThrustModel) -> f64 {
    motor
        .test_max_thrust_n
        .unwrap_or_else(|| power_thrust.max_thrust(motor.max_voltage_v, motor.max_current_a))
}

impl StatModels {
    pub fn fit(catalog: &Catalog) -> Result<Self> {
        let bench: Vec<(f64, f64)> = catalog
            .motors
            .iter()
            .filter_map(|m| {
                m.params
                    .test_max_thrust_n
                    .map(|t| (m.params.max_voltage_v * m.params.max_current_a, t))
            })
            .collect();
        let power_thrust = if bench.len() >= 3 {
            fit_power_thrust(&bench)?
        } else {
            PowerThrustModel::default()
        };

        let tier_records: Vec<(f64, f64)> = catalog
            .motors
            .iter()
            .map(|m| (m.params.max_voltage_v, motor_max_thrust(&m.params, &power_thrust)))
            .collect();
        let voltage_tiers = fit_voltage_tiers(&tier_records)?;

        let propeller = fit_power_law(
            &catalog
                .propellers
                .iter()
                .map(|p| (vec![f64::from(p.params.blades), p.params.diameter_m], p.weight_n))
                .collect::<Vec<_>>(),
        )
        .map_err(|e| Error::Fit(format!("propeller weight model: {e}")))?;
        let motor = fit_power_law(
            &catalog
                .motors
                .iter()
                .map(|m| {
                    (
                        vec![m.params.max_voltage_v, motor_max_thrust(&m.params, &power_thrust)],
                        m.weight_n,
                    )
                })
                .collect::<Vec<_>>(),
        )
        .map_err(|e| Error::Fit(format!("motor weight model: {e}")))?;
        let esc = fit_power_law(
            &catalog
                .escs
                .iter()
                .map(|e| (vec![e.params.max_voltage_v, e.params.max_current_a], e.weight_n))
                .collect::<Vec<_>>(),
        )
        .map_err(|e| Error::Fit(format!("ESC weight model: {e}")))?;

        let energy_density = if catalog.batteries.is_empty() {
            LIPO_ENERGY_DENSITY_WH_PER_KG
        } else {
            let wh: f64 = catalog.batteries.iter().map(|b| b.params.energy_wh()).sum();
            let kg: f64 = catalog.batteries.iter().map(|b| b.weight_n / GRAVITY).sum();
            wh / kg
        };

        let models = Self {
            schema_version: MODELS_SCHEMA_VERSION,
            power_thrust,
            voltage_tiers,
            weight_models: WeightModels { propeller, motor, esc },
            k_c: DEFAULT_K_C,
            battery_energy_density_wh_per_kg: energy_density,
            provenance: Provenance {
                catalog_hash: catalog.hash.clone(),
                fitted_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                counts: FitCounts {
                    propellers: catalog.propellers.len(),
                    motors: catalog.motors.len(),
                    escs: catalog.escs.len(),
                    batteries: catalog.batteries.len(),
                },
            },
        };
        models.validate()?;
        Ok(models)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != MODELS_SCHEMA_VERSION {
            return Err(Error::SchemaVersion {
                found: self.schema_version,
                expected: MODELS_SCHEMA_VERSION,
            });
        }
        if !(self.power_thrust.g_w_const.is_finite() && self.power_thrust.g_w_const > 0.0) {
            return Err(Error::InvalidModels("G_WConst must be positive".into()));
        }
        if !(self.k_c > 0.0 && self.k_c.is_finite()) {
            return Err(Error::InvalidModels("k_c must be positive".into()));
        }
        if !(self.battery_energy_density_wh_per_kg > 0.0 && self.battery_energy_density_wh_per_kg.is_finite()) {
            return Err(Error::InvalidModels("battery energy density must be positive".into()));
        }
        self.voltage_tiers.validate()?;
        self.weight_models.validate()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let version = value.get("schema_version").and_then(serde_json::Value::as_u64);
        match version {
            Some(v) if v == u64::from(MODELS_SCHEMA_VERSION) => {}
            Some(v) => {
                return Err(Error::SchemaVersion {
                    found: u32::try_from(v).unwrap_or(u32::MAX),
                    expected: MODELS_SCHEMA_VERSION,
                })
            }
            None => return Err(Error::InvalidModels("missing schema_version".into())),
        }
        let models: Self = serde_json::from_value(value)?;
        models.validate()?;
        Ok(models)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
