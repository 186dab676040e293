use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct VoltageTier {
    /// Largest thrust covered by this tier, N.
    pub max_thrust_n: f64,
    pub voltage_v: f64,
}

/// Piecewise map from required maximum thrust to the lowest motor voltage
/// class that reaches it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct VoltageTierModel {
    pub tiers: Vec<VoltageTier>,
}

impl VoltageTierModel {
    pub fn new(tiers: Vec<VoltageTier>) -> Result<Self> {
        let model = Self { tiers };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tiers.is_empty() {
            return Err(Error::InvalidModels("voltage tier table is empty".into()));
        }
        if self
            .tiers
            .iter()
            .any(|t| !(t.max_thrust_n > 0.0 && t.voltage_v > 0.0 && t.max_thrust_n.is_finite()))
        {
            return Err(Error::InvalidModels(
                "voltage tiers need positive thrust and voltage".into(),
            ));
        }
        for w in self.tiers.windows(2) {
            if !(w[0].max_thrust_n < w[1].max_thrust_n && w[0].voltage_v <= w[1].voltage_v) {
                return Err(Error::InvalidModels(format!(
                    "voltage tiers not monotone at ({}, {}) → ({}, {})",
                    w[0].max_thrust_n, w[0].voltage_v, w[1].max_thrust_n, w[1].voltage_v
                )));
            }
        }
        Ok(())
    }

    /// Lowest tier voltage whose breakpoint is at or above `thrust_n`.
    pub fn lookup(&self, thrust_n: f64) -> Result<f64> {
        self.tier_for(thrust_n).map(|t| t.voltage_v)
    }

    pub fn tier_for(&self, thrust_n: f64) -> Result<VoltageTier> {
        if !(thrust_n > 0.0) {
            return Err(Error::domain(format!("thrust {thrust_n} N must be positive")));
        }
        self.tiers
            .iter()
            .copied()
            .find(|t| thrust_n <= t.max_thrust_n)
            .ok_or_else(|| Error::OutOfCatalogRange {
                thrust_n,
                max_thrust_n: self.tiers.last().map_or(0.0, |t| t.max_thrust_n),
            })
    }

    /// First tier with a strictly higher voltage than `voltage_v`.
    pub fn tier_above(&self, voltage_v: f64) -> Option<VoltageTier> {
        self.tiers.iter().copied().find(|t| t.voltage_v > voltage_v)
    }
}

/// Builds tiers from (rated voltage, max thrust) motor records. Each voltage
/// class contributes its strongest motor; a class that is not stronger than
/// some lower-voltage class is dropped because the cheaper tier covers it.
pub fn fit_voltage_tiers(records: &[(f64, f64)]) -> Result<VoltageTierModel> {
    let mut classes: Vec<(f64, f64)> = Vec::new();
    for &(voltage, thrust) in records {
        if !(voltage > 0.0 && thrust > 0.0) {
            return Err(Error::Fit(format!("bad motor record ({voltage} V, {thrust} N)")));
        }
        match classes.iter_mut().find(|(v, _)| (*v - voltage).abs() < 1e-9) {
            Some(class) => class.1 = class.1.max(thrust),
            None => classes.push((voltage, thrust)),
        }
    }
    if classes.is_empty() {
        return Err(Error::Fit("no motor voltage classes".into()));
    }
    classes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut tiers: Vec<VoltageTier> = Vec::new();
    for (voltage_v, max_thrust_n) in classes {
        if tiers.last().is_none_or(|t| max_thrust_n > t.max_thrust_n) {
            tiers.push(VoltageTier {
                max_thrust_n,
                voltage_v,
            });
        }
    }
    VoltageTierModel::new(tiers)
}
