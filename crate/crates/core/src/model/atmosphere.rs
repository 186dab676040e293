use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Air density at 0 °C and sea level, kg/m³.
pub const STANDARD_DENSITY: f64 = 1.293;

/// Ambient temperature assumed when none is given. This is the reference
/// state of [`STANDARD_DENSITY`].
pub const DEFAULT_TEMPERATURE_C: f64 = 0.0;

const ALTITUDE_RANGE_M: (f64, f64) = (0.0, 10_000.0);
const TEMPERATURE_RANGE_C: (f64, f64) = (-40.0, 60.0);

/// Local air density from altitude and temperature (standard atmosphere,
/// troposphere form).
pub fn air_density(altitude_m: f64, temperature_c: f64) -> Result<f64> {
    if !(ALTITUDE_RANGE_M.0..=ALTITUDE_RANGE_M.1).contains(&altitude_m) {
        return Err(Error::domain(format!("altitude {altitude_m} m outside [0, 10000]")));
    }
    if !(TEMPERATURE_RANGE_C.0..=TEMPERATURE_RANGE_C.1).contains(&temperature_c) {
        return Err(Error::domain(format!(
            "temperature {temperature_c} °C outside [-40, 60]"
        )));
    }
    let kelvin = 273.0 + temperature_c;
    let pressure_ratio = (1.0 - 0.0065 * altitude_m / kelvin).powf(5.2561);
    Ok(273.0 / kelvin * pressure_ratio * STANDARD_DENSITY)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, JsonSchema)]
struct EnvironmentSpec {
    #[serde(default)]
    altitude_m: f64,
    #[serde(default = "default_temperature")]
    temperature_c: f64,
}

fn default_temperature() -> f64 {
    DEFAULT_TEMPERATURE_C
}

/// Ambient conditions of a flight. The density is derived on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(try_from = "EnvironmentSpec")]
pub struct Environment {
    pub altitude_m: f64,
    pub temperature_c: f64,
    pub air_density: f64,
}

impl Environment {
    pub fn new(altitude_m: f64, temperature_c: f64) -> Result<Self> {
        Ok(Self {
            altitude_m,
            temperature_c,
            air_density: air_density(altitude_m, temperature_c)?,
        })
    }

    pub fn at_altitude(altitude_m: f64) -> Result<Self> {
        Self::new(altitude_m, DEFAULT_TEMPERATURE_C)
    }

    pub fn sea_level() -> Self {
        Self {
            altitude_m: 0.0,
            temperature_c: DEFAULT_TEMPERATURE_C,
            air_density: STANDARD_DENSITY,
        }
    }
}

impl TryFrom<EnvironmentSpec> for Environment {
    type Error = Error;

    fn try_from(spec: EnvironmentSpec) -> Result<Self> {
        Environment::new(spec.altitude_m, spec.temperature_c)
    }
}
