use std::f64::consts::PI;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Blade-shape constants of the simplified blade-element fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct BladeCoeffs {
    pub k_t0: f64,
    pub k_m0: f64,
    pub k_m1: f64,
    pub k_m2: f64,
}

impl BladeCoeffs {
    /// General constants for carbon fiber propellers.
    pub const CARBON_FIBER: BladeCoeffs = BladeCoeffs {
        k_t0: 0.323,
        k_m0: 0.0432,
        k_m1: 0.01,
        k_m2: 0.9,
    };

    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.k_t0, self.k_m0, self.k_m1, self.k_m2]
            .iter()
            .all(|k| k.is_finite() && *k > 0.0);
        if all_positive {
            Ok(())
        } else {
            Err(Error::domain(format!("blade coefficients must be positive: {self:?}")))
        }
    }

    /// Pitch angle that maximizes the thrust/torque coefficient ratio.
    pub fn optimal_pitch_angle(&self) -> f64 {
        (self.k_m1 / self.k_m2).sqrt()
    }
}

impl Default for BladeCoeffs {
    fn default() -> Self {
        Self::CARBON_FIBER
    }
}

/// Dimensionless thrust and torque coefficients (C_T, C_M).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct AeroCoeffs {
    pub thrust: f64,
    pub torque: f64,
}

impl AeroCoeffs {
    pub fn thrust_torque_ratio(&self) -> f64 {
        self.thrust / self.torque
    }
}

/// Fixed-pitch propeller geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PropellerParams {
    pub diameter_m: f64,
    pub pitch_m: f64,
    pub blades: u32,
}

impl PropellerParams {
    pub fn new(diameter_m: f64, pitch_m: f64, blades: u32) -> Result<Self> {
        let p = Self {
            diameter_m,
            pitch_m,
            blades,
        };
        p.validate()?;
        Ok(p)
    }

    /// Propeller of the given diameter whose pitch realizes `pitch_angle`.
    pub fn from_pitch_angle(diameter_m: f64, pitch_angle: f64, blades: u32) -> Result<Self> {
        Self::new(diameter_m, PI * diameter_m * pitch_angle.tan(), blades)
    }

    pub fn validate(&self) -> Result<()> {
        if self.blades < 2 {
            return Err(Error::domain(format!(
                "propeller needs at least 2 blades, got {}",
                self.blades
            )));
        }
        if !(self.diameter_m.is_finite() && self.diameter_m > 0.0) {
            return Err(Error::domain(format!(
                "propeller diameter must be positive, got {}",
                self.diameter_m
            )));
        }
        if !(self.pitch_m.is_finite() && self.pitch_m > 0.0) {
            return Err(Error::domain(format!(
                "propeller pitch must be positive, got {}",
                self.pitch_m
            )));
        }
        Ok(())
    }

    pub fn pitch_angle(&self) -> f64 {
        (self.pitch_m / (PI * self.diameter_m)).atan()
    }

    pub fn aero_coeffs(&self, blade: &BladeCoeffs) -> Result<AeroCoeffs> {
        aero_coeffs(self.blades, self.pitch_angle(), blade)
    }
}

fn check_blades_and_pitch(blades: u32, pitch_angle: f64) -> Result<()> {
    if blades < 2 {
        return Err(Error::domain(format!("blade count {blades} < 2")));
    }
    if !(pitch_angle > 0.0 && pitch_angle < PI / 2.0) {
        return Err(Error::domain(format!("pitch angle {pitch_angle} rad outside (0, π/2)")));
    }
    Ok(())
}

pub fn aero_coeffs(blades: u32, pitch_angle: f64, blade: &BladeCoeffs) -> Result<AeroCoeffs> {
    check_blades_and_pitch(blades, pitch_angle)?;
    let b = f64::from(blades);
    Ok(AeroCoeffs {
        thrust: blade.k_t0 * b * pitch_angle,
        torque: blade.k_m0 * b * b * (blade.k_m1 + blade.k_m2 * pitch_angle * pitch_angle),
    })
}

/// Thrust/torque coefficient ratio, the propeller efficiency index.
pub fn thrust_torque_ratio(blades: u32, pitch_angle: f64, blade: &BladeCoeffs) -> Result<f64> {
    check_blades_and_pitch(blades, pitch_angle)?;
    Ok(blade.k_t0 * pitch_angle
        / (blade.k_m0 * f64::from(blades) * (blade.k_m1 + blade.k_m2 * pitch_angle * pitch_angle)))
}

/// Thrust (N) and torque (N·m) at `speed_rpm`.
pub fn thrust_torque(speed_rpm: f64, diameter_m: f64, coeffs: AeroCoeffs, density: f64) -> (f64, f64) {
    let n2 = (speed_rpm / 60.0).powi(2);
    let d4 = diameter_m.powi(4);
    (
        coeffs.thrust * density * n2 * d4,
        coeffs.torque * density * n2 * d4 * diameter_m,
    )
}

/// Speed (RPM) at which the propeller produces `thrust_n`.
pub fn speed_for_thrust(thrust_n: f64, diameter_m: f64, thrust_coeff: f64, density: f64) -> Result<f64> {
    if !(diameter_m > 0.0) || !(thrust_coeff > 0.0) || !(density > 0.0) {
        return Err(Error::domain(format!(
            "need positive diameter, thrust coefficient and density (D={diameter_m}, C_T={thrust_coeff}, ρ={density})"
        )));
    }
    if !(thrust_n >= 0.0) {
        return Err(Error::domain(format!("thrust {thrust_n} N is negative")));
    }
    Ok(60.0 * (thrust_n / (thrust_coeff * density * diameter_m.powi(4))).sqrt())
}
