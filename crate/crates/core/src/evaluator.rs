//! Forward evaluation of a complete propulsion system: hover state, battery
//! current, endurance, full-throttle state and safety checks.

use std::fmt;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::battery::{
    battery_chain, battery_efficiency, battery_weight, discharge_time, DEFAULT_OTHER_CURRENT_A,
};
use crate::model::esc::{esc_efficiency, esc_solve};
use crate::model::motor::motor_efficiency;
use crate::model::propeller::{speed_for_thrust, thrust_torque};
use crate::model::{
    AeroCoeffs, BatteryParams, BladeCoeffs, Environment, EscParams, MotorParams, OperatingPoint, PropellerParams,
};
use crate::stats::StatModels;

const HOVER_TOLERANCE_A: f64 = 1e-6;
const HOVER_MAX_ITERATIONS: usize = 100;
const BISECTION_REL_TOL: f64 = 1e-12;

fn default_other_current() -> f64 {
    DEFAULT_OTHER_CURRENT_A
}

/// Known component weights in newtons. Missing entries are predicted from
/// fitted models.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ComponentWeights {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub propeller_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motor_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub esc_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub battery_n: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PropulsionSystem {
    pub propeller: PropellerParams,
    pub motor: MotorParams,
    pub esc: EscParams,
    pub battery: BatteryParams,
    pub rotor_count: u32,
    #[serde(default = "Environment::sea_level")]
    pub environment: Environment,
    #[serde(default)]
    pub blade_coeffs: BladeCoeffs,
    #[serde(default = "default_other_current")]
    pub other_current_a: f64,
    #[serde(default)]
    pub weights: ComponentWeights,
}

impl PropulsionSystem {
    pub fn validate(&self) -> Result<()> {
        self.propeller.validate()?;
        self.motor.validate()?;
        self.esc.validate()?;
        self.battery.validate()?;
        self.blade_coeffs.validate()?;
        if self.rotor_count == 0 {
            return Err(Error::domain("rotor_count must be at least 1"));
        }
        if !(self.other_current_a >= 0.0) {
            return Err(Error::domain("other_current_a must be nonnegative"));
        }
        Ok(())
    }

    pub fn aero_coeffs(&self) -> Result<AeroCoeffs> {
        self.propeller.aero_coeffs(&self.blade_coeffs)
    }

    fn density(&self) -> f64 {
        self.environment.air_density
    }
}

/// Converged hover state and the work it took.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct HoverSolution {
    pub point: OperatingPoint,
    pub iterations: usize,
}

/// Solves the hover state at `hover_thrust_n` per rotor. The propeller fixes
/// speed and torque, the motor circuit fixes its current and voltage, and the
/// ESC/battery coupling is resolved by fixed-point iteration on the battery
/// current starting from an unloaded battery.
pub fn hover_point(system: &PropulsionSystem, hover_thrust_n: f64) -> Result<HoverSolution> {
    if !(hover_thrust_n > 0.0) {
        return Err(Error::domain(format!(
            "hover thrust {hover_thrust_n} N must be positive"
        )));
    }
    system.validate()?;
    let coeffs = system.aero_coeffs()?;
    let rho = system.density();
    let speed = speed_for_thrust(hover_thrust_n, system.propeller.diameter_m, coeffs.thrust, rho)?;
    let (thrust, torque) = thrust_torque(speed, system.propeller.diameter_m, coeffs, rho);
    let (im, um) = system.motor.electrical_state(torque, speed)?;

    let ub = system.battery.voltage_v();
    let rb = system.battery.resistance_ohm;
    let mut ue = ub;
    let mut ib_prev = f64::NAN;
    let mut last_step = 0.0_f64;
    let mut damping = 1.0;
    for iteration in 1..=HOVER_MAX_ITERATIONS {
        let esc = esc_solve(um, im, ue, system.esc.resistance_ohm)?;
        let (ib, ue_next) = battery_chain(esc.current_a, system.rotor_count, system.other_current_a, ub, rb)?;
        let delta = ib - ib_prev;
        if delta.abs() < HOVER_TOLERANCE_A {
            return Ok(HoverSolution {
                point: OperatingPoint {
                    speed_rpm: speed,
                    torque_nm: torque,
                    thrust_n: thrust,
                    motor_voltage_v: um,
                    motor_current_a: im,
                    throttle: esc.throttle,
                    esc_voltage_v: ue,
                    esc_current_a: esc.current_a,
                    battery_current_a: ib,
                },
                iterations: iteration,
            });
        }
        if last_step != 0.0 && delta.signum() != last_step.signum() {
            damping = 0.5;
        }
        last_step = delta;
        ib_prev = ib;
        ue += damping * (ue_next - ue);
        if ue <= 0.0 {
            return Err(Error::Brownout { esc_voltage_v: ue });
        }
    }
    Err(Error::NoConvergence {
        iterations: HOVER_MAX_ITERATIONS,
        last_delta: last_step.abs(),
    })
}

/// Supply model used when solving at full throttle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Supply {
    /// Battery internal resistance included.
    Battery,
    /// Battery held at its nominal voltage.
    Stiff,
}

/// Steady state with the ESC fully open (σ = 1): the speed at which the
/// battery voltage, less the resistive drops, equals the motor voltage the
/// propeller load demands. Solved by bisection on the speed.
pub fn full_throttle_point(system: &PropulsionSystem) -> Result<OperatingPoint> {
    full_throttle_with(system, Supply::Battery)
}

pub fn full_throttle_with(system: &PropulsionSystem, supply: Supply) -> Result<OperatingPoint> {
    system.validate()?;
    let coeffs = system.aero_coeffs()?;
    let rho = system.density();
    let d = system.propeller.diameter_m;
    let ub = system.battery.voltage_v();
    let rb = match supply {
        Supply::Battery => system.battery.resistance_ohm,
        Supply::Stiff => 0.0,
    };
    let n = f64::from(system.rotor_count);
    let re = system.esc.resistance_ohm;
    let state = |speed: f64| -> Result<(f64, f64, f64, f64)> {
        let (thrust, torque) = thrust_torque(speed, d, coeffs, rho);
        let (im, um) = system.motor.electrical_state(torque, speed)?;
        let ib = n * im + system.other_current_a;
        let residual = ub - rb * ib - um - im * re;
        Ok((residual, thrust, torque, im))
    };

    if state(0.0)?.0 <= 0.0 {
        return Err(Error::ModelInconsistent(
            "supply cannot overcome no-load losses at standstill".into(),
        ));
    }
    let motor = &system.motor;
    let emf = motor.no_load_voltage_v - motor.no_load_current_a * motor.resistance_ohm;
    let free_speed = ub * motor.kv_rpm_per_v * motor.no_load_voltage_v / emf;
    let rated_speed = motor.limits().map_or(0.0, |l| l.max_speed_rpm);
    let mut hi = 1.5 * free_speed.max(rated_speed);
    if state(hi)?.0 > 0.0 {
        return Err(Error::ModelInconsistent(
            "no torque balance below 1.5× free speed".into(),
        ));
    }
    let mut lo = 0.0;
    while hi - lo > BISECTION_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if state(mid)?.0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let speed = 0.5 * (lo + hi);
    let (_, thrust, torque, im) = state(speed)?;
    let (_, um) = motor.electrical_state(torque, speed)?;
    let ib = n * im + system.other_current_a;
    Ok(OperatingPoint {
        speed_rpm: speed,
        torque_nm: torque,
        thrust_n: thrust,
        motor_voltage_v: um,
        motor_current_a: im,
        throttle: 1.0,
        esc_voltage_v: ub - rb * ib,
        esc_current_a: im,
        battery_current_a: ib,
    })
}

/// Hover endurance in minutes.
pub fn endurance(system: &PropulsionSystem, hover_thrust_n: f64) -> Result<f64> {
    let hover = hover_point(system, hover_thrust_n)?;
    discharge_time(system.battery.capacity_mah, hover.point.battery_current_a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// U_b ≤ U_mMax
    BatteryVoltageOverMotorRating,
    /// U_b ≤ U_eMax
    BatteryVoltageOverEscRating,
    /// full-throttle I_m ≤ I_mMax
    MotorOvercurrentAtFullThrottle,
    /// I_mMax ≤ I_eMax
    EscCurrentBelowMotorRating,
    /// T_pMax ≥ T_max
    MaxThrustBelowRequired,
    /// K_b·C_b/1000 ≥ n_p·I_mMax + I_other
    BatteryDischargeLimit,
    /// hover needs less than full throttle
    HoverThrottle,
    /// the full-throttle state could not be solved
    FullThrottleUnsolved,
    /// hover endurance ≥ target
    EnduranceBelowTarget,
}

impl Constraint {
    fn describe(self) -> &'static str {
        match self {
            Constraint::BatteryVoltageOverMotorRating => "battery voltage exceeds motor rating",
            Constraint::BatteryVoltageOverEscRating => "battery voltage exceeds ESC rating",
            Constraint::MotorOvercurrentAtFullThrottle => "motor current at full throttle exceeds its rating",
            Constraint::EscCurrentBelowMotorRating => "ESC current rating below motor rating",
            Constraint::MaxThrustBelowRequired => "maximum thrust below requirement",
            Constraint::BatteryDischargeLimit => "battery discharge limit below full-load current",
            Constraint::HoverThrottle => "hover throttle exceeds full throttle",
            Constraint::FullThrottleUnsolved => "full-throttle state has no solution",
            Constraint::EnduranceBelowTarget => "hover endurance below target",
        }
    }
}

/// One violated safety inequality, with the limit and the offending value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Violation {
    pub constraint: Constraint,
    pub limit: f64,
    pub actual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (limit {:.4}, actual {:.4})",
            self.constraint.describe(),
            self.limit,
            self.actual
        )
    }
}

/// Rated max thrust of the motor-propeller pair, using the k_c-corrected
/// ideal-motor relation.
pub fn max_thrust_capability(system: &PropulsionSystem, k_c: f64) -> Result<f64> {
    Ok(system.motor.rated_thrust(system.aero_coeffs()?, system.density(), k_c))
}

/// All safety inequalities the system violates. An empty list means it is
/// safe at full throttle and covers `max_thrust_n`.
pub fn check_safety(system: &PropulsionSystem, max_thrust_n: f64, k_c: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut require = |constraint, ok: bool, limit: f64, actual: f64| {
        if !ok {
            out.push(Violation {
                constraint,
                limit,
                actual,
            });
        }
    };
    let ub = system.battery.voltage_v();
    let m = &system.motor;
    require(
        Constraint::BatteryVoltageOverMotorRating,
        ub <= m.max_voltage_v,
        m.max_voltage_v,
        ub,
    );
    require(
        Constraint::BatteryVoltageOverEscRating,
        ub <= system.esc.max_voltage_v,
        system.esc.max_voltage_v,
        ub,
    );
    match full_throttle_with(system, Supply::Stiff) {
        Ok(ft) => require(
            Constraint::MotorOvercurrentAtFullThrottle,
            ft.motor_current_a <= m.max_current_a,
            m.max_current_a,
            ft.motor_current_a,
        ),
        Err(_) => require(Constraint::FullThrottleUnsolved, false, 0.0, f64::NAN),
    }
    require(
        Constraint::EscCurrentBelowMotorRating,
        m.max_current_a <= system.esc.max_current_a,
        system.esc.max_current_a,
        m.max_current_a,
    );
    let capability = max_thrust_capability(system, k_c).unwrap_or(0.0);
    require(
        Constraint::MaxThrustBelowRequired,
        capability >= max_thrust_n,
        max_thrust_n,
        capability,
    );
    let need = f64::from(system.rotor_count) * m.max_current_a + system.other_current_a;
    let have = system.battery.max_current_a();
    require(Constraint::BatteryDischargeLimit, have >= need, need, have);
    out
}

/// G_sys = n_p·(G_p + G_m + G_e) + G_b, with missing weights predicted.
pub fn system_weight(system: &PropulsionSystem, models: Option<&StatModels>) -> Result<f64> {
    let missing = |what: &str| Error::domain(format!("{what} weight unknown and no weight model given"));
    let w = &system.weights;
    let propeller = match (w.propeller_n, models) {
        (Some(g), _) => g,
        (None, Some(m)) => m
            .weight_models
            .predict_propeller(system.propeller.blades, system.propeller.diameter_m)?,
        (None, None) => return Err(missing("propeller")),
    };
    let motor = match (w.motor_n, models) {
        (Some(g), _) => g,
        (None, Some(m)) => m.weight_models.predict_motor(
            system.motor.max_voltage_v,
            crate::stats::motor_max_thrust(&system.motor, &m.power_thrust),
        )?,
        (None, None) => return Err(missing("motor")),
    };
    let esc = match (w.esc_n, models) {
        (Some(g), _) => g,
        (None, Some(m)) => m
            .weight_models
            .predict_esc(system.esc.max_voltage_v, system.esc.max_current_a)?,
        (None, None) => return Err(missing("ESC")),
    };
    let battery = match w.battery_n {
        Some(g) => g,
        None => battery_weight(
            system.battery.capacity_mah,
            system.battery.voltage_v(),
            models.map_or(crate::model::battery::LIPO_ENERGY_DENSITY_WH_PER_KG, |m| {
                m.battery_energy_density_wh_per_kg
            }),
        )?,
    };
    Ok(f64::from(system.rotor_count) * (propeller + motor + esc) + battery)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Efficiencies {
    /// C_T/C_M of the propeller; a ratio, not bounded by one.
    pub propeller_thrust_torque_ratio: f64,
    pub motor: f64,
    pub esc: f64,
    pub battery: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PerformanceReport {
    pub hover: OperatingPoint,
    pub hover_battery_current_a: f64,
    pub hover_iterations: usize,
    pub endurance_min: f64,
    pub full_throttle: OperatingPoint,
    pub max_thrust_capability_n: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system_weight_n: Option<f64>,
    pub efficiencies: Efficiencies,
    pub violations: Vec<Violation>,
    pub feasible: bool,
}

/// Full report for `system` hovering at `hover_thrust_n` with `max_thrust_n`
/// required. Fails only when the hover state itself does not exist.
pub fn evaluate(
    system: &PropulsionSystem,
    hover_thrust_n: f64,
    max_thrust_n: f64,
    k_c: f64,
    models: Option<&StatModels>,
) -> Result<PerformanceReport> {
    let hover = match hover_point(system, hover_thrust_n) {
        Ok(h) => h,
        Err(Error::ThrottleInfeasible { throttle }) => {
            return Err(Error::DesignInfeasible(vec![Violation {
                constraint: Constraint::HoverThrottle,
                limit: 1.0,
                actual: throttle,
            }]))
        }
        Err(e) => return Err(e),
    };
    let p = hover.point;
    let endurance_min = discharge_time(system.battery.capacity_mah, p.battery_current_a)?;
    let full_throttle = full_throttle_point(system)?;
    let ub = system.battery.voltage_v();
    let efficiencies = Efficiencies {
        propeller_thrust_torque_ratio: system.aero_coeffs()?.thrust_torque_ratio(),
        motor: motor_efficiency(
            p.motor_voltage_v,
            p.motor_current_a,
            system.motor.resistance_ohm,
            system.motor.no_load_current_a,
        )?,
        esc: esc_efficiency(p.motor_voltage_v, p.motor_current_a, system.esc.resistance_ohm)?,
        battery: battery_efficiency(
            p.battery_current_a,
            ub,
            system.battery.resistance_ohm,
            system.other_current_a,
        )?,
    };
    let violations = check_safety(system, max_thrust_n, k_c);
    Ok(PerformanceReport {
        hover: p,
        hover_battery_current_a: p.battery_current_a,
        hover_iterations: hover.iterations,
        endurance_min,
        full_throttle,
        max_thrust_capability_n: max_thrust_capability(system, k_c)?,
        system_weight_n: system_weight(system, models).ok(),
        efficiencies,
        feasible: violations.is_empty(),
        violations,
    })
}
