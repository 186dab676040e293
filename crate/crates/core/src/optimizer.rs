//! The analytical sizing pipeline: continuous optimal parameters for each
//! component, interleaved with catalog selection in dependency order.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::catalog::{
    select_battery, select_esc, select_motor, select_propeller, BatteryPack, BatteryTarget, Catalog, EscTarget,
    MotorTarget, PackLimits, Product, PropellerTarget,
};
use crate::error::{Error, Result};
use crate::evaluator::{
    evaluate, hover_point, ComponentWeights, Constraint, PerformanceReport, PropulsionSystem, Violation,
};
use crate::model::battery::capacity_for_endurance;
use crate::model::motor::thrust_motor_constant;
use crate::model::propeller::aero_coeffs;
use crate::model::{BatteryParams, BladeCoeffs, DesignRequirements, EscParams, MotorParams, PropellerParams};
use crate::stats::{PowerThrustModel, StatModels};
use crate::units::{cells_to_volts, VOLTS_PER_CELL};

/// Optimal blade count; more blades only lower the thrust/torque ratio.
pub const OPTIMAL_BLADES: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(default)]
pub struct OptimizerConfig {
    pub blade_coeffs: BladeCoeffs,
    /// Propellers needed near the optimal pitch angle before the catalog mean
    /// pitch angle is used instead.
    pub min_propellers_in_band: usize,
    /// Half-width of the pitch-angle band as a fraction of the optimum.
    pub pitch_band: f64,
    pub pack_limits: PackLimits,
    /// Battery packs below this fraction of the optimal capacity are skipped.
    pub capacity_floor: f64,
    /// Endurance below this fraction of the target triggers adding parallel
    /// battery units.
    pub endurance_slack: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            blade_coeffs: BladeCoeffs::default(),
            min_propellers_in_band: 3,
            pitch_band: 0.2,
            pack_limits: PackLimits::default(),
            capacity_floor: 0.8,
            endurance_slack: 0.8,
        }
    }
}

/// Continuous optimum. Resistance and no-load targets are zero by
/// construction and kept for completeness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct OptimalParams {
    pub blades: u32,
    pub pitch_angle: f64,
    pub diameter_m: f64,
    pub pitch_m: f64,
    pub motor_max_voltage_v: f64,
    pub motor_max_current_a: f64,
    pub kv_rpm_per_v: f64,
    pub motor_resistance_ohm: f64,
    pub motor_no_load_current_a: f64,
    pub esc_max_voltage_v: f64,
    pub esc_max_current_a: f64,
    pub esc_resistance_ohm: f64,
    pub battery_voltage_v: f64,
    pub battery_capacity_mah: f64,
    pub battery_max_discharge_c: f64,
    pub battery_resistance_ohm: f64,
    /// Max thrust the optimal motor-propeller pair is sized for.
    pub max_thrust_n: f64,
    pub thrust_motor_constant: f64,
    pub hover_battery_current_a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Selection {
    pub propeller: Product<PropellerParams>,
    pub motor: Product<MotorParams>,
    pub esc: Product<EscParams>,
    pub battery: BatteryPack,
}

impl Selection {
    pub fn system(&self, req: &DesignRequirements, blade_coeffs: BladeCoeffs) -> PropulsionSystem {
        PropulsionSystem {
            propeller: self.propeller.params,
            motor: self.motor.params,
            esc: self.esc.params,
            battery: self.battery.params,
            rotor_count: req.rotor_count,
            environment: req.environment,
            blade_coeffs,
            other_current_a: req.other_current_a,
            weights: ComponentWeights {
                propeller_n: Some(self.propeller.weight_n),
                motor_n: Some(self.motor.weight_n),
                esc_n: Some(self.esc.weight_n),
                battery_n: Some(self.battery.weight_n),
            },
        }
    }

    pub fn weight_n(&self, rotor_count: u32) -> f64 {
        f64::from(rotor_count) * (self.propeller.weight_n + self.motor.weight_n + self.esc.weight_n)
            + self.battery.weight_n
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct TraceStep {
    pub step: u8,
    pub name: String,
    pub values: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct DesignResult {
    pub requirements: DesignRequirements,
    pub optimal: OptimalParams,
    pub selection: Selection,
    pub system: PropulsionSystem,
    pub performance: PerformanceReport,
    pub system_weight_n: f64,
    pub hover_evaluations: usize,
    pub catalog_hash: String,
    pub trace: Vec<TraceStep>,
}

#[derive(Default)]
struct Trace(Vec<TraceStep>);

impl Trace {
    fn push(&mut self, step: u8, name: &str, values: serde_json::Value) {
        self.0.push(TraceStep {
            step,
            name: name.to_owned(),
            values,
            note: None,
        });
    }

    fn note(&mut self, note: impl Into<String>) {
        if let Some(last) = self.0.last_mut() {
            last.note = Some(match last.note.take() {
                Some(prev) => format!("{prev}; {}", note.into()),
                None => note.into(),
            });
        }
    }
}

/// Step 1: blade count and pitch angle maximizing the thrust/torque ratio.
/// Falls back to the catalog mean pitch angle when too few products sit near
/// the optimum.
pub fn propeller_efficiency_targets(
    config: &OptimizerConfig,
    propellers: &[Product<PropellerParams>],
) -> Result<(u32, f64, bool)> {
    config.blade_coeffs.validate()?;
    let optimum = config.blade_coeffs.optimal_pitch_angle();
    let matching: Vec<f64> = propellers
        .iter()
        .filter(|p| p.params.blades == OPTIMAL_BLADES)
        .map(|p| p.params.pitch_angle())
        .collect();
    let near = matching
        .iter()
        .filter(|phi| (*phi - optimum).abs() <= config.pitch_band * optimum)
        .count();
    if near >= config.min_propellers_in_band {
        return Ok((OPTIMAL_BLADES, optimum, false));
    }
    let pool: Vec<f64> = if matching.is_empty() {
        propellers.iter().map(|p| p.params.pitch_angle()).collect()
    } else {
        matching
    };
    if pool.is_empty() {
        return Err(Error::SelectionInfeasible {
            class: "propeller",
            constraint: "a nonempty catalog for the mean pitch angle".into(),
        });
    }
    Ok((OPTIMAL_BLADES, pool.iter().sum::<f64>() / pool.len() as f64, true))
}

/// Motor sizing at a given voltage class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MotorSizing {
    pub max_voltage_v: f64,
    pub max_current_a: f64,
    pub kv_rpm_per_v: f64,
}

/// Step 2: the current that reaches `max_thrust_n` at `voltage_v` through the
/// power/thrust relation, and the KV that lets the optimal propeller absorb
/// that power, K_V = k_tm^{5/2}·I²·U/T^{5/2}.
pub fn motor_sizing(max_thrust_n: f64, voltage_v: f64, k_tm: f64, power_thrust: &PowerThrustModel) -> MotorSizing {
    let current = power_thrust.current_for(max_thrust_n, voltage_v);
    MotorSizing {
        max_voltage_v: voltage_v,
        max_current_a: current,
        kv_rpm_per_v: k_tm.powf(2.5) * current * current * voltage_v / max_thrust_n.powf(2.5),
    }
}

/// Step 5: the diameter at which the propeller loads the motor to its speed
/// and torque limits together.
pub fn optimal_diameter(
    motor: &MotorParams,
    blades: u32,
    pitch_angle: f64,
    density: f64,
    coeffs: &BladeCoeffs,
) -> Result<(f64, f64)> {
    let lim = motor.limits()?;
    let c = aero_coeffs(blades, pitch_angle, coeffs)?;
    let d = (3600.0 * lim.max_torque_nm / (density * c.torque * lim.max_speed_rpm.powi(2))).powf(0.2);
    Ok((d, std::f64::consts::PI * d * pitch_angle.tan()))
}

/// Step 11 outputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct BatterySizing {
    pub voltage_v: f64,
    pub cells: u32,
    pub hover_battery_current_a: f64,
    pub capacity_mah: f64,
    pub max_discharge_c: f64,
}

/// Step 11: battery voltage, capacity for the target endurance, and the
/// discharge rate to feed every motor at its rated current.
pub fn battery_sizing(
    propeller: &PropellerParams,
    motor: &MotorParams,
    esc: &EscParams,
    voltage_v: f64,
    req: &DesignRequirements,
    blade_coeffs: BladeCoeffs,
) -> Result<BatterySizing> {
    let cells = (voltage_v / VOLTS_PER_CELL + 1e-9).floor() as u32;
    if cells == 0 {
        return Err(Error::domain(format!(
            "battery voltage {voltage_v} V is below one cell"
        )));
    }
    let probe = PropulsionSystem {
        propeller: *propeller,
        motor: *motor,
        esc: *esc,
        battery: BatteryParams {
            cells,
            capacity_mah: 1000.0,
            max_discharge_c: 1.0,
            resistance_ohm: 0.0,
        },
        rotor_count: req.rotor_count,
        environment: req.environment,
        blade_coeffs,
        other_current_a: req.other_current_a,
        weights: ComponentWeights::default(),
    };
    let hover = match hover_point(&probe, req.hover_thrust_n) {
        Ok(h) => h.point,
        Err(Error::ThrottleInfeasible { throttle }) => {
            return Err(Error::DesignInfeasible(vec![Violation {
                constraint: Constraint::HoverThrottle,
                limit: 1.0,
                actual: throttle,
            }]))
        }
        Err(e) => return Err(e),
    };
    let ib0 = hover.battery_current_a;
    let capacity = capacity_for_endurance(req.endurance_min, ib0);
    let full_load = f64::from(req.rotor_count) * motor.max_current_a + req.other_current_a;
    Ok(BatterySizing {
        voltage_v: cells_to_volts(cells),
        cells,
        hover_battery_current_a: ib0,
        capacity_mah: capacity,
        max_discharge_c: 1000.0 * full_load / capacity,
    })
}

/// Runs the full pipeline.
pub fn optimize(
    req: &DesignRequirements,
    catalog: &Catalog,
    models: &StatModels,
    config: &OptimizerConfig,
) -> Result<DesignResult> {
    let mut trace = Trace::default();
    let rho = req.environment.air_density;
    let t_max = req.max_thrust_n;
    let bc = config.blade_coeffs;
    let mut hover_evaluations = 0;
    trace.push(
        0,
        "requirements",
        json!({
            "rotor_count": req.rotor_count,
            "total_weight_n": req.total_weight_n,
            "hover_thrust_n": req.hover_thrust_n,
            "thrust_ratio": req.thrust_ratio,
            "max_thrust_n": t_max,
            "endurance_min": req.endurance_min,
            "air_density": rho,
        }),
    );

    let (blades, pitch_angle, fallback) =
        propeller_efficiency_targets(config, &catalog.propellers).map_err(|e| e.at_step(1, "propeller efficiency"))?;
    trace.push(
        1,
        "propeller efficiency",
        json!({ "blades": blades, "pitch_angle": pitch_angle }),
    );
    if fallback {
        trace.note("too few catalog propellers near the optimal pitch angle; using the catalog mean");
    }

    let coeffs = aero_coeffs(blades, pitch_angle, &bc).map_err(|e| e.at_step(2, "motor sizing"))?;
    let k_tm = thrust_motor_constant(coeffs, rho, models.k_c);
    let mut tier = models
        .voltage_tiers
        .tier_for(t_max)
        .map_err(|e| e.at_step(2, "motor sizing"))?;
    let (sizing, motor) = loop {
        let sizing = motor_sizing(t_max, tier.voltage_v, k_tm, &models.power_thrust);
        trace.push(
            2,
            "motor sizing",
            json!({
                "max_thrust_n": t_max,
                "max_voltage_v": sizing.max_voltage_v,
                "max_current_a": sizing.max_current_a,
                "kv_rpm_per_v": sizing.kv_rpm_per_v,
                "thrust_motor_constant": k_tm,
                "g_w_const": models.power_thrust.g_w_const,
            }),
        );
        trace.push(
            3,
            "motor efficiency targets",
            json!({ "resistance_ohm": 0.0, "no_load_current_a": 0.0 }),
        );
        let target = MotorTarget {
            max_voltage_v: sizing.max_voltage_v,
            max_current_a: sizing.max_current_a,
            kv_rpm_per_v: sizing.kv_rpm_per_v,
        };
        match select_motor(&target, &catalog.motors) {
            Ok(m) => break (sizing, m.clone()),
            Err(e @ Error::SelectionInfeasible { .. }) => match models.voltage_tiers.tier_above(tier.voltage_v) {
                Some(next) => {
                    trace.push(4, "motor selection", json!({ "selected": null }));
                    trace.note(format!(
                        "no motor at {} V ({e}); moving to the {} V tier",
                        tier.voltage_v, next.voltage_v
                    ));
                    tier = next;
                }
                None => return Err(e.at_step(4, "motor selection")),
            },
            Err(e) => return Err(e.at_step(4, "motor selection")),
        }
    };
    trace.push(
        4,
        "motor selection",
        json!({ "selected": motor.id, "params": motor.params, "weight_n": motor.weight_n }),
    );

    let (diameter, pitch) =
        optimal_diameter(&motor.params, blades, pitch_angle, rho, &bc).map_err(|e| e.at_step(5, "optimal diameter"))?;
    let limits = motor.params.limits().map_err(|e| e.at_step(5, "optimal diameter"))?;
    trace.push(
        5,
        "optimal diameter",
        json!({
            "max_speed_rpm": limits.max_speed_rpm,
            "max_torque_nm": limits.max_torque_nm,
            "diameter_m": diameter,
            "pitch_m": pitch,
        }),
    );

    let prop_target = PropellerTarget {
        blades,
        pitch_angle,
        diameter_m: diameter,
        pitch_band: config.pitch_band,
    };
    let propeller = select_propeller(&prop_target, &catalog.propellers)
        .map_err(|e| e.at_step(6, "propeller selection"))?
        .clone();
    trace.push(
        6,
        "propeller selection",
        json!({
            "selected": propeller.id,
            "params": propeller.params,
            "pitch_angle": propeller.params.pitch_angle(),
            "weight_n": propeller.weight_n,
        }),
    );

    let (esc_voltage, esc_current) = (sizing.max_voltage_v, sizing.max_current_a);
    trace.push(
        7,
        "ESC sizing",
        json!({ "max_voltage_v": esc_voltage, "max_current_a": esc_current }),
    );
    trace.push(8, "ESC efficiency target", json!({ "resistance_ohm": 0.0 }));
    let esc_target = EscTarget {
        max_voltage_v: esc_voltage,
        max_current_a: esc_current.max(motor.params.max_current_a),
    };
    let esc = select_esc(&esc_target, &catalog.escs)
        .map_err(|e| e.at_step(9, "ESC selection"))?
        .clone();
    trace.push(
        9,
        "ESC selection",
        json!({
            "required_current_a": esc_target.max_current_a,
            "selected": esc.id,
            "params": esc.params,
            "weight_n": esc.weight_n,
        }),
    );
    trace.push(10, "battery efficiency target", json!({ "resistance_ohm": 0.0 }));

    let battery_sizing = battery_sizing(
        &propeller.params,
        &motor.params,
        &esc.params,
        sizing.max_voltage_v,
        req,
        bc,
    )
    .map_err(|e| e.at_step(11, "battery sizing"))?;
    hover_evaluations += 1;
    trace.push(
        11,
        "battery sizing",
        json!({
            "voltage_v": battery_sizing.voltage_v,
            "hover_battery_current_a": battery_sizing.hover_battery_current_a,
            "capacity_mah": battery_sizing.capacity_mah,
            "max_discharge_c": battery_sizing.max_discharge_c,
        }),
    );
    if (battery_sizing.voltage_v - sizing.max_voltage_v).abs() > 1e-9 {
        trace.note(format!(
            "{} V is not a whole number of cells; using {} cells",
            sizing.max_voltage_v, battery_sizing.cells
        ));
    }

    let full_load = f64::from(req.rotor_count) * motor.params.max_current_a + req.other_current_a;
    let battery_target = BatteryTarget {
        cells: battery_sizing.cells,
        capacity_mah: battery_sizing.capacity_mah,
        max_discharge_c: battery_sizing.max_discharge_c,
        min_pack_current_a: full_load,
        capacity_floor: config.capacity_floor,
    };
    let mut pack = select_battery(&battery_target, &catalog.batteries, config.pack_limits)
        .map_err(|e| e.at_step(12, "battery selection"))?;
    let unit = catalog
        .batteries
        .iter()
        .find(|b| b.id == pack.unit_id)
        .expect("selected unit comes from the catalog")
        .clone();

    let mut selection = Selection {
        propeller,
        motor,
        esc,
        battery: pack.clone(),
    };
    let mut system = selection.system(req, bc);
    let mut performance = evaluate(&system, req.hover_thrust_n, t_max, models.k_c, Some(models))
        .map_err(|e| e.at_step(12, "battery selection"))?;
    hover_evaluations += 1;
    trace.push(
        12,
        "battery selection",
        json!({
            "selected": pack.label(),
            "unit": pack.unit_id,
            "series": pack.series,
            "parallel": pack.parallel,
            "params": pack.params,
            "weight_n": pack.weight_n,
            "endurance_min": performance.endurance_min,
        }),
    );
    let endurance_floor = config.endurance_slack * req.endurance_min;
    while performance.endurance_min < endurance_floor {
        if pack.parallel >= config.pack_limits.max_parallel {
            return Err(Error::DesignInfeasible(vec![Violation {
                constraint: Constraint::EnduranceBelowTarget,
                limit: req.endurance_min,
                actual: performance.endurance_min,
            }])
            .at_step(12, "battery selection"));
        }
        pack = BatteryPack::compose(&unit, pack.series, pack.parallel + 1);
        selection.battery = pack.clone();
        system = selection.system(req, bc);
        performance = evaluate(&system, req.hover_thrust_n, t_max, models.k_c, Some(models))
            .map_err(|e| e.at_step(12, "battery selection"))?;
        hover_evaluations += 1;
        trace.note(format!(
            "endurance short; now {} with {:.2} min",
            pack.label(),
            performance.endurance_min
        ));
    }
    if !performance.violations.is_empty() {
        return Err(Error::DesignInfeasible(performance.violations).at_step(12, "battery selection"));
    }

    let optimal = OptimalParams {
        blades,
        pitch_angle,
        diameter_m: diameter,
        pitch_m: pitch,
        motor_max_voltage_v: sizing.max_voltage_v,
        motor_max_current_a: sizing.max_current_a,
        kv_rpm_per_v: sizing.kv_rpm_per_v,
        motor_resistance_ohm: 0.0,
        motor_no_load_current_a: 0.0,
        esc_max_voltage_v: esc_voltage,
        esc_max_current_a: esc_current,
        esc_resistance_ohm: 0.0,
        battery_voltage_v: battery_sizing.voltage_v,
        battery_capacity_mah: battery_sizing.capacity_mah,
        battery_max_discharge_c: battery_sizing.max_discharge_c,
        battery_resistance_ohm: 0.0,
        max_thrust_n: t_max,
        thrust_motor_constant: k_tm,
        hover_battery_current_a: battery_sizing.hover_battery_current_a,
    };
    Ok(DesignResult {
        requirements: req.clone(),
        optimal,
        system_weight_n: selection.weight_n(req.rotor_count),
        selection,
        system,
        performance,
        hover_evaluations,
        catalog_hash: catalog.hash.clone(),
        trace: trace.0,
    })
}
