//! Seeded synthetic catalogs and requirements shared by the integration
//! suites.
#![allow(dead_code)]

pub mod invariants;
use propsizer::catalog::Product;
use propsizer::model::motor::thrust_motor_constant;
use propsizer::model::propeller::aero_coeffs;
use propsizer::model::BladeCoeffs;
use propsizer::model::{BatteryParams, DesignRequirements, EscParams, MotorParams, PropellerParams};
use propsizer::optimizer::{battery_sizing, motor_sizing, optimal_diameter, OPTIMAL_BLADES};
use propsizer::units::inches_to_meters;
use propsizer::{Catalog, StatModels};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SYNTHETIC_VOLTAGE_V: f64 = 48.0;

pub fn bundled_models() -> StatModels {
    StatModels::fit(&Catalog::bundled().unwrap()).unwrap()
}

fn jitter(rng: &mut ChaCha8Rng, spread: f64) -> f64 {
    1.0 + rng.gen_range(-spread..=spread)
}

fn product<P>(id: String, params: P, weight_n: f64) -> Product<P> {
    Product {
        id,
        params,
        weight_n,
        price: None,
        source: "synthetic".into(),
    }
}

pub fn synthetic_propellers(rng: &mut ChaCha8Rng, n: usize) -> Vec<Product<PropellerParams>> {
    (0..n)
        .map(|i| {
            let d_in: f64 = rng.gen_range(22.0..34.0);
            let h_in = d_in / rng.gen_range(2.8..3.2);
            let params = PropellerParams::new(inches_to_meters(d_in), inches_to_meters(h_in), 2).unwrap();
            let weight = 0.000_58 * d_in.powf(2.2) * jitter(rng, 0.1);
            product(format!("P{i:02} {d_in:.1}x{h_in:.1}"), params, weight)
        })
        .collect()
}

pub fn synthetic_motors(rng: &mut ChaCha8Rng, n: usize) -> Vec<Product<MotorParams>> {
    (0..n)
        .map(|i| {
            let current: f64 = rng.gen_range(25.0..60.0);
            let thrust = 0.0624 * SYNTHETIC_VOLTAGE_V * current * jitter(rng, 0.03);
            let params = MotorParams {
                max_voltage_v: SYNTHETIC_VOLTAGE_V,
                max_current_a: current,
                kv_rpm_per_v: rng.gen_range(75.0..125.0),
                no_load_current_a: rng.gen_range(0.5..1.0),
                no_load_voltage_v: 10.0,
                resistance_ohm: rng.gen_range(0.1..0.35),
                test_max_thrust_n: Some(thrust),
            };
            product(format!("M{i:02}"), params, 0.037 * thrust * jitter(rng, 0.1))
        })
        .collect()
}

pub fn synthetic_escs(rng: &mut ChaCha8Rng, n: usize) -> Vec<Product<EscParams>> {
    (0..n)
        .map(|i| {
            let current: f64 = rng.gen_range(30.0..100.0);
            let params = EscParams {
                max_voltage_v: SYNTHETIC_VOLTAGE_V,
                max_current_a: current,
                resistance_ohm: rng.gen_range(0.004..0.012),
            };
            product(format!("E{i:02}"), params, 0.015 * current * jitter(rng, 0.1))
        })
        .collect()
}

pub fn synthetic_batteries(rng: &mut ChaCha8Rng, n: usize) -> Vec<Product<BatteryParams>> {
    (0..n)
        .map(|i| {
            let cells = if rng.gen_bool(0.7) { 6 } else { 12 };
            let capacity = (rng.gen_range(8000.0_f64..22000.0) / 100.0).round() * 100.0;
            let rate: f64 = rng.gen_range(10.0..30.0);
            let params = BatteryParams {
                cells,
                capacity_mah: capacity,
                max_discharge_c: rate.round(),
                resistance_ohm: 0.002 * f64::from(cells) * 16000.0 / capacity,
            };
            let wh = f64::from(cells) * 4.0 * capacity / 1000.0;
            let weight = 9.8 * wh / rng.gen_range(150.0..190.0) * (1.0 + 0.004 * rate);
            product(format!("B{i:02}"), params, weight)
        })
        .collect()
}

/// Five-class catalog with `n` records per class, all at one voltage class.
pub fn synthetic_catalog(seed: u64, n: usize) -> Catalog {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = synthetic_propellers(&mut rng, n);
    let m = synthetic_motors(&mut rng, n);
    let e = synthetic_escs(&mut rng, n);
    let b = synthetic_batteries(&mut rng, n);
    Catalog::from_records(p, m, e, b).unwrap()
}

/// Requirements whose maximum thrust falls in the 48 V tier of the bundled
/// models.
pub fn synthetic_requirements(seed: u64) -> DesignRequirements {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let hover = rng.gen_range(35.0..55.0);
    let endurance = rng.gen_range(8.0..16.0);
    let altitude = rng.gen_range(0.0..300.0);
    DesignRequirements::from_hover_thrust(4, hover, endurance, altitude).unwrap()
}

/// Catalog of `n` records per class holding one product per class that
/// matches the continuous optimum of the requirements exactly, plus random
/// records from the same family. The analytical optimum is therefore
/// available by construction.
pub fn targeted_catalog(seed: u64, n: usize, models: &StatModels) -> (Catalog, DesignRequirements) {
    let req = synthetic_requirements(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bc = BladeCoeffs::default();
    let phi = bc.optimal_pitch_angle();
    let density = req.environment.air_density;
    let k_tm = thrust_motor_constant(aero_coeffs(OPTIMAL_BLADES, phi, &bc).unwrap(), density, models.k_c);
    let voltage = models.voltage_tiers.lookup(req.max_thrust_n).unwrap();
    let sizing = motor_sizing(req.max_thrust_n, voltage, k_tm, &models.power_thrust);
    let motor = MotorParams {
        max_voltage_v: voltage,
        max_current_a: sizing.max_current_a,
        kv_rpm_per_v: sizing.kv_rpm_per_v,
        no_load_current_a: rng.gen_range(0.5..0.8),
        no_load_voltage_v: 10.0,
        resistance_ohm: rng.gen_range(0.1..0.25),
        test_max_thrust_n: Some(req.max_thrust_n),
    };
    let (d, h) = optimal_diameter(&motor, OPTIMAL_BLADES, phi, density, &bc).unwrap();
    let prop = PropellerParams::new(d * (1.0 - 1e-9), h, OPTIMAL_BLADES).unwrap();
    let esc = EscParams {
        max_voltage_v: voltage,
        max_current_a: motor.max_current_a,
        resistance_ohm: 0.005,
    };
    let battery = battery_sizing(&prop, &motor, &esc, voltage, &req, bc).unwrap();
    // an ideal 6S unit used two in series, so the sized capacity is exact
    let unit = BatteryParams {
        cells: battery.cells / 2,
        capacity_mah: (battery.capacity_mah / 10.0).ceil() * 10.0,
        max_discharge_c: battery.max_discharge_c.ceil(),
        resistance_ohm: 0.0,
    };
    let d_in = propsizer::units::meters_to_inches(d);
    let wh = f64::from(unit.cells) * 4.0 * unit.capacity_mah / 1000.0;

    let mut p = synthetic_propellers(&mut rng, n - 1);
    let mut m = synthetic_motors(&mut rng, n - 1);
    let mut e = synthetic_escs(&mut rng, n - 1);
    let mut b = synthetic_batteries(&mut rng, n - 1);
    p.push(product("X prop".into(), prop, 0.000_58 * d_in.powf(2.2)));
    m.push(product("X motor".into(), motor, 0.037 * req.max_thrust_n));
    e.push(product("X esc".into(), esc, 0.015 * esc.max_current_a));
    b.push(product(
        "X battery".into(),
        unit,
        9.8 * wh / 170.0 * (1.0 + 0.004 * unit.max_discharge_c),
    ));
    (Catalog::from_records(p, m, e, b).unwrap(), req)
}

/// Writes `catalog` as one schema-v1 JSON file per class.
pub fn write_catalog_dir(catalog: &Catalog, dir: &std::path::Path) {
    fn file<P: serde::Serialize>(dir: &std::path::Path, name: &str, class: &str, records: &[Product<P>]) {
        let doc = serde_json::json!({ "schema_version": 1, "class": class, "records": records });
        std::fs::write(dir.join(name), serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    }
    file(dir, "propellers.json", "propeller", &catalog.propellers);
    file(dir, "motors.json", "motor", &catalog.motors);
    file(dir, "escs.json", "esc", &catalog.escs);
    file(dir, "batteries.json", "battery", &catalog.batteries);
}
