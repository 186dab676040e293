//! Model, selector and pipeline invariants as seeded 1000-case property
//! checks. Each check returns the proptest failure message on error.

use std::f64::consts::PI;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

use propsizer::catalog::{
    select_battery, select_esc, select_motor, select_propeller, BatteryPack, BatteryTarget, EscTarget, MotorTarget,
    PackLimits, Product, PropellerTarget,
};
use propsizer::evaluator::{full_throttle_point, hover_point, ComponentWeights, PropulsionSystem};
use propsizer::model::battery::{battery_efficiency, capacity_for_endurance, discharge_time};
use propsizer::model::esc::esc_efficiency;
use propsizer::model::motor::motor_efficiency;
use propsizer::model::propeller::{aero_coeffs, speed_for_thrust, thrust_torque, thrust_torque_ratio};
use propsizer::model::{
    air_density, BatteryParams, BladeCoeffs, DesignRequirements, Environment, EscParams, MotorParams, PropellerParams,
    RequirementsInput,
};
use propsizer::optimizer::{optimal_diameter, optimize, OptimizerConfig};
use propsizer::stats::fit_voltage_tiers;
use propsizer::units::inches_to_meters;
use propsizer::{Catalog, StatModels};

pub const CASES: u32 = 1000;
pub const SEED: u64 = 0x0070_7270_7369_7a65;

pub type Check = fn() -> Result<(), String>;

pub fn config() -> Config {
    Config {
        cases: CASES,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    }
}

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    TestRunner::new(config())
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn product<P>(id: String, params: P, weight_n: f64) -> Product<P> {
    Product {
        id,
        params,
        weight_n,
        price: None,
        source: "property".into(),
    }
}

fn blade_coeffs() -> impl Strategy<Value = BladeCoeffs> {
    (0.1..1.0f64, 0.01..0.1f64, 0.001..0.05f64, 0.2..3.0f64).prop_map(|(k_t0, k_m0, k_m1, k_m2)| BladeCoeffs {
        k_t0,
        k_m0,
        k_m1,
        k_m2,
    })
}

fn motor() -> impl Strategy<Value = MotorParams> {
    (
        prop::sample::select(vec![12.0, 16.0, 24.0, 48.0]),
        5.0..80.0f64,
        50.0..1200.0f64,
        0.01..0.05f64,
        0.005..0.02f64,
    )
        .prop_map(|(volts, amps, kv, i0_frac, r_frac)| MotorParams {
            max_voltage_v: volts,
            max_current_a: amps,
            kv_rpm_per_v: kv,
            no_load_current_a: i0_frac * amps,
            no_load_voltage_v: 10.0,
            // resistive drop a small fraction of the rated voltage
            resistance_ohm: r_frac * volts / amps,
            test_max_thrust_n: None,
        })
}

pub fn air_density_decreases_with_altitude() -> Result<(), String> {
    run((0.0..9900.0f64, -30.0..40.0f64, 1.0..100.0f64), |(h, t, dh)| {
        prop_assert!(air_density(h + dh, t).unwrap() < air_density(h, t).unwrap());
        Ok(())
    })
}

pub fn thrust_and_torque_scale_with_speed_squared() -> Result<(), String> {
    run(
        (100.0..20000.0f64, 0.1..10.0f64, 0.05..1.5f64, 0.02..0.5f64, 0.5..1.5f64),
        |(n, k, d, phi, rho)| {
            let c = aero_coeffs(2, phi, &BladeCoeffs::default()).unwrap();
            let (t1, m1) = thrust_torque(n, d, c, rho);
            let (t2, m2) = thrust_torque(k * n, d, c, rho);
            prop_assert!(rel(t2, k * k * t1) < 1e-12);
            prop_assert!(rel(m2, k * k * m1) < 1e-12);
            Ok(())
        },
    )
}

pub fn speed_for_thrust_inverts_thrust() -> Result<(), String> {
    run(
        (10.0..20000.0f64, 0.05..1.5f64, 0.02..0.5f64, 0.5..1.5f64),
        |(n, d, phi, rho)| {
            let c = aero_coeffs(2, phi, &BladeCoeffs::default()).unwrap();
            let (t, _) = thrust_torque(n, d, c, rho);
            let back = speed_for_thrust(t, d, c.thrust, rho).unwrap();
            prop_assert!(rel(back, n) < 1e-9);
            Ok(())
        },
    )
}

pub fn thrust_torque_ratio_peaks_at_optimal_pitch() -> Result<(), String> {
    run(blade_coeffs(), |bc| {
        let step = 5e-4;
        let best = (1..=2400)
            .map(|i| f64::from(i) * step)
            .max_by(|a, b| {
                let ra = thrust_torque_ratio(2, *a, &bc).unwrap();
                let rb = thrust_torque_ratio(2, *b, &bc).unwrap();
                ra.total_cmp(&rb)
            })
            .unwrap();
        prop_assert!((best - bc.optimal_pitch_angle()).abs() <= step);
        Ok(())
    })
}

pub fn thrust_torque_ratio_inverse_in_blades() -> Result<(), String> {
    run((blade_coeffs(), 0.02..0.6f64, 3u32..8), |(bc, phi, blades)| {
        let base = 2.0 * thrust_torque_ratio(2, phi, &bc).unwrap();
        let other = f64::from(blades) * thrust_torque_ratio(blades, phi, &bc).unwrap();
        prop_assert!(rel(other, base) < 1e-12);
        Ok(())
    })
}

pub fn motor_circuit_is_affine() -> Result<(), String> {
    run(
        (motor(), 0.0..5.0f64, 0.0..5.0f64, 0.0..8000.0f64, 0.0..8000.0f64),
        |(m, m1, m2, n1, n2)| {
            let f = |t: f64, n: f64| m.electrical_state(t, n).unwrap();
            let (i0, u0) = f(0.0, 0.0);
            let (ia, ua) = f(m1, n1);
            let (ib, ub) = f(m2, n2);
            let (is, us) = f(m1 + m2, n1 + n2);
            prop_assert!((is + i0 - ia - ib).abs() < 1e-9 * (1.0 + is.abs()));
            prop_assert!((us + u0 - ua - ub).abs() < 1e-9 * (1.0 + us.abs()));
            Ok(())
        },
    )
}

pub fn optimal_diameter_reaches_theoretical_max_thrust() -> Result<(), String> {
    run((motor(), 0.5..1.5f64), |(m, rho)| {
        let bc = BladeCoeffs::default();
        let phi = bc.optimal_pitch_angle();
        let (d, _) = optimal_diameter(&m, 2, phi, rho, &bc).unwrap();
        let c = aero_coeffs(2, phi, &bc).unwrap();
        let lim = m.limits().unwrap();
        let (t, torque) = thrust_torque(lim.max_speed_rpm, d, c, rho);
        prop_assert!(rel(t, m.theoretical_max_thrust(c, rho).unwrap()) < 1e-6);
        prop_assert!(rel(torque, lim.max_torque_nm) < 1e-9);
        Ok(())
    })
}

pub fn efficiencies_fall_with_parasitics() -> Result<(), String> {
    run(
        (
            10.0..60.0f64,
            1.0..40.0f64,
            0.0..0.1f64,
            1e-4..0.05f64,
            0.0..0.5f64,
            1e-3..0.3f64,
        ),
        |(u, i, r, dr, i0, di0)| {
            prop_assert_eq!(motor_efficiency(u, i, 0.0, 0.0).unwrap(), 1.0);
            let base = motor_efficiency(u, i, r, i0).unwrap();
            prop_assert!(motor_efficiency(u, i, r + dr, i0).unwrap() < base);
            prop_assert!(motor_efficiency(u, i, r, i0 + di0).unwrap() < base);

            prop_assert_eq!(esc_efficiency(u, i, 0.0).unwrap(), 1.0);
            prop_assert!(esc_efficiency(u, i, r + dr).unwrap() < esc_efficiency(u, i, r).unwrap());

            let ib = 4.0 * i;
            prop_assert_eq!(battery_efficiency(ib, u, 0.0, 0.0).unwrap(), 1.0);
            let rb = r * 0.1;
            prop_assert!(
                battery_efficiency(ib, u, rb + dr * 0.1, 0.0).unwrap() < battery_efficiency(ib, u, rb, 0.0).unwrap()
            );
            Ok(())
        },
    )
}

pub fn capacity_and_discharge_time_are_inverse() -> Result<(), String> {
    run((0.5..120.0f64, 0.1..500.0f64, 0.1..10.0f64), |(minutes, current, k)| {
        let c = capacity_for_endurance(minutes, current);
        prop_assert!(rel(discharge_time(c, current).unwrap(), minutes) < 1e-12);
        let t = discharge_time(c, current).unwrap();
        prop_assert!(rel(discharge_time(k * c, current).unwrap(), k * t) < 1e-12);
        Ok(())
    })
}

fn hover_system() -> impl Strategy<Value = (PropulsionSystem, f64)> {
    (
        26.0..30.0f64,
        0.0..0.6f64,
        0.0..1.5f64,
        0.0..0.05f64,
        0.0..0.02f64,
        0.0..2.0f64,
        0.0..1000.0f64,
        5.0..45.0f64,
    )
        .prop_map(|(d_in, r_m, i0, r_b, r_e, other, alt, thrust)| {
            let system = PropulsionSystem {
                propeller: PropellerParams::new(inches_to_meters(d_in), inches_to_meters(d_in / 3.0), 2).unwrap(),
                motor: MotorParams {
                    max_voltage_v: 48.0,
                    max_current_a: 36.0,
                    kv_rpm_per_v: 90.0,
                    no_load_current_a: i0,
                    no_load_voltage_v: 10.0,
                    resistance_ohm: r_m,
                    test_max_thrust_n: None,
                },
                esc: EscParams {
                    max_voltage_v: 48.0,
                    max_current_a: 60.0,
                    resistance_ohm: r_e,
                },
                battery: BatteryParams {
                    cells: 12,
                    capacity_mah: 16000.0,
                    max_discharge_c: 15.0,
                    resistance_ohm: r_b,
                },
                rotor_count: 4,
                environment: Environment::at_altitude(alt).unwrap(),
                blade_coeffs: BladeCoeffs::default(),
                other_current_a: other,
                weights: ComponentWeights::default(),
            };
            (system, thrust)
        })
}

pub fn hover_point_conserves_power_and_resubstitutes() -> Result<(), String> {
    run(hover_system(), |(s, thrust)| {
        let Ok(h) = hover_point(&s, thrust) else {
            return Err(TestCaseError::reject("hover infeasible"));
        };
        let p = h.point;
        let n = f64::from(s.rotor_count);
        let u_b = s.battery.voltage_v();
        let shaft = p.torque_nm * 2.0 * PI * p.speed_rpm / 60.0;
        let tol = 1e-9;
        prop_assert!(u_b * p.battery_current_a >= n * p.esc_voltage_v * p.esc_current_a * (1.0 - tol));
        prop_assert!(p.esc_voltage_v * p.esc_current_a >= p.motor_voltage_v * p.motor_current_a * (1.0 - tol));
        prop_assert!(p.motor_voltage_v * p.motor_current_a >= shaft * (1.0 - tol));

        // re-substitution into every stage
        let c = s.aero_coeffs().unwrap();
        let (t, m) = thrust_torque(p.speed_rpm, s.propeller.diameter_m, c, s.environment.air_density);
        prop_assert!((t - thrust).abs() < 1e-6);
        prop_assert!((m - p.torque_nm).abs() < 1e-6);
        let (i_m, u_m) = s.motor.electrical_state(p.torque_nm, p.speed_rpm).unwrap();
        prop_assert!((i_m - p.motor_current_a).abs() < 1e-6);
        prop_assert!((u_m - p.motor_voltage_v).abs() < 1e-6);
        prop_assert!((p.throttle * p.motor_current_a - p.esc_current_a).abs() < 1e-6);
        prop_assert!(
            (p.throttle * p.esc_voltage_v - (p.motor_voltage_v + p.motor_current_a * s.esc.resistance_ohm)).abs()
                < 1e-6
        );
        prop_assert!((n * p.esc_current_a + s.other_current_a - p.battery_current_a).abs() < 1e-6);
        // the fixed point stops on a 1e-6 A current change, which leaves a
        // voltage residual of the same order times the loop gain
        prop_assert!((u_b - s.battery.resistance_ohm * p.battery_current_a - p.esc_voltage_v).abs() < 1e-4);
        Ok(())
    })
}

pub fn full_throttle_approaches_theoretical_max() -> Result<(), String> {
    run((motor(), 0.0..1000.0f64), |(mut m, alt)| {
        m.resistance_ohm *= 1e-3;
        m.no_load_current_a *= 1e-3;
        let bc = BladeCoeffs::default();
        let phi = bc.optimal_pitch_angle();
        let env = Environment::at_altitude(alt).unwrap();
        let (d, _) = optimal_diameter(&m, 2, phi, env.air_density, &bc).unwrap();
        let s = PropulsionSystem {
            propeller: PropellerParams::from_pitch_angle(d, phi, 2).unwrap(),
            motor: m,
            esc: EscParams {
                max_voltage_v: m.max_voltage_v,
                max_current_a: m.max_current_a * 2.0,
                resistance_ohm: 0.0,
            },
            battery: BatteryParams {
                cells: (m.max_voltage_v / 4.0) as u32,
                capacity_mah: 10000.0,
                max_discharge_c: 50.0,
                resistance_ohm: 0.0,
            },
            rotor_count: 4,
            environment: env,
            blade_coeffs: bc,
            other_current_a: 0.0,
            weights: ComponentWeights::default(),
        };
        let ft = full_throttle_point(&s).unwrap();
        let c = s.aero_coeffs().unwrap();
        let ideal = m.theoretical_max_thrust(c, env.air_density).unwrap();
        prop_assert!(rel(ft.thrust_n, ideal) < 0.02, "{} vs {}", ft.thrust_n, ideal);
        Ok(())
    })
}

pub fn voltage_tiers_are_monotone_steps() -> Result<(), String> {
    let records = prop::collection::vec(
        (
            prop::sample::select(vec![8.0, 12.0, 16.0, 24.0, 36.0, 48.0]),
            1.0..200.0f64,
        ),
        1..30,
    );
    run((records, 0.1..200.0f64, 0.0..50.0f64), |(records, t, dt)| {
        let model = fit_voltage_tiers(&records).unwrap();
        let last = model.tiers.last().unwrap().max_thrust_n;
        prop_assume!(t + dt <= last);
        let lo = model.tier_for(t).unwrap();
        let hi = model.tier_for(t + dt).unwrap();
        prop_assert!(lo.voltage_v <= hi.voltage_v);
        prop_assert!(lo.max_thrust_n >= t);
        Ok(())
    })
}

pub fn weight_models_monotone_and_positive() -> Result<(), String> {
    let models = StatModels::fit(&Catalog::bundled().unwrap()).unwrap();
    let w = models.weight_models;
    run(
        (
            0.25..1.0f64,
            0.0..0.2f64,
            prop::sample::select(vec![12.0, 16.0, 24.0, 48.0]),
            10.0..180.0f64,
            0.0..30.0f64,
            10.0..100.0f64,
            0.0..20.0f64,
        ),
        |(d, dd, u, t, dt, i, di)| {
            let p = w.predict_propeller(2, d).unwrap();
            prop_assert!(p > 0.0);
            prop_assert!(w.predict_propeller(2, d + dd).unwrap() >= p);
            prop_assert!(w.predict_propeller(3, d).unwrap() >= p);
            let m = w.predict_motor(u, t).unwrap();
            prop_assert!(m > 0.0);
            prop_assert!(w.predict_motor(u, t + dt).unwrap() >= m);
            prop_assert!(w.predict_motor(u * 2.0, t).unwrap() >= m);
            let e = w.predict_esc(u, i).unwrap();
            prop_assert!(e > 0.0);
            prop_assert!(w.predict_esc(u, i + di).unwrap() >= e);
            prop_assert!(w.predict_esc(u * 2.0, i).unwrap() >= e);
            Ok(())
        },
    )
}

fn motor_records() -> impl Strategy<Value = Vec<Product<MotorParams>>> {
    prop::collection::vec((motor(), 1.0..10.0f64), 1..12).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (m, w))| product(format!("m{i}"), m, w))
            .collect()
    })
}

fn rotate<T: Clone>(v: &[T], k: usize) -> Vec<T> {
    let mut out: Vec<T> = v.iter().rev().cloned().collect();
    if !out.is_empty() {
        let k = k % out.len();
        out.rotate_left(k);
    }
    out
}

pub fn motor_selection_is_safe_stable_and_dominant() -> Result<(), String> {
    let target = (
        prop::sample::select(vec![12.0, 16.0, 24.0, 48.0]),
        5.0..80.0f64,
        50.0..1200.0f64,
    )
        .prop_map(|(u, i, kv)| MotorTarget {
            max_voltage_v: u,
            max_current_a: i,
            kv_rpm_per_v: kv,
        });
    run((target, motor_records(), 0usize..20), |(target, motors, k)| {
        let Ok(sel) = select_motor(&target, &motors) else {
            prop_assert!(!motors
                .iter()
                .any(|m| m.params.max_voltage_v >= target.max_voltage_v
                    && m.params.max_current_a >= target.max_current_a));
            return Ok(());
        };
        prop_assert!(sel.params.max_voltage_v >= target.max_voltage_v);
        prop_assert!(sel.params.max_current_a >= target.max_current_a);
        let shuffled = rotate(&motors, k);
        prop_assert_eq!(&select_motor(&target, &shuffled).unwrap().id, &sel.id);
        let key = |m: &Product<MotorParams>| {
            (
                m.params.max_voltage_v,
                (m.params.kv_rpm_per_v - target.kv_rpm_per_v).abs(),
                m.params.max_current_a,
            )
        };
        for m in motors.iter().filter(|m| {
            m.params.max_voltage_v >= target.max_voltage_v && m.params.max_current_a >= target.max_current_a
        }) {
            prop_assert!(key(m) >= key(sel), "{} beats {}", m.id, sel.id);
        }
        Ok(())
    })
}

pub fn propeller_selection_is_safe_stable_and_dominant() -> Result<(), String> {
    let props = prop::collection::vec((2u32..4, 0.2..1.0f64, 2.6..3.4f64, 0.1..3.0f64), 1..15).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (b, d, ratio, w))| product(format!("p{i}"), PropellerParams::new(d, d / ratio, b).unwrap(), w))
            .collect::<Vec<_>>()
    });
    let target = (0.2..1.0f64, 0.08..0.13f64).prop_map(|(d, phi)| PropellerTarget {
        blades: 2,
        pitch_angle: phi,
        diameter_m: d,
        pitch_band: 0.2,
    });
    run((target, props, 0usize..20), |(target, props, k)| {
        let Ok(sel) = select_propeller(&target, &props) else {
            return Ok(());
        };
        prop_assert_eq!(sel.params.blades, target.blades);
        prop_assert!(sel.params.diameter_m <= target.diameter_m);
        let shuffled = rotate(&props, k);
        prop_assert_eq!(&select_propeller(&target, &shuffled).unwrap().id, &sel.id);
        let in_band = |p: &Product<PropellerParams>| {
            (p.params.pitch_angle() - target.pitch_angle).abs() <= target.pitch_band * target.pitch_angle
        };
        if in_band(sel) {
            for p in props
                .iter()
                .filter(|p| p.params.blades == 2 && p.params.diameter_m <= target.diameter_m && in_band(p))
            {
                prop_assert!(p.params.diameter_m <= sel.params.diameter_m);
            }
        }
        Ok(())
    })
}

pub fn esc_selection_is_safe_stable_and_dominant() -> Result<(), String> {
    let escs = prop::collection::vec(
        (
            prop::sample::select(vec![12.0, 24.0, 48.0]),
            10.0..120.0f64,
            0.001..0.02f64,
            0.1..2.0f64,
        ),
        1..12,
    )
    .prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (u, a, r, w))| {
                product(
                    format!("e{i}"),
                    EscParams {
                        max_voltage_v: u,
                        max_current_a: a,
                        resistance_ohm: r,
                    },
                    w,
                )
            })
            .collect::<Vec<_>>()
    });
    let target = (prop::sample::select(vec![12.0, 24.0, 48.0]), 10.0..120.0f64).prop_map(|(u, i)| EscTarget {
        max_voltage_v: u,
        max_current_a: i,
    });
    run((target, escs, 0usize..20), |(target, escs, k)| {
        let Ok(sel) = select_esc(&target, &escs) else {
            return Ok(());
        };
        prop_assert!(sel.params.max_voltage_v >= target.max_voltage_v);
        prop_assert!(sel.params.max_current_a >= target.max_current_a);
        let shuffled = rotate(&escs, k);
        prop_assert_eq!(&select_esc(&target, &shuffled).unwrap().id, &sel.id);
        let key = |e: &Product<EscParams>| (e.params.max_voltage_v, e.params.max_current_a, e.params.resistance_ohm);
        for e in escs.iter().filter(|e| {
            e.params.max_voltage_v >= target.max_voltage_v && e.params.max_current_a >= target.max_current_a
        }) {
            prop_assert!(key(e) >= key(sel));
        }
        Ok(())
    })
}

fn battery_units() -> impl Strategy<Value = Vec<Product<BatteryParams>>> {
    prop::collection::vec(
        (
            prop::sample::select(vec![3u32, 4, 6, 12]),
            2000.0..25000.0f64,
            5.0..40.0f64,
            0.001..0.03f64,
        ),
        1..8,
    )
    .prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (cells, cap, k, r))| {
                let params = BatteryParams {
                    cells,
                    capacity_mah: cap.round(),
                    max_discharge_c: k.round(),
                    resistance_ohm: r,
                };
                let weight = 9.8 * params.energy_wh() / 170.0;
                product(format!("b{i}"), params, weight)
            })
            .collect()
    })
}

pub fn battery_selection_is_safe_and_stable() -> Result<(), String> {
    let target = (
        prop::sample::select(vec![6u32, 12, 24]),
        3000.0..40000.0f64,
        2.0..30.0f64,
        10.0..400.0f64,
    )
        .prop_map(|(cells, cap, k, amps)| BatteryTarget {
            cells,
            capacity_mah: cap,
            max_discharge_c: k,
            min_pack_current_a: amps,
            capacity_floor: 0.8,
        });
    run((target, battery_units(), 0usize..20), |(target, units, k)| {
        let limits = PackLimits::default();
        let Ok(pack) = select_battery(&target, &units, limits) else {
            return Ok(());
        };
        prop_assert_eq!(pack.params.cells, target.cells);
        prop_assert!(pack.params.max_discharge_c >= target.max_discharge_c);
        prop_assert!(pack.params.max_current_a() >= target.min_pack_current_a);
        prop_assert!(pack.params.capacity_mah >= target.capacity_floor * target.capacity_mah);
        prop_assert!(pack.series <= limits.max_series && pack.parallel <= limits.max_parallel);
        let again = select_battery(&target, &rotate(&units, k), limits).unwrap();
        prop_assert_eq!(again, pack);
        Ok(())
    })
}

pub fn pack_composition_arithmetic() -> Result<(), String> {
    run((battery_units(), 1u32..9, 1u32..9), |(units, s, p)| {
        let unit = &units[0];
        let pack = BatteryPack::compose(unit, s, p);
        let u = &unit.params;
        prop_assert_eq!(pack.params.cells, u.cells * s);
        prop_assert!(rel(pack.params.capacity_mah, u.capacity_mah * f64::from(p)) < 1e-12);
        prop_assert!(rel(pack.params.max_current_a(), u.max_current_a() * f64::from(p)) < 1e-12);
        prop_assert!(
            rel(
                pack.params.resistance_ohm,
                u.resistance_ohm * f64::from(s) / f64::from(p)
            ) < 1e-12
        );
        prop_assert!(rel(pack.weight_n, unit.weight_n * f64::from(s * p)) < 1e-12);
        prop_assert_eq!(pack.params.max_discharge_c, u.max_discharge_c);
        Ok(())
    })
}

pub fn catalog_hash_ignores_order() -> Result<(), String> {
    let bundled = Catalog::bundled().unwrap();
    run((0usize..50, 0usize..50, 0usize..50, 0usize..50), |(a, b, c, d)| {
        let shuffled = Catalog::from_records(
            rotate(&bundled.propellers, a),
            rotate(&bundled.motors, b),
            rotate(&bundled.escs, c),
            rotate(&bundled.batteries, d),
        )
        .unwrap();
        prop_assert_eq!(&shuffled.hash, &bundled.hash);
        Ok(())
    })
}

pub fn requirements_resolve_consistently() -> Result<(), String> {
    run(
        (1u32..13, 1.0..2000.0f64, 0.05..0.95f64, 0.5..120.0f64, 0.0..3000.0f64),
        |(rotors, weight, gamma, minutes, alt)| {
            let input = RequirementsInput {
                total_weight_n: Some(weight),
                hover_thrust_n: None,
                rotor_count: rotors,
                thrust_ratio: gamma,
                endurance_min: minutes,
                altitude_m: alt,
                temperature_c: 0.0,
                other_current_a: 0.5,
            };
            let r = input.resolve().unwrap();
            prop_assert!(rel(r.hover_thrust_n * f64::from(rotors), weight) < 1e-12);
            prop_assert!(rel(r.max_thrust_n, r.hover_thrust_n / gamma) < 1e-9);
            Ok(())
        },
    )
}

pub fn optimizer_results_are_safe_and_deterministic() -> Result<(), String> {
    let catalog = Catalog::bundled().unwrap();
    let models = StatModels::fit(&catalog).unwrap();
    let cfg = OptimizerConfig::default();
    run(
        (
            prop::sample::select(vec![4u32, 6, 8]),
            3.0..70.0f64,
            0.4..0.6f64,
            3.0..30.0f64,
            0.0..1500.0f64,
        ),
        |(rotors, hover, gamma, minutes, alt)| {
            let mut req = DesignRequirements::from_hover_thrust(rotors, hover, minutes, alt).unwrap();
            req.thrust_ratio = gamma;
            req.max_thrust_n = hover / gamma;
            let first = optimize(&req, &catalog, &models, &cfg);
            let second = optimize(&req, &catalog, &models, &cfg);
            match (&first, &second) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
                _ => prop_assert!(false, "nondeterministic outcome"),
            }
            let Ok(d) = first else {
                let e = first.unwrap_err();
                prop_assert!(e.is_infeasible(), "untyped failure: {e}");
                return Ok(());
            };
            prop_assert!(d.performance.violations.is_empty());
            prop_assert!(d.performance.endurance_min >= cfg.endurance_slack * minutes);
            prop_assert_eq!(d.optimal.max_thrust_n, req.max_thrust_n);
            let pos = |s: u8| d.trace.iter().position(|t| t.step == s).unwrap();
            prop_assert!(pos(4) < pos(5));
            prop_assert!(pos(6) < pos(11) && pos(9) < pos(11));
            Ok(())
        },
    )
}

pub const ALL: &[(&str, Check)] = &[
    (
        "air density decreases with altitude",
        air_density_decreases_with_altitude,
    ),
    (
        "thrust and torque scale with speed squared",
        thrust_and_torque_scale_with_speed_squared,
    ),
    ("speed for thrust inverts thrust", speed_for_thrust_inverts_thrust),
    (
        "thrust/torque ratio peaks at the optimal pitch",
        thrust_torque_ratio_peaks_at_optimal_pitch,
    ),
    (
        "thrust/torque ratio is inverse in blade count",
        thrust_torque_ratio_inverse_in_blades,
    ),
    ("motor circuit is affine in torque and speed", motor_circuit_is_affine),
    (
        "optimal diameter reaches the theoretical max thrust",
        optimal_diameter_reaches_theoretical_max_thrust,
    ),
    ("efficiencies fall with parasitics", efficiencies_fall_with_parasitics),
    (
        "capacity and discharge time are inverse",
        capacity_and_discharge_time_are_inverse,
    ),
    (
        "hover point conserves power and resubstitutes",
        hover_point_conserves_power_and_resubstitutes,
    ),
    (
        "full throttle approaches the theoretical max",
        full_throttle_approaches_theoretical_max,
    ),
    ("voltage tiers are monotone steps", voltage_tiers_are_monotone_steps),
    (
        "weight models are monotone and positive",
        weight_models_monotone_and_positive,
    ),
    (
        "motor selection is safe, stable, dominant",
        motor_selection_is_safe_stable_and_dominant,
    ),
    (
        "propeller selection is safe, stable, dominant",
        propeller_selection_is_safe_stable_and_dominant,
    ),
    (
        "ESC selection is safe, stable, dominant",
        esc_selection_is_safe_stable_and_dominant,
    ),
    (
        "battery selection is safe and stable",
        battery_selection_is_safe_and_stable,
    ),
    ("pack composition arithmetic", pack_composition_arithmetic),
    ("catalog hash ignores record order", catalog_hash_ignores_order),
    ("requirements resolve consistently", requirements_resolve_consistently),
    (
        "optimizer results are safe and deterministic",
        optimizer_results_are_safe_and_deterministic,
    ),
];
