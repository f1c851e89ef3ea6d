use asvnav::env::{Environment, FieldSpec};
use asvnav::geo::{EnuVector, GeoPoint, LocalFrame};
use asvnav::vehicle::{relative_to_absolute, sense, step, ActuatorCommand, AsvState, NoiseSpec, VehicleParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn origin() -> GeoPoint {
    GeoPoint::new(34.0, -81.0).unwrap()
}

fn steady(params: &VehicleParams, speed: f64) -> (AsvState, ActuatorCommand) {
    (AsvState::new(origin(), 0.0, speed), ActuatorCommand::new(speed / params.max_water_speed, 0.0))
}

#[test]
fn calm_step_advances_along_heading() {
    let p = VehicleParams::default();
    let (s, cmd) = steady(&p, 2.0);
    let n = step(&s, cmd, &Environment::calm(origin()), &p, 0.1).unwrap();
    let d = LocalFrame::new(origin()).to_enu(n.pos);
    assert!((d.north - 0.2).abs() < 1e-9 && d.east.abs() < 1e-12);
    assert!((n.spd_t - 2.0).abs() < 1e-12);
}

#[test]
fn cross_current_vector_sum() {
    let p = VehicleParams::default();
    let (s, cmd) = steady(&p, 2.0);
    let env = Environment::new(origin(), FieldSpec::uniform(0.5, 90.0), FieldSpec::calm());
    let n = step(&s, cmd, &env, &p, 0.1).unwrap();
    assert!((n.spd_t - 4.25f64.sqrt()).abs() < 1e-9);
    assert!((n.h_t - 0.5f64.atan2(2.0).to_degrees()).abs() < 1e-9);
}

#[test]
fn unpowered_hull_drifts_with_current() {
    let p = VehicleParams::default();
    let env = Environment::new(origin(), FieldSpec::uniform(1.0, 180.0), FieldSpec::calm());
    let mut s = AsvState::new(origin(), 0.0, 0.0);
    for _ in 0..100 {
        s = step(&s, ActuatorCommand::new(0.0, 0.0), &env, &p, 0.1).unwrap();
    }
    assert!((s.spd_t - 1.0).abs() < 1e-12);
    assert!((s.h_t - 180.0).abs() < 1e-9);
    let d = LocalFrame::new(origin()).to_enu(s.pos);
    assert!((d.north + 10.0).abs() < 1e-6);
}

#[test]
fn rejects_bad_inputs() {
    let p = VehicleParams::default();
    let (s, cmd) = steady(&p, 1.0);
    let env = Environment::calm(origin());
    assert!(step(&s, cmd, &env, &p, 0.0).is_err());
    assert!(step(&s, cmd, &env, &p, 0.6).is_err());
    assert!(step(&s, ActuatorCommand { thrust: f64::NAN, rudder: 0.0 }, &env, &p, 0.1).is_err());
}

#[test]
fn stationary_sensor_sees_absolute_current() {
    let env = Environment::new(origin(), FieldSpec::uniform(0.677, 180.0), FieldSpec::calm());
    let s = AsvState::new(origin(), 0.0, 0.0);
    let f = sense(&s, &env, &NoiseSpec::NONE, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    assert!((f.rel_water.speed - 0.677).abs() < 1e-12);
    assert!((f.rel_water.direction - 180.0).abs() < 1e-9);
}

#[test]
fn moving_sensor_sees_headwind_of_its_own_motion() {
    let s = AsvState::new(origin(), 0.0, 2.0);
    let f = sense(&s, &Environment::calm(origin()), &NoiseSpec::NONE, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    assert!((f.rel_water.speed - 2.0).abs() < 1e-12);
    assert!((f.rel_water.direction - 180.0).abs() < 1e-9);
    let a = relative_to_absolute(&f, &s);
    assert_eq!((a.spd_c, a.spd_w), (0.0, 0.0));
}

#[test]
fn noise_is_seeded() {
    let env = Environment::new(origin(), FieldSpec::uniform(0.5, 10.0), FieldSpec::uniform(5.0, 200.0));
    let s = AsvState::new(origin(), 30.0, 1.5);
    let noise = NoiseSpec { sigma_speed: 0.05, sigma_dir: 2.0 };
    let a = sense(&s, &env, &noise, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    let b = sense(&s, &env, &noise, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    let c = sense(&s, &env, &noise, &mut ChaCha8Rng::seed_from_u64(10)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

proptest! {
    #[test]
    fn superposition_holds(
        heading in 0.0..360.0f64, thrust in 0.0..1.0f64, rudder in -1.0..1.0f64,
        cs in 0.0..2.0f64, cd in 0.0..360.0f64, ws in 0.0..12.0f64, wd in 0.0..360.0f64,
    ) {
        let p = VehicleParams::default();
        let run = |env: &Environment| {
            let mut s = AsvState::new(origin(), heading, 0.5);
            for _ in 0..300 {
                s = step(&s, ActuatorCommand::new(thrust, rudder), env, &p, 0.1).unwrap();
            }
            env.frame.to_enu(s.pos)
        };
        let calm = run(&Environment::calm(origin()));
        let drift = run(&Environment::new(origin(), FieldSpec::uniform(cs, cd), FieldSpec::uniform(ws, wd)));
        let v = EnuVector::new(cs * cd.to_radians().sin(), cs * cd.to_radians().cos())
            + EnuVector::new(ws * wd.to_radians().sin(), ws * wd.to_radians().cos()).scale(p.wind_drag_factor);
        prop_assert!((drift - calm - v.scale(30.0)).norm() < 1e-6);
    }

    #[test]
    fn sensing_inverts(heading in 0.0..360.0f64, spd in 0.0..6.0f64, track in 0.0..360.0f64, gs in 0.0..8.0f64,
                       cs in 0.1..3.0f64, cd in 0.0..360.0f64) {
        let env = Environment::new(origin(), FieldSpec::uniform(cs, cd), FieldSpec::calm());
        let mut s = AsvState::new(origin(), heading, spd);
        s.h_t = track;
        s.spd_t = gs;
        let f = relative_to_absolute(&sense(&s, &env, &NoiseSpec::NONE, &mut ChaCha8Rng::seed_from_u64(1)).unwrap(), &s);
        prop_assert!((f.spd_c - cs).abs() < 1e-9);
        let dd = (f.dir_c - cd).rem_euclid(360.0);
        prop_assert!(dd.min(360.0 - dd) < 1e-7);
        prop_assert_eq!(f.spd_w, 0.0);
    }
}

#[test]
fn coarse_step_tracks_fine_reference() {
    let p = VehicleParams::default();
    let env = Environment::new(origin(), FieldSpec::uniform(0.677, 180.0), FieldSpec::uniform(6.0, 45.0));
    let run = |dt: f64, n: usize| {
        let mut s = AsvState::new(origin(), 0.0, 2.0);
        for i in 0..n {
            let rudder = if (i as f64 * dt) < 5.0 { 0.1 } else { 0.0 };
            s = step(&s, ActuatorCommand::new(0.32, rudder), &env, &p, dt).unwrap();
        }
        env.frame.to_enu(s.pos)
    };
    // a short heading correction then a straight run: 50 s at 2 m/s is 100 m of hull travel
    let coarse = run(0.1, 500);
    let fine = run(0.01, 5000);
    assert!((coarse - fine).norm() < 0.05);
}
