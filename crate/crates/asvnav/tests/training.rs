use asvnav::effects::fit;
use asvnav::env::ForceVector;
use asvnav::geo::GeoPoint;
use asvnav::harness::io;
use asvnav::harness::training::{generate_training_logs, SweepSpec};
use asvnav::harness::Scenario;

fn sweep(currents: Vec<ForceVector>, winds: Vec<ForceVector>, duration: f64) -> SweepSpec {
    SweepSpec {
        name: "t".into(),
        origin: GeoPoint::new(34.0, -81.0).unwrap(),
        headings: (0..8).map(|i| i as f64 * 45.0).collect(),
        speeds: vec![1.0, 1.5, 2.5],
        currents,
        winds,
        duration,
        open_loop: true,
        closed_loop: false,
        leg_length: 200.0,
        template: None,
        template_file: None,
    }
}

fn cur(speed: f64, dir: f64) -> ForceVector {
    ForceVector::new(speed, dir)
}

#[test]
fn grid_counts_runs_and_samples() {
    let spec = sweep(
        vec![cur(0.0, 0.0), cur(0.3, 180.0), cur(0.677, 180.0), cur(1.0, 200.0), cur(0.5, 90.0)],
        vec![ForceVector::default()],
        10.0,
    );
    let tpl = Scenario::new("tpl", vec![]);
    let (runs, samples) = generate_training_logs(&spec, &tpl).unwrap();
    assert_eq!(runs, 120);
    assert!(samples.len() >= 120 * (10.0 / tpl.dt) as usize);
}

#[test]
fn calm_sweep_has_no_drift() {
    let spec = sweep(vec![ForceVector::default()], vec![ForceVector::default()], 5.0);
    let (_, samples) = generate_training_logs(&spec, &Scenario::new("tpl", vec![])).unwrap();
    assert!(samples.iter().all(|s| s.drift_east == 0.0 && s.drift_north == 0.0 && s.deficit == 0.0));
}

#[test]
fn fit_recovers_wind_drag_end_to_end() {
    let spec = sweep(vec![cur(0.0, 0.0), cur(0.677, 180.0), cur(0.5, 90.0)], vec![cur(0.0, 0.0), cur(6.0, 45.0), cur(9.0, 300.0)], 10.0);
    let mut tpl = Scenario::new("tpl", vec![]);
    tpl.noise.sigma_speed = 0.05;
    let (_, samples) = generate_training_logs(&spec, &tpl).unwrap();
    let m = fit(&samples, false).unwrap();
    assert!((m.coefficients[0][2] - 0.03).abs() < 0.01);
    assert!((m.coefficients[1][3] - 0.03).abs() < 0.01);
}

#[test]
fn closed_loop_runs_add_samples_and_repeat() {
    let mut spec = sweep(vec![cur(0.5, 180.0)], vec![ForceVector::default()], 5.0);
    spec.headings = vec![0.0, 90.0];
    spec.speeds = vec![1.5];
    spec.closed_loop = true;
    let tpl = Scenario::new("tpl", vec![]);
    let (runs, a) = generate_training_logs(&spec, &tpl).unwrap();
    assert_eq!(runs, 4);
    let (_, b) = generate_training_logs(&spec, &tpl).unwrap();
    assert_eq!(a, b);
    assert!(a.len() > 4 * 50);
}

#[test]
fn training_csv_round_trips() {
    let spec = sweep(vec![cur(0.5, 90.0)], vec![cur(6.0, 10.0)], 2.0);
    let (_, samples) = generate_training_logs(&spec, &Scenario::new("tpl", vec![])).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("training.csv");
    io::write_text(&p, &io::training_csv(&samples).unwrap()).unwrap();
    assert_eq!(io::read_training(&p).unwrap(), samples);
}

#[test]
fn empty_grid_is_rejected() {
    let spec = sweep(vec![], vec![ForceVector::default()], 5.0);
    assert!(generate_training_logs(&spec, &Scenario::new("tpl", vec![])).is_err());
}
