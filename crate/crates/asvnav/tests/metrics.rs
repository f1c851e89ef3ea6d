use asvnav::control::Waypoint;
use asvnav::effects::ForceSample;
use asvnav::geo::{EnuVector, GeoPoint, LocalFrame};
use asvnav::metrics::{
    cross_track_series, score, score_samples, sign_changes, table_report, Controller, ErrorReport, TableCell,
    TrajectoryLog, TrajectoryRecord, ORIENTATIONS,
};
use asvnav::vehicle::{ActuatorCommand, AsvState};
use proptest::prelude::*;

fn frame() -> LocalFrame {
    LocalFrame::new(GeoPoint::new(34.0, -81.0).unwrap())
}

fn north_leg() -> Vec<Waypoint> {
    let f = frame();
    vec![
        Waypoint { pos: f.origin, spd_target: 1.0 },
        Waypoint { pos: f.to_geo(EnuVector::new(0.0, 200.0)).unwrap(), spd_target: 1.0 },
    ]
}

fn log_of(points: &[EnuVector]) -> TrajectoryLog {
    let f = frame();
    TrajectoryLog {
        records: points
            .iter()
            .enumerate()
            .map(|(i, p)| TrajectoryRecord {
                t: i as f64 * 0.1,
                state: AsvState::new(f.to_geo(*p).unwrap(), 0.0, 1.0),
                wp_index: 1,
                intermediate: None,
                force: ForceSample::default(),
                cmd: ActuatorCommand::default(),
            })
            .collect(),
    }
}

#[test]
fn on_line_track_scores_zero() {
    let pts: Vec<_> = (0..=200).map(|i| EnuVector::new(0.0, i as f64)).collect();
    let s = cross_track_series(&log_of(&pts), &north_leg(), 2.0).unwrap();
    assert_eq!(s.len(), 201);
    assert!(s.iter().all(|x| x.error() < 1e-9));
}

#[test]
fn constant_east_offset_is_positive_right() {
    let pts: Vec<_> = (0..=200).map(|i| EnuVector::new(3.0, i as f64)).collect();
    let s = cross_track_series(&log_of(&pts), &north_leg(), 2.0).unwrap();
    assert!(s.iter().all(|x| (x.signed - 3.0).abs() < 1e-9));
}

#[test]
fn sinusoid_peak_recovered() {
    let pts: Vec<_> = (0..=2000).map(|i| {
        let n = i as f64 * 0.1;
        EnuVector::new(2.0 * (n / 15.0).sin(), n)
    }).collect();
    let r = score_samples(&cross_track_series(&log_of(&pts), &north_leg(), 2.0).unwrap()).unwrap();
    assert!((r.max_error - 2.0).abs() < 0.01);
    assert!(r.sign_changes >= 3);
}

#[test]
fn approach_is_excluded_until_acquired() {
    let mut pts: Vec<_> = (0..50).map(|i| EnuVector::new(30.0 - i as f64 * 0.4, -20.0 + i as f64 * 0.2)).collect();
    pts.extend((0..=100).map(|i| EnuVector::new(0.5, i as f64)));
    let s = cross_track_series(&log_of(&pts), &north_leg(), 2.0).unwrap();
    assert_eq!(s.len(), 101);
    assert!(s.iter().all(|x| (x.signed - 0.5).abs() < 1e-9));
}

#[test]
fn degenerate_leg_is_an_error() {
    let m = vec![north_leg()[0], north_leg()[0]];
    assert!(cross_track_series(&log_of(&[EnuVector::default()]), &m, 2.0).is_err());
}

#[test]
fn score_examples() {
    let line: Vec<_> = (0..10).map(|i| EnuVector::new(0.0, i as f64)).collect();
    let z = score(&[0.0; 10], &line).unwrap();
    assert_eq!((z.max_error, z.pct_over_1m), (0.0, 0.0));
    let c = score(&[3.0; 10], &line).unwrap();
    assert_eq!((c.max_error, c.pct_over_1m), (3.0, 100.0));
    assert!(score(&[], &[]).is_err());
}

#[test]
fn sign_changes_need_excursions() {
    assert_eq!(sign_changes(&[0.5, -0.5, 0.9, -0.9], 1.0), 0);
    assert_eq!(sign_changes(&[1.5, 0.0, -1.5, 0.2, 1.2, -3.0], 1.0), 3);
}

fn cell(c: Controller, o: u32, m: f64, p: f64) -> TableCell {
    TableCell { controller: c, orientation: o, report: ErrorReport { max_error: m, pct_over_1m: p, ..Default::default() } }
}

#[test]
fn table_layout_and_perpendicular_mean() {
    let mut cells = Vec::new();
    for o in ORIENTATIONS {
        let (bm, bp) = match o {
            0 => (9.32, 76.8),
            90 => (4.0, 20.0),
            270 => (5.0, 30.0),
            _ => (1.0, 1.0),
        };
        cells.push(cell(Controller::Baseline, o, bm, bp));
        cells.push(cell(Controller::Augmented, o, if o == 0 { 1.48 } else { 0.5 }, if o == 0 { 11.9 } else { 0.0 }));
    }
    let t = table_report(&cells).unwrap();
    let names: Vec<&str> = t.columns.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(
        names,
        [
            "Perpendicular",
            "Parallel With",
            "Parallel Against",
            "L-R Diagonal With",
            "L-R Diagonal Against",
            "R-L Diagonal With",
            "R-L Diagonal Against"
        ]
    );
    assert_eq!(t.columns[0].baseline.max_error, 4.5);
    assert_eq!(t.columns[0].baseline.pct_over_1m, 25.0);
    let csv = t.to_csv();
    assert!(csv.starts_with("controller,metric,Perpendicular,Parallel With,"));
    assert!(csv.contains("baseline,max_error_m,4.5000,9.3200,"));
    assert!(csv.contains("augmented,pct_over_1m,0.0000,11.9000,"));
    let text = t.to_text();
    assert!(text.contains("9.32") && text.contains("76.8") && text.contains("1.48") && text.contains("11.9"));
}

#[test]
fn identical_inputs_give_identical_columns() {
    let cells: Vec<_> = ORIENTATIONS
        .iter()
        .flat_map(|&o| [Controller::Baseline, Controller::Augmented].map(|c| cell(c, o, o as f64 / 10.0, 3.0)))
        .collect();
    let t = table_report(&cells).unwrap();
    assert!(t.columns.iter().all(|c| c.baseline == c.augmented));
}

#[test]
fn missing_cells_are_listed() {
    let cells: Vec<_> = ORIENTATIONS.iter().map(|&o| cell(Controller::Baseline, o, 1.0, 1.0)).collect();
    let e = table_report(&cells).unwrap_err().to_string();
    assert!(e.contains("augmented@0") && e.contains("augmented@315"), "{e}");
}

proptest! {
    #[test]
    fn pct_within_bounds_and_max_monotone(errs in prop::collection::vec(0.0..5.0f64, 2..200), bump in 0.0..2.0f64) {
        let pos: Vec<_> = (0..errs.len()).map(|i| EnuVector::new(0.0, i as f64)).collect();
        let r = score(&errs, &pos).unwrap();
        prop_assert!((0.0..=100.0).contains(&r.pct_over_1m));
        prop_assert!(errs.iter().all(|e| *e <= r.max_error));
        let bigger: Vec<f64> = errs.iter().map(|e| e + bump).collect();
        prop_assert!(score(&bigger, &pos).unwrap().max_error >= r.max_error);
    }
}
