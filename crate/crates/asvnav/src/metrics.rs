//! Cross-track scoring and the baseline-versus-augmented comparison table.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::augment::IntermediateTarget;
use crate::control::Waypoint;
use crate::effects::ForceSample;
use crate::error::ScoreError;
use crate::geo::{EnuVector, LocalFrame};
use crate::vehicle::{ActuatorCommand, AsvState};

pub const OVER_THRESHOLD_M: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub state: AsvState,
    /// Active true waypoint.
    pub wp_index: usize,
    pub intermediate: Option<IntermediateTarget>,
    pub force: ForceSample,
    pub cmd: ActuatorCommand,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryLog {
    pub records: Vec<TrajectoryRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossTrackSample {
    pub t: f64,
    pub leg: usize,
    /// Positive to the right of the direction of travel.
    pub signed: f64,
    pub pos: EnuVector,
}

impl CrossTrackSample {
    pub fn error(&self) -> f64 {
        self.signed.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorReport {
    pub max_error: f64,
    pub pct_over_1m: f64,
    /// Sign changes between excursions beyond ±1 m.
    pub sign_changes: usize,
    pub arc_length: f64,
    pub samples: usize,
}

/// Distance from each sample to the infinite line of its leg. Leg `i` runs
/// from waypoint `i` to `i + 1` and is active while waypoint `i + 1` is the
/// target. Samples before the vehicle first comes within twice the
/// acceptance radius of the first leg's start are dropped.
pub fn cross_track_series(
    log: &TrajectoryLog,
    mission: &[Waypoint],
    acceptance_radius: f64,
) -> Result<Vec<CrossTrackSample>, ScoreError> {
    let Some(first) = mission.first() else {
        return Ok(Vec::new());
    };
    let frame = LocalFrame::new(first.pos);
    let pts: Vec<EnuVector> = mission.iter().map(|w| frame.to_enu(w.pos)).collect();
    for i in 1..pts.len() {
        if (pts[i] - pts[i - 1]).norm() == 0.0 {
            return Err(ScoreError::DegenerateLeg(i - 1));
        }
    }
    let mut acquired = false;
    let mut out = Vec::new();
    for r in &log.records {
        if r.wp_index == 0 || r.wp_index >= pts.len() {
            continue;
        }
        let leg = r.wp_index - 1;
        let p = frame.to_enu(r.state.pos);
        if !acquired {
            if leg == 0 && (p - pts[0]).norm() > 2.0 * acceptance_radius {
                continue;
            }
            acquired = true;
        }
        let (a, b) = (pts[leg], pts[leg + 1]);
        let u = (b - a).scale(1.0 / (b - a).norm());
        out.push(CrossTrackSample { t: r.t, leg, signed: (p - a).cross(u), pos: p });
    }
    Ok(out)
}

/// Max error and arc-length-weighted share of the path beyond 1 m. A path
/// segment counts half when only one of its end samples is over the line.
pub fn score(errors: &[f64], positions: &[EnuVector]) -> Result<ErrorReport, ScoreError> {
    if errors.is_empty() || errors.len() != positions.len() {
        return Err(ScoreError::Empty);
    }
    let max_error = errors.iter().fold(0.0f64, |m, e| m.max(*e));
    let mut total = 0.0;
    let mut over = 0.0;
    for i in 1..errors.len() {
        let ds = (positions[i] - positions[i - 1]).norm();
        total += ds;
        let w = (f64::from(u8::from(errors[i] > OVER_THRESHOLD_M)) + f64::from(u8::from(errors[i - 1] > OVER_THRESHOLD_M))) / 2.0;
        over += w * ds;
    }
    let pct_over_1m = if total > 0.0 {
        100.0 * over / total
    } else if errors[0] > OVER_THRESHOLD_M {
        100.0
    } else {
        0.0
    };
    Ok(ErrorReport { max_error, pct_over_1m, sign_changes: 0, arc_length: total, samples: errors.len() })
}

/// Count sign flips between successive excursions beyond ±`threshold`.
pub fn sign_changes(signed: &[f64], threshold: f64) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for &e in signed {
        if e.abs() > threshold {
            let s = if e > 0.0 { 1 } else { -1 };
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

pub fn score_samples(samples: &[CrossTrackSample]) -> Result<ErrorReport, ScoreError> {
    let errors: Vec<f64> = samples.iter().map(|s| s.error()).collect();
    let pos: Vec<EnuVector> = samples.iter().map(|s| s.pos).collect();
    let mut r = score(&errors, &pos)?;
    let signed: Vec<f64> = samples.iter().map(|s| s.signed).collect();
    r.sign_changes = sign_changes(&signed, OVER_THRESHOLD_M);
    Ok(r)
}

/// One report per leg that has samples.
pub fn score_legs(samples: &[CrossTrackSample]) -> Result<Vec<(usize, ErrorReport)>, ScoreError> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < samples.len() {
        let leg = samples[start].leg;
        let end = samples[start..].iter().position(|s| s.leg != leg).map_or(samples.len(), |k| start + k);
        out.push((leg, score_samples(&samples[start..end])?));
        start = end;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Controller {
    Baseline,
    Augmented,
}

impl Controller {
    pub fn name(self) -> &'static str {
        match self {
            Controller::Baseline => "baseline",
            Controller::Augmented => "augmented",
        }
    }
}

/// Leg bearing relative to the current, 0 = travelling with it.
pub const ORIENTATIONS: [u32; 8] = [0, 45, 90, 135, 180, 225, 270, 315];

/// Column name and the orientations averaged into it. Facing downstream,
/// "L-R" legs cross from the left bank to the right bank.
pub const TABLE_COLUMNS: [(&str, &[u32]); 7] = [
    ("Perpendicular", &[90, 270]),
    ("Parallel With", &[0]),
    ("Parallel Against", &[180]),
    ("L-R Diagonal With", &[45]),
    ("L-R Diagonal Against", &[135]),
    ("R-L Diagonal With", &[315]),
    ("R-L Diagonal Against", &[225]),
];

pub fn column_label(orientation: u32) -> &'static str {
    match orientation {
        0 => "parallel_with",
        45 => "lr_diagonal_with",
        90 => "perpendicular_right",
        135 => "lr_diagonal_against",
        180 => "parallel_against",
        225 => "rl_diagonal_against",
        270 => "perpendicular_left",
        315 => "rl_diagonal_with",
        _ => "custom",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub controller: Controller,
    pub orientation: u32,
    pub report: ErrorReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ColumnStats {
    pub max_error: f64,
    pub pct_over_1m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableColumn {
    pub name: String,
    pub baseline: ColumnStats,
    pub augmented: ColumnStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub columns: Vec<TableColumn>,
}

pub fn table_report(cells: &[TableCell]) -> Result<ComparisonTable, ScoreError> {
    let find = |c: Controller, o: u32| cells.iter().find(|x| x.controller == c && x.orientation == o);
    let mut missing = Vec::new();
    for c in [Controller::Baseline, Controller::Augmented] {
        for o in ORIENTATIONS {
            if find(c, o).is_none() {
                missing.push(format!("{}@{}", c.name(), o));
            }
        }
    }
    if !missing.is_empty() {
        return Err(ScoreError::MissingCells(missing.join(", ")));
    }
    let mean = |c: Controller, os: &[u32]| {
        let n = os.len() as f64;
        let (m, p) = os.iter().map(|o| find(c, *o).unwrap().report).fold((0.0, 0.0), |(m, p), r| {
            (m + r.max_error, p + r.pct_over_1m)
        });
        ColumnStats { max_error: m / n, pct_over_1m: p / n }
    };
    let columns = TABLE_COLUMNS
        .iter()
        .map(|(name, os)| TableColumn {
            name: name.to_string(),
            baseline: mean(Controller::Baseline, os),
            augmented: mean(Controller::Augmented, os),
        })
        .collect();
    Ok(ComparisonTable { columns })
}

impl ComparisonTable {
    fn rows(&self) -> Vec<(&'static str, &'static str, Vec<f64>)> {
        let pick = |f: fn(&TableColumn) -> f64| self.columns.iter().map(f).collect::<Vec<_>>();
        vec![
            ("baseline", "max_error_m", pick(|c| c.baseline.max_error)),
            ("baseline", "pct_over_1m", pick(|c| c.baseline.pct_over_1m)),
            ("augmented", "max_error_m", pick(|c| c.augmented.max_error)),
            ("augmented", "pct_over_1m", pick(|c| c.augmented.pct_over_1m)),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("controller,metric");
        for c in &self.columns {
            s.push(',');
            s.push_str(&c.name);
        }
        s.push('\n');
        for (ctl, metric, vals) in self.rows() {
            s.push_str(ctl);
            s.push(',');
            s.push_str(metric);
            for v in vals {
                let _ = write!(s, ",{v:.4}");
            }
            s.push('\n');
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# % path error > 1 m is weighted by arc length; Perpendicular averages both crossing directions\n");
        let w0 = 24;
        let _ = write!(s, "{:<w0$}", "");
        for c in &self.columns {
            let _ = write!(s, " {:>21}", c.name);
        }
        s.push('\n');
        for (ctl, metric, vals) in self.rows() {
            let label = format!("{} {}", ctl, if metric == "max_error_m" { "max error (m)" } else { "% > 1 m" });
            let _ = write!(s, "{label:<w0$}");
            for v in vals {
                let cell = if metric == "max_error_m" { format!("{v:.2}") } else { format!("{v:.1}") };
                let _ = write!(s, " {cell:>21}");
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn straight(n: usize, step: f64) -> Vec<EnuVector> {
        (0..n).map(|i| EnuVector::new(0.0, i as f64 * step)).collect()
    }

    #[test]
    fn zero_series() {
        let r = score(&[0.0; 5], &straight(5, 1.0)).unwrap();
        assert_eq!((r.max_error, r.pct_over_1m), (0.0, 0.0));
    }

    #[test]
    fn constant_offset() {
        let r = score(&[3.0; 50], &straight(50, 1.0)).unwrap();
        assert_eq!((r.max_error, r.pct_over_1m), (3.0, 100.0));
    }

    #[test]
    fn half_and_half() {
        let e: Vec<f64> = (0..100).map(|i| if i < 50 { 0.5 } else { 1.5 }).collect();
        let r = score(&e, &straight(100, 1.0)).unwrap();
        assert_eq!(r.max_error, 1.5);
        assert!((r.pct_over_1m - 50.0).abs() < 1e-9);
    }

    #[test]
    fn sign_change_counting() {
        assert_eq!(sign_changes(&[0.0, 1.5, 0.2, -1.2, -0.5, 2.0, 0.9], 1.0), 2);
        assert_eq!(sign_changes(&[0.9, -0.9, 0.8], 1.0), 0);
    }

    #[test]
    fn empty_is_error() {
        assert_eq!(score(&[], &[]), Err(ScoreError::Empty));
    }

    #[test]
    fn missing_cells_listed() {
        let cells = vec![TableCell { controller: Controller::Baseline, orientation: 0, report: ErrorReport::default() }];
        match table_report(&cells) {
            Err(ScoreError::MissingCells(m)) => assert!(m.contains("augmented@315") && !m.contains("baseline@0,")),
            other => panic!("{other:?}"),
        }
    }
}
