//! On-disk formats: mission CSV, trajectory log CSV, per-sample error CSV,
//! training CSV, and JSON helpers.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::augment::IntermediateTarget;
use crate::control::Waypoint;
use crate::effects::{ForceSample, TrainingSample};
use crate::error::{Error, Result};
use crate::geo::GeoPoint;
use crate::metrics::{CrossTrackSample, ErrorReport, TrajectoryLog, TrajectoryRecord};
use crate::vehicle::{ActuatorCommand, AsvState};

pub const MISSION_HEADER: &str = "lat,lon,speed_mps";
pub const LOG_HEADER: &str =
    "t,lat,lon,spd_t,h_t,wp_index,int_lat,int_lon,int_spd,spd_c,dir_c,spd_w,dir_w,thrust,rudder";
pub const ERRORS_HEADER: &str = "t,leg,signed_error_m,error_m,east_m,north_m";

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

fn csv_err(path: &Path, source: csv::Error) -> Error {
    Error::Csv { path: path.display().to_string(), source }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

pub fn write_text(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    fs::write(path, body).map_err(|e| io_err(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|source| Error::Json { path: path.display().to_string(), source })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut body = serde_json::to_string_pretty(value).expect("config serializes");
    body.push('\n');
    write_text(path, &body)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MissionRow {
    pub lat: f64,
    pub lon: f64,
    pub speed_mps: f64,
}

impl From<&Waypoint> for MissionRow {
    fn from(w: &Waypoint) -> Self {
        MissionRow { lat: w.pos.lat, lon: w.pos.lon, speed_mps: w.spd_target }
    }
}

impl MissionRow {
    pub fn to_waypoint(&self, max_water_speed: f64) -> Result<Waypoint> {
        let pos = GeoPoint::new(self.lat, self.lon)?;
        if !(self.speed_mps > 0.0 && self.speed_mps <= max_water_speed) {
            return Err(Error::Config(format!(
                "waypoint speed {} outside (0, {max_water_speed}]",
                self.speed_mps
            )));
        }
        Ok(Waypoint { pos, spd_target: self.speed_mps })
    }
}

pub fn mission_csv(rows: &[MissionRow]) -> String {
    let mut s = format!("{MISSION_HEADER}\n");
    for r in rows {
        s.push_str(&format!("{},{},{}\n", r.lat, r.lon, r.speed_mps));
    }
    s
}

pub fn read_mission(path: &Path) -> Result<Vec<MissionRow>> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = rd.headers().map_err(|e| csv_err(path, e))?.iter().collect::<Vec<_>>().join(",");
    if header != MISSION_HEADER {
        return Err(Error::Config(format!("{}: expected header `{MISSION_HEADER}`", path.display())));
    }
    rd.deserialize().collect::<std::result::Result<Vec<MissionRow>, _>>().map_err(|e| csv_err(path, e))
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

pub fn log_csv(log: &TrajectoryLog) -> String {
    let mut s = String::with_capacity(log.records.len() * 160);
    s.push_str(LOG_HEADER);
    s.push('\n');
    for r in &log.records {
        let st = &r.state;
        let it = r.intermediate;
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.t,
            st.pos.lat,
            st.pos.lon,
            st.spd_t,
            st.h_t,
            r.wp_index,
            opt(it.map(|i| i.pos.lat)),
            opt(it.map(|i| i.pos.lon)),
            opt(it.map(|i| i.spd)),
            r.force.spd_c,
            r.force.dir_c,
            r.force.spd_w,
            r.force.dir_w,
            r.cmd.thrust,
            r.cmd.rudder,
        ));
    }
    s
}

#[derive(Debug, Deserialize)]
struct LogRow {
    t: f64,
    lat: f64,
    lon: f64,
    spd_t: f64,
    h_t: f64,
    wp_index: usize,
    int_lat: Option<f64>,
    int_lon: Option<f64>,
    int_spd: Option<f64>,
    spd_c: f64,
    dir_c: f64,
    spd_w: f64,
    dir_w: f64,
    thrust: f64,
    rudder: f64,
}

/// Reads a trajectory log. Hull-internal state that the log does not carry
/// (compass heading, yaw rate, water speed) is left at neutral values.
pub fn read_log(path: &Path) -> Result<TrajectoryLog> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = rd.headers().map_err(|e| csv_err(path, e))?.iter().collect::<Vec<_>>().join(",");
    if header != LOG_HEADER {
        return Err(Error::Config(format!("{}: unexpected trajectory header", path.display())));
    }
    let mut records = Vec::new();
    for row in rd.deserialize::<LogRow>() {
        let r = row.map_err(|e| csv_err(path, e))?;
        let pos = GeoPoint::new(r.lat, r.lon)?;
        let mut state = AsvState::new(pos, r.h_t, 0.0);
        state.spd_t = r.spd_t;
        state.t = r.t;
        let intermediate = match (r.int_lat, r.int_lon, r.int_spd) {
            (Some(lat), Some(lon), Some(spd)) => Some(IntermediateTarget { pos: GeoPoint::new(lat, lon)?, spd }),
            _ => None,
        };
        records.push(TrajectoryRecord {
            t: r.t,
            state,
            wp_index: r.wp_index,
            intermediate,
            force: ForceSample { spd_c: r.spd_c, dir_c: r.dir_c, spd_w: r.spd_w, dir_w: r.dir_w },
            cmd: ActuatorCommand { thrust: r.thrust, rudder: r.rudder },
        });
    }
    Ok(TrajectoryLog { records })
}

pub fn errors_csv(samples: &[CrossTrackSample]) -> String {
    let mut s = format!("{ERRORS_HEADER}\n");
    for c in samples {
        s.push_str(&format!("{},{},{},{},{},{}\n", c.t, c.leg, c.signed, c.error(), c.pos.east, c.pos.north));
    }
    s
}

pub const REPORT_HEADER: &str = "scope,leg,max_error_m,pct_over_1m,sign_changes,arc_length_m,samples,complete";

pub fn report_csv(aggregate: Option<&ErrorReport>, legs: &[(usize, ErrorReport)], complete: bool) -> String {
    let mut s = format!("{REPORT_HEADER}\n");
    let line = |scope: &str, leg: String, r: &ErrorReport| {
        format!(
            "{scope},{leg},{:.4},{:.4},{},{:.4},{},{complete}\n",
            r.max_error, r.pct_over_1m, r.sign_changes, r.arc_length, r.samples
        )
    };
    for (leg, r) in legs {
        s.push_str(&line("leg", leg.to_string(), r));
    }
    match aggregate {
        Some(r) => s.push_str(&line("all", String::new(), r)),
        None => s.push_str(&format!("all,,,,,,0,{complete}\n")),
    }
    s
}

pub fn report_text(name: &str, aggregate: Option<&ErrorReport>, complete: bool) -> String {
    let status = if complete { "complete" } else { "INCOMPLETE" };
    match aggregate {
        Some(r) => format!(
            "run {name}: {status}\n  max cross-track error  {:>8.2} m\n  path beyond 1 m        {:>8.1} %\n  sign changes (>1 m)    {:>8}\n  scored arc length      {:>8.1} m\n",
            r.max_error, r.pct_over_1m, r.sign_changes, r.arc_length
        ),
        None => format!("run {name}: {status}\n  no scored samples\n"),
    }
}

pub fn training_csv(samples: &[TrainingSample]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for s in samples {
        w.serialize(s).map_err(|e| csv_err(Path::new("<training>"), e))?;
    }
    if samples.is_empty() {
        w.write_record([
            "current_east",
            "current_north",
            "wind_east",
            "wind_north",
            "commanded_speed",
            "heading_east",
            "heading_north",
            "drift_east",
            "drift_north",
            "deficit",
        ])
        .map_err(|e| csv_err(Path::new("<training>"), e))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn read_training(path: &Path) -> Result<Vec<TrainingSample>> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    rd.deserialize().collect::<std::result::Result<Vec<TrainingSample>, _>>().map_err(|e| csv_err(path, e))
}
