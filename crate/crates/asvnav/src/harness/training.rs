//! Training-data sweeps: fly a grid of headings, speeds, currents and winds
//! and record what the sensors saw next to the drift that actually acted.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::io::{self, MissionRow};
use super::{run_scenario, ControllerSpec, Scenario, StartSpec};
use crate::effects::{ForceSample, TrainingSample};
use crate::env::{Environment, FieldSpec, ForceVector};
use crate::error::{Error, Result};
use crate::geo::{displacement, offset_point, EnuVector, GeoPoint};
use crate::vehicle::{drift_at, relative_to_absolute, sense, step, ActuatorCommand, AsvState};

fn default_duration() -> f64 {
    60.0
}
fn default_true() -> bool {
    true
}
fn default_winds() -> Vec<ForceVector> {
    vec![ForceVector::default()]
}
fn default_leg() -> f64 {
    200.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub name: String,
    pub origin: GeoPoint,
    pub headings: Vec<f64>,
    pub speeds: Vec<f64>,
    pub currents: Vec<ForceVector>,
    #[serde(default = "default_winds")]
    pub winds: Vec<ForceVector>,
    /// Length of each open-loop run, s.
    #[serde(default = "default_duration")]
    pub duration: f64,
    #[serde(default = "default_true")]
    pub open_loop: bool,
    #[serde(default)]
    pub closed_loop: bool,
    #[serde(default = "default_leg")]
    pub leg_length: f64,
    /// Vehicle, noise, gains, dt and seed come from here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRun {
    pub heading: f64,
    pub speed: f64,
    pub current: ForceVector,
    pub wind: ForceVector,
    pub closed_loop: bool,
}

impl SweepSpec {
    pub fn load(path: &Path) -> Result<(Self, Scenario)> {
        let spec: SweepSpec = io::read_json(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let v = match (&spec.template, &spec.template_file) {
            (Some(t), None) => t.clone(),
            (None, Some(f)) => io::read_json(&base.join(f))?,
            (None, None) => Value::Object(Default::default()),
            (Some(_), Some(_)) => return Err(Error::Config("give either `template` or `template_file`".into())),
        };
        let sc: Scenario = serde_json::from_value(v)
            .map_err(|source| Error::Json { path: path.display().to_string(), source })?;
        Ok((spec, sc))
    }

    pub fn runs(&self) -> Vec<SweepRun> {
        let mut out = Vec::new();
        for &current in &self.currents {
            for &wind in &self.winds {
                for &heading in &self.headings {
                    for &speed in &self.speeds {
                        for closed_loop in [false, true] {
                            if (closed_loop && self.closed_loop) || (!closed_loop && self.open_loop) {
                                out.push(SweepRun { heading, speed, current, wind, closed_loop });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

fn sample_row(f: &ForceSample, commanded: f64, dir: EnuVector, drift: EnuVector) -> TrainingSample {
    let c = f.current();
    let w = f.wind();
    TrainingSample {
        current_east: c.east,
        current_north: c.north,
        wind_east: w.east,
        wind_north: w.north,
        commanded_speed: commanded,
        heading_east: dir.east,
        heading_north: dir.north,
        drift_east: drift.east,
        drift_north: drift.north,
        deficit: -drift.dot(dir),
    }
}

fn fields(run: &SweepRun) -> (FieldSpec, FieldSpec) {
    (
        FieldSpec::uniform(run.current.speed, run.current.direction),
        FieldSpec::uniform(run.wind.speed, run.wind.direction),
    )
}

fn open_loop(spec: &SweepSpec, tpl: &Scenario, run: &SweepRun, seed: u64) -> Result<Vec<TrainingSample>> {
    let (current, wind) = fields(run);
    let env = Environment::new(spec.origin, current, wind);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = AsvState::new(spec.origin, run.heading, run.speed);
    let cmd = ActuatorCommand::new(run.speed / tpl.vehicle.max_water_speed, 0.0);
    let steps = (spec.duration / tpl.dt).round() as usize;
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let f = relative_to_absolute(&sense(&s, &env, &tpl.noise, &mut rng)?, &s);
        let drift = drift_at(&env, s.pos, s.t, &tpl.vehicle)?;
        out.push(sample_row(&f, run.speed, EnuVector::from_polar(1.0, s.heading), drift));
        s = step(&s, cmd, &env, &tpl.vehicle, tpl.dt)?;
    }
    Ok(out)
}

fn closed_loop(spec: &SweepSpec, tpl: &Scenario, run: &SweepRun, seed: u64) -> Result<Vec<TrainingSample>> {
    let (current, wind) = fields(run);
    let end = offset_point(spec.origin, EnuVector::from_polar(spec.leg_length, run.heading))?;
    let mut sc = tpl.clone();
    sc.mission = vec![
        MissionRow { lat: spec.origin.lat, lon: spec.origin.lon, speed_mps: run.speed },
        MissionRow { lat: end.lat, lon: end.lon, speed_mps: run.speed },
    ];
    sc.mission_file = None;
    sc.start = Some(StartSpec { lat: spec.origin.lat, lon: spec.origin.lon, heading: run.heading, speed: run.speed });
    sc.current = current.clone();
    sc.wind = wind.clone();
    sc.controller = ControllerSpec::Baseline;
    sc.seed = seed;
    let waypoints = sc.waypoints()?;
    let out = run_scenario(&sc)?;
    let env = Environment::new(waypoints[0].pos, current, wind);
    let mut rows = Vec::with_capacity(out.log.records.len());
    for r in &out.log.records {
        let Some(goal) = waypoints.get(r.wp_index) else { continue };
        let dir = EnuVector::from_polar(1.0, displacement(r.state.pos, goal.pos).bearing());
        let drift = drift_at(&env, r.state.pos, r.t, &sc.vehicle)?;
        rows.push(sample_row(&r.force, goal.spd_target, dir, drift));
    }
    Ok(rows)
}

/// Every run in the sweep, in grid order. Run `i` uses seed `template.seed + i`.
pub fn generate_training_logs(spec: &SweepSpec, template: &Scenario) -> Result<(usize, Vec<TrainingSample>)> {
    if spec.headings.is_empty() || spec.speeds.is_empty() || spec.currents.is_empty() || spec.winds.is_empty() {
        return Err(Error::Config("sweep grid is empty".into()));
    }
    template.vehicle.validate()?;
    if !(template.dt > 0.0 && template.dt <= 0.5) {
        return Err(Error::Config(format!("dt {} outside (0, 0.5]", template.dt)));
    }
    let runs = spec.runs();
    let chunks = runs
        .par_iter()
        .enumerate()
        .map(|(i, run)| {
            let seed = template.seed.wrapping_add(i as u64);
            if run.closed_loop {
                closed_loop(spec, template, run, seed)
            } else {
                open_loop(spec, template, run, seed)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((runs.len(), chunks.into_iter().flatten().collect()))
}
