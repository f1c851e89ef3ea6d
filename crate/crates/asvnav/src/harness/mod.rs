//! Scenario files, the closed-loop simulation driver, and output writers.

pub mod io;
pub mod suite;
pub mod training;

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::augment::{augmented_navigator_step, AugmentConfig, AugmenterState};
use crate::control::{navigator_step, NavStatus, NavigatorGains, NavigatorState, Waypoint};
use crate::effects::EffectModel;
use crate::env::{Environment, FieldSpec};
use crate::error::{Error, Result};
use crate::geo::{distance_bearing, GeoPoint};
use crate::metrics::{
    cross_track_series, score_legs, score_samples, CrossTrackSample, ErrorReport, TrajectoryLog, TrajectoryRecord,
};
use crate::vehicle::{relative_to_absolute, sense, step, AsvState, NoiseSpec, VehicleParams};

use io::MissionRow;

pub const RESOLVED_SCENARIO: &str = "resolved_scenario.json";

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelSource {
    #[default]
    Oracle,
    Zero,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ControllerSpec {
    #[default]
    Baseline,
    Augmented {
        #[serde(default)]
        model: ModelSource,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StartSpec {
    pub lat: f64,
    pub lon: f64,
    pub heading: f64,
    /// Initial speed through the water.
    pub speed: f64,
}

fn default_name() -> String {
    "scenario".into()
}
fn default_duration() -> f64 {
    600.0
}
fn default_dt() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default)]
    pub mission: Vec<MissionRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mission_file: Option<PathBuf>,
    /// Defaults to the first waypoint, pointing at the second, at its target speed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<StartSpec>,
    #[serde(default = "FieldSpec::calm")]
    pub current: FieldSpec,
    #[serde(default = "FieldSpec::calm")]
    pub wind: FieldSpec,
    #[serde(default)]
    pub vehicle: VehicleParams,
    #[serde(default)]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub controller: ControllerSpec,
    #[serde(default)]
    pub gains: NavigatorGains,
    #[serde(default)]
    pub augment: AugmentConfig,
    #[serde(default = "default_duration")]
    pub duration_limit: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
}

impl Scenario {
    pub fn new(name: &str, mission: Vec<MissionRow>) -> Self {
        Scenario {
            name: name.into(),
            mission,
            mission_file: None,
            start: None,
            current: FieldSpec::calm(),
            wind: FieldSpec::calm(),
            vehicle: VehicleParams::default(),
            noise: NoiseSpec::NONE,
            seed: 0,
            controller: ControllerSpec::Baseline,
            gains: NavigatorGains::default(),
            augment: AugmentConfig::default(),
            duration_limit: default_duration(),
            dt: default_dt(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let sc: Scenario = io::read_json(path)?;
        sc.resolve(path.parent().unwrap_or(Path::new(".")))
    }

    /// Inline the mission file and anchor relative paths at `base`.
    pub fn resolve(mut self, base: &Path) -> Result<Self> {
        if let Some(f) = self.mission_file.take() {
            if !self.mission.is_empty() {
                return Err(Error::Config("give either `mission` or `mission_file`, not both".into()));
            }
            self.mission = io::read_mission(&base.join(f))?;
        }
        if let ControllerSpec::Augmented { model: ModelSource::File(p) } = &mut self.controller {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(self)
    }

    pub fn waypoints(&self) -> Result<Vec<Waypoint>> {
        self.mission.iter().map(|r| r.to_waypoint(self.vehicle.max_water_speed)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.mission.is_empty() {
            return Err(Error::Config("mission is empty".into()));
        }
        if !(self.dt > 0.0 && self.dt <= 0.5) {
            return Err(Error::Config(format!("dt {} outside (0, 0.5]", self.dt)));
        }
        if !(self.duration_limit > 0.0) {
            return Err(Error::Config("duration_limit must be positive".into()));
        }
        self.vehicle.validate()?;
        self.gains.validate().map_err(Error::Config)?;
        if matches!(self.controller, ControllerSpec::Augmented { .. }) {
            self.augment.validate(self.dt).map_err(Error::Config)?;
        }
        self.current.validate()?;
        self.wind.validate()?;
        if self.noise.sigma_speed < 0.0 || self.noise.sigma_dir < 0.0 {
            return Err(Error::Config("noise sigmas must be non-negative".into()));
        }
        Ok(())
    }

    pub fn load_model(&self) -> Result<Option<EffectModel>> {
        match &self.controller {
            ControllerSpec::Baseline => Ok(None),
            ControllerSpec::Augmented { model } => Ok(Some(match model {
                ModelSource::Oracle => EffectModel::oracle(self.vehicle.wind_drag_factor),
                ModelSource::Zero => EffectModel::zero(),
                ModelSource::File(p) => EffectModel::from_json(&io::read_text(p)?)?,
            })),
        }
    }

    fn initial_state(&self, mission: &[Waypoint]) -> Result<AsvState> {
        Ok(match self.start {
            Some(st) => AsvState::new(GeoPoint::new(st.lat, st.lon)?, st.heading, st.speed),
            None => {
                let heading = mission.get(1).map_or(0.0, |w| distance_bearing(mission[0].pos, w.pos).1);
                AsvState::new(mission[0].pos, heading, mission[0].spd_target)
            }
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub name: String,
    pub log: TrajectoryLog,
    pub series: Vec<CrossTrackSample>,
    pub report: Option<ErrorReport>,
    pub legs: Vec<(usize, ErrorReport)>,
    pub complete: bool,
}

/// Closed-loop simulation until the mission completes or time runs out.
pub fn run_scenario(sc: &Scenario) -> Result<RunOutcome> {
    sc.validate()?;
    let mission = sc.waypoints()?;
    let model = sc.load_model()?;
    let env = Environment::new(mission[0].pos, sc.current.clone(), sc.wind.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
    let mut s = sc.initial_state(&mission)?;
    let mut nav = NavigatorState::default();
    let mut aug = AugmenterState::default();
    let mut log = TrajectoryLog::default();
    let max_steps = (sc.duration_limit / sc.dt).ceil() as usize;
    let mut complete = false;

    for _ in 0..max_steps {
        let frame = sense(&s, &env, &sc.noise, &mut rng)?;
        let force = relative_to_absolute(&frame, &s);
        let (cmd, status, intermediate) = match &model {
            None => {
                let st = navigator_step(&s, &mission, &nav, &sc.gains, &sc.vehicle, sc.dt);
                nav = st.nav;
                (st.cmd, st.status, None)
            }
            Some(m) => {
                let st = augmented_navigator_step(
                    &s, &mission, &nav, &aug, m, &force, &sc.augment, &sc.gains, &sc.vehicle, sc.dt,
                )?;
                nav = st.nav;
                aug = st.aug;
                (st.cmd, st.status, st.aug.target)
            }
        };
        if status == NavStatus::MissionComplete {
            complete = true;
            break;
        }
        log.records.push(TrajectoryRecord { t: s.t, state: s, wp_index: nav.active_wp_index, intermediate, force, cmd });
        s = step(&s, cmd, &env, &sc.vehicle, sc.dt)?;
    }
    if !complete {
        // the last step may have carried the vehicle onto the final waypoint
        complete = crate::control::advance_mission(&s, &mission, &nav, sc.gains.acceptance_radius).active_wp_index
            >= mission.len();
    }

    let series = cross_track_series(&log, &mission, sc.gains.acceptance_radius)?;
    let (report, legs) = if series.is_empty() {
        (None, Vec::new())
    } else {
        (Some(score_samples(&series)?), score_legs(&series)?)
    };
    Ok(RunOutcome { name: sc.name.clone(), log, series, report, legs, complete })
}

/// Writes mission, log, errors, reports and the resolved configuration.
pub fn write_run(dir: &Path, sc: &Scenario, out: &RunOutcome) -> Result<()> {
    io::write_text(&dir.join("mission.csv"), &io::mission_csv(&sc.mission))?;
    io::write_text(&dir.join("trajectory.csv"), &io::log_csv(&out.log))?;
    write_scores(dir, out)?;
    io::write_json(&dir.join(RESOLVED_SCENARIO), sc)
}

fn write_scores(dir: &Path, out: &RunOutcome) -> Result<()> {
    io::write_text(&dir.join("errors.csv"), &io::errors_csv(&out.series))?;
    io::write_text(&dir.join("report.csv"), &io::report_csv(out.report.as_ref(), &out.legs, out.complete))?;
    io::write_text(&dir.join("report.txt"), &io::report_text(&out.name, out.report.as_ref(), out.complete))
}

/// Re-score a run directory written by [`write_run`].
pub fn rescore_run(dir: &Path) -> Result<RunOutcome> {
    let sc: Scenario = io::read_json(&dir.join(RESOLVED_SCENARIO))?;
    let mission = sc.waypoints()?;
    let log = io::read_log(&dir.join("trajectory.csv"))?;
    let report_csv = io::read_text(&dir.join("report.csv"))?;
    let complete = report_csv.lines().last().is_some_and(|l| l.ends_with(",true"));
    let series = cross_track_series(&log, &mission, sc.gains.acceptance_radius)?;
    let (report, legs) = if series.is_empty() {
        (None, Vec::new())
    } else {
        (Some(score_samples(&series)?), score_legs(&series)?)
    };
    let out = RunOutcome { name: sc.name.clone(), log, series, report, legs, complete };
    write_scores(dir, &out)?;
    Ok(out)
}
