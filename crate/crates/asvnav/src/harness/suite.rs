//! Eight-orientation comparison suite: straight legs at fixed angles to the
//! current, each flown by the baseline and the augmented controller.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::io::{self, MissionRow};
use super::{run_scenario, write_run, ControllerSpec, ModelSource, RunOutcome, Scenario, StartSpec};
use crate::error::{Error, Result};
use crate::geo::{offset_point, wrap_angle, EnuVector, GeoPoint};
use crate::metrics::{column_label, table_report, ComparisonTable, Controller, ErrorReport, TableCell, ORIENTATIONS};

pub const RESOLVED_SUITE: &str = "resolved_suite.json";

fn default_leg() -> f64 {
    200.0
}
fn default_approach() -> f64 {
    50.0
}
fn default_seed_angle() -> f64 {
    3.0
}
fn default_speed() -> f64 {
    1.5
}
fn default_orientations() -> Vec<u32> {
    ORIENTATIONS.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    #[serde(default = "suite_name")]
    pub name: String,
    pub center: GeoPoint,
    #[serde(default = "default_leg")]
    pub leg_length: f64,
    /// Bearing the current flows toward; orientations are measured from it.
    pub current_axis: f64,
    /// Run-up distance before the leg start, on the leg's extension.
    #[serde(default = "default_approach")]
    pub approach: f64,
    /// Initial hull heading offset from the leg bearing, degrees.
    #[serde(default = "default_seed_angle")]
    pub heading_seed: f64,
    #[serde(default = "default_speed")]
    pub spd_target: f64,
    #[serde(default = "default_orientations")]
    pub orientations: Vec<u32>,
    #[serde(default)]
    pub model: ModelSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overrides: Option<Value>,
}

fn suite_name() -> String {
    "suite".into()
}

fn merge(base: &mut Value, patch: &Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (b, p) => *b = p.clone(),
    }
}

impl SuiteSpec {
    pub fn load(path: &Path) -> Result<(Self, Scenario)> {
        let mut spec: SuiteSpec = io::read_json(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let ModelSource::File(p) = &mut spec.model {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        let tpl = spec.template_scenario(base)?;
        Ok((spec, tpl))
    }

    /// Template with overrides applied and relative paths anchored at `base`.
    pub fn template_scenario(&self, base: &Path) -> Result<Scenario> {
        let mut v = match (&self.template, &self.template_file) {
            (Some(_), Some(_)) => return Err(Error::Config("give either `template` or `template_file`".into())),
            (Some(t), None) => t.clone(),
            (None, Some(f)) => io::read_json(&base.join(f))?,
            (None, None) => Value::Object(Default::default()),
        };
        if let Some(o) = &self.overrides {
            merge(&mut v, o);
        }
        let sc: Scenario = serde_json::from_value(v)
            .map_err(|source| Error::Json { path: format!("suite {} template", self.name), source })?;
        sc.resolve(base)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.leg_length > 0.0 && self.approach >= 0.0) {
            return Err(Error::Config("leg_length must be positive and approach non-negative".into()));
        }
        if self.orientations.is_empty() {
            return Err(Error::Config("no orientations".into()));
        }
        Ok(())
    }

    /// Leg bearing for an orientation.
    pub fn leg_bearing(&self, orientation: u32) -> f64 {
        wrap_angle(self.current_axis + orientation as f64)
    }

    pub fn scenarios(&self, template: &Scenario) -> Result<Vec<(u32, Controller, Scenario)>> {
        self.validate()?;
        if template.gains.acceptance_radius * 20.0 > self.leg_length {
            return Err(Error::Config("leg_length must be at least 20 acceptance radii".into()));
        }
        let mut out = Vec::new();
        for &o in &self.orientations {
            let b = self.leg_bearing(o);
            let u = EnuVector::from_polar(1.0, b);
            let a = offset_point(self.center, u.scale(-self.leg_length / 2.0))?;
            let z = offset_point(self.center, u.scale(self.leg_length / 2.0))?;
            let st = offset_point(a, u.scale(-self.approach))?;
            let mission = vec![
                MissionRow { lat: a.lat, lon: a.lon, speed_mps: self.spd_target },
                MissionRow { lat: z.lat, lon: z.lon, speed_mps: self.spd_target },
            ];
            for c in [Controller::Baseline, Controller::Augmented] {
                let mut sc = template.clone();
                sc.name = format!("{}_{:03}_{}_{}", self.name, o, column_label(o), c.name());
                sc.mission = mission.clone();
                sc.mission_file = None;
                sc.start = Some(StartSpec { lat: st.lat, lon: st.lon, heading: b + self.heading_seed, speed: self.spd_target });
                sc.controller = match c {
                    Controller::Baseline => ControllerSpec::Baseline,
                    Controller::Augmented => ControllerSpec::Augmented { model: self.model.clone() },
                };
                out.push((o, c, sc));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteCell {
    pub orientation: u32,
    pub controller: Controller,
    pub scenario: Scenario,
    pub outcome: RunOutcome,
}

impl SuiteCell {
    pub fn report(&self) -> ErrorReport {
        self.outcome.report.unwrap_or(ErrorReport {
            max_error: f64::NAN,
            pct_over_1m: f64::NAN,
            ..Default::default()
        })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub cells: Vec<SuiteCell>,
    pub table: Option<ComparisonTable>,
}

impl SuiteOutcome {
    pub fn all_complete(&self) -> bool {
        self.cells.iter().all(|c| c.outcome.complete)
    }

    pub fn cell(&self, orientation: u32, controller: Controller) -> Option<&SuiteCell> {
        self.cells.iter().find(|c| c.orientation == orientation && c.controller == controller)
    }

    pub fn cells_csv(&self) -> String {
        let mut s = String::from("orientation,label,controller,max_error_m,pct_over_1m,sign_changes,complete\n");
        for c in &self.cells {
            let r = c.report();
            s.push_str(&format!(
                "{},{},{},{:.4},{:.4},{},{}\n",
                c.orientation,
                column_label(c.orientation),
                c.controller.name(),
                r.max_error,
                r.pct_over_1m,
                r.sign_changes,
                c.outcome.complete
            ));
        }
        s
    }
}

pub fn run_suite(spec: &SuiteSpec, template: &Scenario) -> Result<SuiteOutcome> {
    let jobs = spec.scenarios(template)?;
    let cells = jobs
        .into_par_iter()
        .map(|(orientation, controller, scenario)| {
            let outcome = run_scenario(&scenario)?;
            Ok(SuiteCell { orientation, controller, scenario, outcome })
        })
        .collect::<Result<Vec<_>>>()?;
    let table_cells: Vec<TableCell> = cells
        .iter()
        .map(|c| TableCell { controller: c.controller, orientation: c.orientation, report: c.report() })
        .collect();
    let table = table_report(&table_cells).ok();
    Ok(SuiteOutcome { cells, table })
}

#[derive(Serialize)]
struct ResolvedSuite<'a> {
    #[serde(flatten)]
    spec: &'a SuiteSpec,
    resolved_template: &'a Scenario,
}

pub fn write_suite(dir: &Path, spec: &SuiteSpec, template: &Scenario, out: &SuiteOutcome) -> Result<()> {
    for c in &out.cells {
        write_run(&dir.join("runs").join(&c.scenario.name), &c.scenario, &c.outcome)?;
    }
    io::write_text(&dir.join("cells.csv"), &out.cells_csv())?;
    if let Some(t) = &out.table {
        io::write_text(&dir.join("table.csv"), &t.to_csv())?;
        io::write_text(&dir.join("table.txt"), &t.to_text())?;
    }
    let mut spec = spec.clone();
    spec.template = None;
    spec.template_file = None;
    spec.overrides = None;
    io::write_json(&dir.join(RESOLVED_SUITE), &ResolvedSuite { spec: &spec, resolved_template: template })
}

/// Rebuild the table of a suite directory from its run logs.
pub fn rescore_suite(dir: &Path) -> Result<SuiteOutcome> {
    let v: Value = io::read_json(&dir.join(RESOLVED_SUITE))?;
    let template: Scenario = serde_json::from_value(v["resolved_template"].clone())
        .map_err(|source| Error::Json { path: RESOLVED_SUITE.into(), source })?;
    let mut obj = v.clone();
    if let Value::Object(m) = &mut obj {
        m.remove("resolved_template");
    }
    let spec: SuiteSpec =
        serde_json::from_value(obj).map_err(|source| Error::Json { path: RESOLVED_SUITE.into(), source })?;
    let mut cells = Vec::new();
    for (orientation, controller, scenario) in spec.scenarios(&template)? {
        let outcome = super::rescore_run(&dir.join("runs").join(&scenario.name))?;
        cells.push(SuiteCell { orientation, controller, scenario, outcome });
    }
    let table_cells: Vec<TableCell> = cells
        .iter()
        .map(|c| TableCell { controller: c.controller, orientation: c.orientation, report: c.report() })
        .collect();
    let out = SuiteOutcome { table: table_report(&table_cells).ok(), cells };
    io::write_text(&dir.join("cells.csv"), &out.cells_csv())?;
    if let Some(t) = &out.table {
        io::write_text(&dir.join("table.csv"), &t.to_csv())?;
        io::write_text(&dir.join("table.txt"), &t.to_text())?;
    }
    Ok(out)
}
