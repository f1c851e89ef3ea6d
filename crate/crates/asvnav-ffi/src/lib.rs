//! C ABI over the asvnav simulator.
//!
//! Every fallible call returns an [`AsvStatus`]; on failure the message is
//! available from `asv_last_error()` on the same thread until the next call.
//! Handles are opaque and must be released with their matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use asvnav::effects::{predict, EffectModel, ForceSample};
use asvnav::geo::{distance_bearing, GeoPoint};
use asvnav::harness::{run_scenario, write_run, RunOutcome, Scenario};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Config = 4,
    Io = 5,
    Simulation = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// Parsed scenario.
pub struct AsvScenario(Scenario);
/// Finished simulation run.
pub struct AsvRun(RunOutcome);
/// Effect model.
pub struct AsvModel(EffectModel);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AsvRunSummary {
    pub max_error: f64,
    pub pct_over_1m: f64,
    pub sign_changes: u32,
    pub scored_samples: usize,
    pub log_records: usize,
    /// 1 when the mission completed.
    pub complete: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AsvTrackPoint {
    pub t: f64,
    pub lat: f64,
    pub lon: f64,
    pub spd_t: f64,
    pub h_t: f64,
    pub wp_index: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AsvForceSample {
    pub spd_c: f64,
    pub dir_c: f64,
    pub spd_w: f64,
    pub dir_w: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AsvEffect {
    /// Along-track ground-speed deficit, m/s; positive slows progress.
    pub effect_spd: f64,
    /// Drift bearing, degrees; east and north drift components follow.
    pub effect_dir: f64,
    pub effect_x: f64,
    pub effect_y: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: AsvStatus, msg: impl AsRef<str>) -> AsvStatus {
    set_error(msg.as_ref());
    status
}

fn classify(e: &asvnav::Error) -> AsvStatus {
    use asvnav::Error as E;
    match e {
        E::Io { .. } => AsvStatus::Io,
        E::Json { .. } | E::Csv { .. } => AsvStatus::Parse,
        E::Config(_) | E::Geo(_) | E::Env(_) => AsvStatus::Config,
        E::Vehicle(_) | E::Effect(_) | E::Score(_) => AsvStatus::Simulation,
    }
}

fn guard(f: impl FnOnce() -> AsvStatus) -> AsvStatus {
    set_error("");
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(AsvStatus::Panic, "panic inside asvnav"))
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, AsvStatus> {
    if p.is_null() {
        return Err(fail(AsvStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(AsvStatus::InvalidUtf8, "argument is not UTF-8"))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn asv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after success.
/// Valid until the next asvnav call on the same thread.
#[no_mangle]
pub extern "C" fn asv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse a scenario from JSON text. Relative paths resolve against the
/// working directory.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn asv_scenario_from_json(json: *const c_char, out: *mut *mut AsvScenario) -> AsvStatus {
    guard(|| {
        if out.is_null() {
            return fail(AsvStatus::NullPointer, "null output handle");
        }
        let text = match str_arg(json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let sc: Scenario = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(e) => return fail(AsvStatus::Parse, e.to_string()),
        };
        match sc.resolve(Path::new(".")) {
            Ok(sc) => {
                *out = Box::into_raw(Box::new(AsvScenario(sc)));
                AsvStatus::Ok
            }
            Err(e) => fail(classify(&e), e.to_string()),
        }
    })
}

/// Load a scenario file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn asv_scenario_load(path: *const c_char, out: *mut *mut AsvScenario) -> AsvStatus {
    guard(|| {
        if out.is_null() {
            return fail(AsvStatus::NullPointer, "null output handle");
        }
        let p = match str_arg(path) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match Scenario::load(Path::new(p)) {
            Ok(sc) => {
                *out = Box::into_raw(Box::new(AsvScenario(sc)));
                AsvStatus::Ok
            }
            Err(e) => fail(classify(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `sc` must be a live scenario handle.
#[no_mangle]
pub unsafe extern "C" fn asv_scenario_set_seed(sc: *mut AsvScenario, seed: u64) -> AsvStatus {
    guard(|| match sc.as_mut() {
        Some(s) => {
            s.0.seed = seed;
            AsvStatus::Ok
        }
        None => fail(AsvStatus::NullPointer, "null scenario"),
    })
}

/// # Safety
/// `sc` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn asv_scenario_free(sc: *mut AsvScenario) {
    if !sc.is_null() {
        drop(Box::from_raw(sc));
    }
}

/// Simulate a scenario to completion or its duration limit.
///
/// # Safety
/// `sc` must be a live scenario handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn asv_run(sc: *const AsvScenario, out: *mut *mut AsvRun) -> AsvStatus {
    guard(|| {
        let (Some(sc), false) = (sc.as_ref(), out.is_null()) else {
            return fail(AsvStatus::NullPointer, "null scenario or output handle");
        };
        match run_scenario(&sc.0) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(AsvRun(r)));
                AsvStatus::Ok
            }
            Err(e) => fail(classify(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `run` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn asv_run_free(run: *mut AsvRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Scores for a run. Runs with no scored samples report NaN errors.
///
/// # Safety
/// `run` must be a live run handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn asv_run_summary(run: *const AsvRun, out: *mut AsvRunSummary) -> AsvStatus {
    guard(|| {
        let (Some(r), Some(o)) = (run.as_ref(), out.as_mut()) else {
            return fail(AsvStatus::NullPointer, "null run or output");
        };
        let rep = r.0.report;
        *o = AsvRunSummary {
            max_error: rep.map_or(f64::NAN, |x| x.max_error),
            pct_over_1m: rep.map_or(f64::NAN, |x| x.pct_over_1m),
            sign_changes: rep.map_or(0, |x| x.sign_changes as u32),
            scored_samples: r.0.series.len(),
            log_records: r.0.log.records.len(),
            complete: i32::from(r.0.complete),
        };
        AsvStatus::Ok
    })
}

/// One logged trajectory record.
///
/// # Safety
/// `run` must be a live run handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn asv_run_track_point(run: *const AsvRun, index: usize, out: *mut AsvTrackPoint) -> AsvStatus {
    guard(|| {
        let (Some(r), Some(o)) = (run.as_ref(), out.as_mut()) else {
            return fail(AsvStatus::NullPointer, "null run or output");
        };
        let Some(rec) = r.0.log.records.get(index) else {
            return fail(AsvStatus::OutOfRange, format!("record {index} of {}", r.0.log.records.len()));
        };
        *o = AsvTrackPoint {
            t: rec.t,
            lat: rec.state.pos.lat,
            lon: rec.state.pos.lon,
            spd_t: rec.state.spd_t,
            h_t: rec.state.h_t,
            wp_index: rec.wp_index as u32,
        };
        AsvStatus::Ok
    })
}

/// Write the run's mission, log, error series and reports into `dir`.
///
/// # Safety
/// Handles must be live; `dir` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn asv_run_write(run: *const AsvRun, sc: *const AsvScenario, dir: *const c_char) -> AsvStatus {
    guard(|| {
        let (Some(r), Some(s)) = (run.as_ref(), sc.as_ref()) else {
            return fail(AsvStatus::NullPointer, "null run or scenario");
        };
        let d = match str_arg(dir) {
            Ok(d) => d,
            Err(st) => return st,
        };
        match write_run(Path::new(d), &s.0, &r.0) {
            Ok(()) => AsvStatus::Ok,
            Err(e) => fail(classify(&e), e.to_string()),
        }
    })
}

/// Ground-truth model: current plus `wind_drag_factor` times wind.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn asv_model_oracle(wind_drag_factor: f64, out: *mut *mut AsvModel) -> AsvStatus {
    guard(|| {
        if out.is_null() {
            return fail(AsvStatus::NullPointer, "null output handle");
        }
        if !(0.0..=0.2).contains(&wind_drag_factor) {
            return fail(AsvStatus::Config, "wind_drag_factor must lie in [0, 0.2]");
        }
        *out = Box::into_raw(Box::new(AsvModel(EffectModel::oracle(wind_drag_factor))));
        AsvStatus::Ok
    })
}

/// Load a fitted model file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn asv_model_load(path: *const c_char, out: *mut *mut AsvModel) -> AsvStatus {
    guard(|| {
        if out.is_null() {
            return fail(AsvStatus::NullPointer, "null output handle");
        }
        let p = match str_arg(path) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let text = match std::fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => return fail(AsvStatus::Io, format!("{p}: {e}")),
        };
        match EffectModel::from_json(&text) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(AsvModel(m)));
                AsvStatus::Ok
            }
            Err(e) => fail(AsvStatus::Parse, e.to_string()),
        }
    })
}

/// # Safety
/// `model` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn asv_model_free(model: *mut AsvModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Predict the disturbance effect for a vehicle travelling along `heading`.
///
/// # Safety
/// Pointers must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn asv_model_predict(
    model: *const AsvModel,
    force: *const AsvForceSample,
    spd_target: f64,
    spd_t: f64,
    heading: f64,
    out: *mut AsvEffect,
) -> AsvStatus {
    guard(|| {
        let (Some(m), Some(f), Some(o)) = (model.as_ref(), force.as_ref(), out.as_mut()) else {
            return fail(AsvStatus::NullPointer, "null model, force or output");
        };
        let fs = ForceSample { spd_c: f.spd_c, dir_c: f.dir_c, spd_w: f.spd_w, dir_w: f.dir_w };
        match predict(&m.0, &fs, spd_target, spd_t, heading) {
            Ok(p) => {
                *o = AsvEffect { effect_spd: p.effect_spd, effect_dir: p.effect_dir, effect_x: p.effect_x, effect_y: p.effect_y };
                AsvStatus::Ok
            }
            Err(e) => fail(AsvStatus::Simulation, e.to_string()),
        }
    })
}

/// Equirectangular range (m) and bearing (deg) between two points.
///
/// # Safety
/// `range` and `bearing` must be writable.
#[no_mangle]
pub unsafe extern "C" fn asv_distance_bearing(
    lat1: f64,
    lon1: f64,
    lat2: f64,
    lon2: f64,
    range: *mut f64,
    bearing: *mut f64,
) -> AsvStatus {
    guard(|| {
        if range.is_null() || bearing.is_null() {
            return fail(AsvStatus::NullPointer, "null output");
        }
        let (a, b) = match (GeoPoint::new(lat1, lon1), GeoPoint::new(lat2, lon2)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return fail(AsvStatus::Config, "invalid coordinate"),
        };
        let (r, br) = distance_bearing(a, b);
        ptr::write(range, r);
        ptr::write(bearing, br);
        AsvStatus::Ok
    })
}
