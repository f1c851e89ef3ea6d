//! Feed-forward intermediate-waypoint generator wrapped around the baseline
//! navigator. The inner navigator chases a target placed upstream of the
//! true goal; mission progress is still judged on the true goal.

use serde::{Deserialize, Serialize};

use crate::control::{advance_mission, steer_toward, NavStatus, NavigatorGains, NavigatorState, Waypoint};
use crate::effects::{predict, EffectModel, EffectPrediction, ForceSample};
use crate::error::EffectError;
use crate::geo::{displacement, offset_point, EnuVector, GeoPoint};
use crate::vehicle::{ActuatorCommand, AsvState, VehicleParams};

/// Speed used to turn the predicted drift velocity into drift per meter travelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// The waypoint's target speed.
    TargetSpeed,
    /// Ground speed along the track that the adjusted speed command and the
    /// predicted drift will produce once the hull crabs to hold the line.
    PredictedGroundSpeed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AugmentConfig {
    pub k: f64,
    pub max_offset: f64,
    pub update_period: f64,
    pub reference_speed_floor: f64,
    pub normalization: Normalization,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig {
            k: 1.0,
            max_offset: 100.0,
            update_period: 0.1,
            reference_speed_floor: 0.2,
            normalization: Normalization::PredictedGroundSpeed,
        }
    }
}

impl AugmentConfig {
    pub fn validate(&self, dt: f64) -> Result<(), String> {
        if !(self.k > 0.0 && self.max_offset > 0.0 && self.reference_speed_floor > 0.0) {
            return Err("k, max_offset and reference_speed_floor must be positive".into());
        }
        if !(self.update_period >= dt) {
            return Err(format!("update_period {} is shorter than the time step {dt}", self.update_period));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntermediateTarget {
    pub pos: GeoPoint,
    pub spd: f64,
}

/// spd' = effect_spd + spd_target, kept within [0.2 spd_target, max_water_speed].
pub fn adjusted_speed(effect_spd: f64, spd_target: f64, params: &VehicleParams) -> f64 {
    (effect_spd + spd_target).clamp(0.2 * spd_target, params.max_water_speed)
}

/// Along-track ground speed when the hull moves at `water_speed` and crabs
/// just enough to cancel the cross-track part of `drift`.
pub fn predicted_ground_speed(drift: EnuVector, track_bearing: f64, water_speed: f64) -> f64 {
    let u = EnuVector::from_polar(1.0, track_bearing);
    let along = drift.dot(u);
    let cross = u.cross(drift);
    along + (water_speed * water_speed - cross * cross).max(0.0).sqrt()
}

/// Offset the goal against the predicted drift, in proportion to the
/// remaining distance.
pub fn calc_intermediate_wp(
    goal: &Waypoint,
    s: &AsvState,
    effect_x: f64,
    effect_y: f64,
    reference_speed: f64,
    cfg: &AugmentConfig,
) -> GeoPoint {
    let d_t = displacement(s.pos, goal.pos).norm();
    let per_meter = EnuVector::new(effect_x, effect_y).scale(1.0 / reference_speed.max(cfg.reference_speed_floor));
    let mut offset = per_meter.scale(-cfg.k * d_t);
    let m = offset.norm();
    if m > cfg.max_offset {
        offset = offset.scale(cfg.max_offset / m);
    }
    debug_assert!(offset.norm() <= cfg.max_offset * (1.0 + 1e-12));
    offset_point(goal.pos, offset).unwrap_or(goal.pos)
}

/// Feed-forward bookkeeping carried between control steps.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AugmenterState {
    pub last_update: Option<f64>,
    pub for_wp: usize,
    pub target: Option<IntermediateTarget>,
    pub prediction: Option<EffectPrediction>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugStep {
    pub cmd: ActuatorCommand,
    pub nav: NavigatorState,
    pub aug: AugmenterState,
    pub status: NavStatus,
}

/// Build the intermediate target for `goal` from a force sample.
pub fn intermediate_target(
    s: &AsvState,
    goal: &Waypoint,
    model: &EffectModel,
    f: &ForceSample,
    cfg: &AugmentConfig,
    params: &VehicleParams,
) -> Result<(IntermediateTarget, EffectPrediction), EffectError> {
    let track = displacement(s.pos, goal.pos).bearing();
    let p = predict(model, f, goal.spd_target, s.spd_t, track)?;
    let spd = adjusted_speed(p.effect_spd, goal.spd_target, params);
    let reference = match cfg.normalization {
        Normalization::TargetSpeed => goal.spd_target,
        Normalization::PredictedGroundSpeed => {
            predicted_ground_speed(p.drift(), track, spd).max(0.2 * goal.spd_target)
        }
    };
    let pos = calc_intermediate_wp(goal, s, p.effect_x, p.effect_y, reference, cfg);
    Ok((IntermediateTarget { pos, spd }, p))
}

#[allow(clippy::too_many_arguments)]
pub fn augmented_navigator_step(
    s: &AsvState,
    mission: &[Waypoint],
    nav: &NavigatorState,
    aug: &AugmenterState,
    model: &EffectModel,
    f: &ForceSample,
    cfg: &AugmentConfig,
    gains: &NavigatorGains,
    params: &VehicleParams,
    dt: f64,
) -> Result<AugStep, EffectError> {
    let nav = advance_mission(s, mission, nav, gains.acceptance_radius);
    let Some(goal) = mission.get(nav.active_wp_index) else {
        return Ok(AugStep {
            cmd: ActuatorCommand::default(),
            nav,
            aug: *aug,
            status: NavStatus::MissionComplete,
        });
    };
    let due = match (aug.last_update, aug.target) {
        (Some(t0), Some(_)) if aug.for_wp == nav.active_wp_index => s.t - t0 >= cfg.update_period - 1e-9,
        _ => true,
    };
    let aug = if due {
        let (target, p) = intermediate_target(s, goal, model, f, cfg, params)?;
        AugmenterState { last_update: Some(s.t), for_wp: nav.active_wp_index, target: Some(target), prediction: Some(p) }
    } else {
        *aug
    };
    let target = aug.target.expect("target set above");
    let (cmd, nav) = steer_toward(s, target.pos, target.spd, &nav, gains, params, dt);
    Ok(AugStep { cmd, nav, aug, status: NavStatus::Active })
}
