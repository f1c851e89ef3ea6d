//! Baseline waypoint navigator: pure pursuit of the active waypoint with a
//! heading PID and a speed PID, in the style of a stock autopilot.

use serde::{Deserialize, Serialize};

use crate::geo::{distance_bearing, wrap_180, GeoPoint};
use crate::vehicle::{ActuatorCommand, AsvState, VehicleParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    /// Bound on the integral term's contribution.
    pub i_clamp: f64,
}

impl PidGains {
    pub fn p(kp: f64) -> Self {
        PidGains { kp, ki: 0.0, kd: 0.0, i_clamp: 1.0 }
    }

    pub fn is_valid(&self) -> bool {
        self.kp >= 0.0 && self.ki >= 0.0 && self.kd >= 0.0 && self.i_clamp > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PidState {
    pub integral: f64,
    pub prev_error: Option<f64>,
}

/// Returns the control output and the updated state.
pub fn pid_step(gains: &PidGains, state: &PidState, error: f64, dt: f64) -> (f64, PidState) {
    debug_assert!(dt > 0.0);
    let integral = (state.integral + gains.ki * error * dt).clamp(-gains.i_clamp, gains.i_clamp);
    let deriv = state.prev_error.map_or(0.0, |p| (error - p) / dt);
    (gains.kp * error + integral + gains.kd * deriv, PidState { integral, prev_error: Some(error) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub pos: GeoPoint,
    pub spd_target: f64,
}

/// Which speed the speed loop holds at the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedReference {
    /// Paddle-wheel speed through the water.
    ThroughWater,
    /// GPS speed over ground.
    Ground,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NavigatorGains {
    /// Heading error (deg) to lateral-acceleration demand (m/s²).
    pub heading: PidGains,
    /// Speed error (m/s) to thrust correction.
    pub speed: PidGains,
    pub acceptance_radius: f64,
    /// Lateral acceleration that saturates the rudder, m/s².
    pub lateral_accel_limit: f64,
    pub speed_reference: SpeedReference,
}

impl Default for NavigatorGains {
    fn default() -> Self {
        NavigatorGains {
            heading: PidGains { kp: 0.0124, ki: 0.0, kd: 0.0, i_clamp: 1.0 },
            speed: PidGains { kp: 0.2, ki: 0.05, kd: 0.0, i_clamp: 0.25 },
            acceptance_radius: 2.0,
            lateral_accel_limit: 1.0,
            speed_reference: SpeedReference::ThroughWater,
        }
    }
}

impl NavigatorGains {
    pub fn validate(&self) -> Result<(), String> {
        if !self.heading.is_valid() || !self.speed.is_valid() {
            return Err("PID gains must be non-negative with a positive i_clamp".into());
        }
        if !(self.acceptance_radius > 0.0 && self.lateral_accel_limit > 0.0) {
            return Err("acceptance_radius and lateral_accel_limit must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NavigatorState {
    pub active_wp_index: usize,
    pub heading_pid: PidState,
    pub speed_pid: PidState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NavStatus {
    Active,
    MissionComplete,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NavStep {
    pub cmd: ActuatorCommand,
    pub nav: NavigatorState,
    pub status: NavStatus,
}

pub fn waypoint_reached(s: &AsvState, wp: &Waypoint, radius: f64) -> bool {
    distance_bearing(s.pos, wp.pos).0 <= radius
}

/// Advance past every waypoint already inside the acceptance radius.
/// Integrators restart on each advance.
pub fn advance_mission(s: &AsvState, mission: &[Waypoint], nav: &NavigatorState, radius: f64) -> NavigatorState {
    let mut nav = *nav;
    while nav.active_wp_index < mission.len() && waypoint_reached(s, &mission[nav.active_wp_index], radius) {
        nav = NavigatorState { active_wp_index: nav.active_wp_index + 1, ..Default::default() };
    }
    nav
}

/// Point the hull at `target` and hold `spd_cmd`.
///
/// The heading PID asks for a lateral acceleration; turning that into a
/// rudder angle scales with ground speed squared.
pub fn steer_toward(
    s: &AsvState,
    target: GeoPoint,
    spd_cmd: f64,
    nav: &NavigatorState,
    gains: &NavigatorGains,
    params: &VehicleParams,
    dt: f64,
) -> (ActuatorCommand, NavigatorState) {
    let (_, desired) = distance_bearing(s.pos, target);
    let err = wrap_180(desired - s.heading);
    let (demand, heading_pid) = pid_step(&gains.heading, &nav.heading_pid, err, dt);
    let rudder = demand * s.spd_t * s.spd_t / gains.lateral_accel_limit;

    let measured = match gains.speed_reference {
        SpeedReference::ThroughWater => s.through_water_speed,
        SpeedReference::Ground => s.spd_t,
    };
    let (trim, speed_pid) = pid_step(&gains.speed, &nav.speed_pid, spd_cmd - measured, dt);
    let thrust = spd_cmd / params.max_water_speed + trim;
    (ActuatorCommand::new(thrust, rudder), NavigatorState { heading_pid, speed_pid, ..*nav })
}

pub fn navigator_step(
    s: &AsvState,
    mission: &[Waypoint],
    nav: &NavigatorState,
    gains: &NavigatorGains,
    params: &VehicleParams,
    dt: f64,
) -> NavStep {
    let nav = advance_mission(s, mission, nav, gains.acceptance_radius);
    match mission.get(nav.active_wp_index) {
        None => NavStep { cmd: ActuatorCommand::default(), nav, status: NavStatus::MissionComplete },
        Some(wp) => {
            let (cmd, nav) = steer_toward(s, wp.pos, wp.spd_target, &nav, gains, params, dt);
            NavStep { cmd, nav, status: NavStatus::Active }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::{offset_point, EnuVector};

    fn origin() -> GeoPoint {
        GeoPoint::new(34.0, -81.0).unwrap()
    }

    fn wp(east: f64, north: f64) -> Waypoint {
        Waypoint { pos: offset_point(origin(), EnuVector::new(east, north)).unwrap(), spd_target: 2.0 }
    }

    #[test]
    fn pid_examples() {
        let g = PidGains::p(1.0);
        assert_eq!(pid_step(&g, &PidState::default(), 0.0, 0.1).0, 0.0);
        assert_eq!(pid_step(&g, &PidState::default(), 10.0, 0.1).0, 10.0);
        let g = PidGains { kp: 0.0, ki: 0.5, kd: 0.0, i_clamp: 10.0 };
        let mut st = PidState::default();
        let mut out = 0.0;
        for _ in 0..4 {
            (out, st) = pid_step(&g, &st, 2.0, 1.0);
        }
        assert!((out - 4.0).abs() < 1e-12);
    }

    #[test]
    fn integrator_clamps() {
        let g = PidGains { kp: 0.0, ki: 1.0, kd: 0.0, i_clamp: 0.5 };
        let mut st = PidState::default();
        for _ in 0..100 {
            st = pid_step(&g, &st, -3.0, 0.1).1;
        }
        assert_eq!(st.integral, -0.5);
    }

    #[test]
    fn reached_is_inclusive() {
        let s = AsvState::new(origin(), 0.0, 0.0);
        assert!(waypoint_reached(&s, &wp(0.0, 0.0), 2.0));
        let edge = wp(0.0, 2.0);
        let r = distance_bearing(s.pos, edge.pos).0;
        assert!(waypoint_reached(&s, &edge, r));
        assert!(!waypoint_reached(&s, &edge, r * 0.999));
    }

    #[test]
    fn on_line_equilibrium() {
        let s = AsvState::new(origin(), 0.0, 2.0);
        let step = navigator_step(&s, &[wp(0.0, 100.0)], &NavigatorState::default(), &NavigatorGains::default(), &VehicleParams::default(), 0.1);
        assert!(step.cmd.rudder.abs() < 1e-9);
        assert!((step.cmd.thrust - 2.0 / 6.25).abs() < 1e-12);
    }

    #[test]
    fn east_waypoint_turns_starboard() {
        let s = AsvState::new(origin(), 0.0, 2.0);
        let step = navigator_step(&s, &[wp(100.0, 0.0)], &NavigatorState::default(), &NavigatorGains::default(), &VehicleParams::default(), 0.1);
        assert!(step.nav.heading_pid.prev_error.unwrap() == 90.0);
        assert!(step.cmd.rudder > 0.0);
    }

    #[test]
    fn exhausted_mission_stops() {
        let s = AsvState::new(origin(), 0.0, 2.0);
        let step = navigator_step(&s, &[wp(0.0, 1.0)], &NavigatorState::default(), &NavigatorGains::default(), &VehicleParams::default(), 0.1);
        assert_eq!(step.status, NavStatus::MissionComplete);
        assert_eq!(step.cmd, ActuatorCommand::default());
        assert_eq!(step.nav.active_wp_index, 1);
    }
}
