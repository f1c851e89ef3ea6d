//! Planar hull model and its onboard sensors.
//!
//! The hull carries a compass heading that the rudder turns through a
//! first-order actuator and a first-order yaw response. Ground velocity is
//! the through-water velocity along the hull heading plus current plus a
//! fraction of the wind. `spd_t`/`h_t` are the ground-track values the GPS
//! reports; `heading` is what the compass reads.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::effects::ForceSample;
use crate::env::{Environment, ForceVector};
use crate::error::VehicleError;
use crate::geo::{wrap_angle, EnuVector, GeoPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsvState {
    pub pos: GeoPoint,
    /// Speed over ground, m/s.
    pub spd_t: f64,
    /// Course over ground, degrees.
    pub h_t: f64,
    pub through_water_speed: f64,
    pub t: f64,
    /// Hull (compass) heading, degrees.
    pub heading: f64,
    pub yaw_rate: f64,
    /// Rudder deflection after actuator lag, [-1, 1].
    pub rudder: f64,
}

impl AsvState {
    /// Hull pointing along `heading` and already moving through the water at
    /// `water_speed`; ground values are filled in as if there were no drift.
    pub fn new(pos: GeoPoint, heading: f64, water_speed: f64) -> Self {
        let heading = wrap_angle(heading);
        AsvState {
            pos,
            spd_t: water_speed,
            h_t: heading,
            through_water_speed: water_speed,
            t: 0.0,
            heading,
            yaw_rate: 0.0,
            rudder: 0.0,
        }
    }

    pub fn ground_velocity(&self) -> EnuVector {
        EnuVector::from_polar(self.spd_t, self.h_t)
    }

    pub fn water_velocity(&self) -> EnuVector {
        EnuVector::from_polar(self.through_water_speed, self.heading)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ActuatorCommand {
    pub thrust: f64,
    pub rudder: f64,
}

impl ActuatorCommand {
    pub fn new(thrust: f64, rudder: f64) -> Self {
        ActuatorCommand { thrust: thrust.clamp(0.0, 1.0), rudder: rudder.clamp(-1.0, 1.0) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VehicleParams {
    /// 22.5 km/h hull top speed.
    pub max_water_speed: f64,
    pub thrust_time_constant: f64,
    /// Steady yaw rate at full rudder, deg/s.
    pub max_turn_rate: f64,
    /// Yaw-rate response lag, s. Zero makes the rate follow the rudder instantly.
    pub yaw_time_constant: f64,
    /// Rudder servo lag, s. Zero means the commanded deflection applies at once.
    pub rudder_time_constant: f64,
    pub wind_drag_factor: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        VehicleParams {
            max_water_speed: 6.25,
            thrust_time_constant: 1.5,
            max_turn_rate: 30.0,
            yaw_time_constant: 1.5,
            rudder_time_constant: 2.0,
            wind_drag_factor: 0.03,
        }
    }
}

impl VehicleParams {
    pub fn validate(&self) -> Result<(), VehicleError> {
        let bad = |m: &str| Err(VehicleError::InvalidParams(m.to_string()));
        if !(self.max_water_speed > 0.0 && self.thrust_time_constant > 0.0 && self.max_turn_rate > 0.0) {
            return bad("max_water_speed, thrust_time_constant and max_turn_rate must be positive");
        }
        if !(self.yaw_time_constant >= 0.0 && self.rudder_time_constant >= 0.0) {
            return bad("time constants must be non-negative");
        }
        if !(0.0..=0.2).contains(&self.wind_drag_factor) {
            return bad("wind_drag_factor must lie in [0, 0.2]");
        }
        Ok(())
    }
}

/// First-order lag over one step with the input held, solved exactly.
fn relax(x: f64, target: f64, tau: f64, dt: f64) -> f64 {
    if tau == 0.0 {
        target
    } else {
        target + (x - target) * (-dt / tau).exp()
    }
}

/// Disturbance drift (current plus wind drag) at the vehicle.
pub fn drift_at(env: &Environment, pos: GeoPoint, t: f64, params: &VehicleParams) -> Result<EnuVector, VehicleError> {
    let c = env.current.sample(pos, t)?.to_enu();
    let w = env.wind.sample(pos, t)?.to_enu();
    Ok(c + w.scale(params.wind_drag_factor))
}

/// Advance one explicit-Euler step.
pub fn step(
    s: &AsvState,
    cmd: ActuatorCommand,
    env: &Environment,
    params: &VehicleParams,
    dt: f64,
) -> Result<AsvState, VehicleError> {
    if !(dt > 0.0 && dt <= 0.5) {
        return Err(VehicleError::BadTimeStep(dt));
    }
    if !cmd.thrust.is_finite() || !cmd.rudder.is_finite() {
        return Err(VehicleError::NonFiniteCommand);
    }
    let cmd = ActuatorCommand::new(cmd.thrust, cmd.rudder);

    let rudder = relax(s.rudder, cmd.rudder, params.rudder_time_constant, dt);
    let yaw_rate = relax(s.yaw_rate, rudder * params.max_turn_rate, params.yaw_time_constant, dt);
    let heading = wrap_angle(s.heading + 0.5 * (s.yaw_rate + yaw_rate) * dt);
    let water = relax(s.through_water_speed, cmd.thrust * params.max_water_speed, params.thrust_time_constant, dt);

    // trapezoidal in the hull's own motion; drift enters as a plain sum so it superposes exactly
    let drift = drift_at(env, s.pos, s.t, params)?;
    let hull = EnuVector::from_polar(water, heading);
    let ground = hull + drift;
    let xy = env.frame.to_enu(s.pos) + (s.water_velocity() + hull).scale(0.5 * dt) + drift.scale(dt);
    Ok(AsvState {
        pos: env.frame.to_geo(xy)?,
        spd_t: ground.norm(),
        h_t: ground.bearing(),
        through_water_speed: water,
        t: s.t + dt,
        heading,
        yaw_rate,
        rudder,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseSpec {
    pub sigma_speed: f64,
    pub sigma_dir: f64,
}

impl NoiseSpec {
    pub const NONE: NoiseSpec = NoiseSpec { sigma_speed: 0.0, sigma_dir: 0.0 };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorFrame {
    /// Water flow past the hull, direction relative to the bow.
    pub rel_water: ForceVector,
    pub rel_wind: ForceVector,
    pub gps: GeoPoint,
    pub gps_speed: f64,
    pub gps_track: f64,
    pub compass: f64,
}

fn to_hull(world: EnuVector, heading: f64) -> ForceVector {
    let f = ForceVector::from_enu(world);
    ForceVector { speed: f.speed, direction: if f.speed == 0.0 { 0.0 } else { wrap_angle(f.direction - heading) } }
}

fn perturb<R: Rng + ?Sized>(f: ForceVector, noise: &NoiseSpec, rng: &mut R) -> ForceVector {
    let mut out = f;
    if noise.sigma_speed > 0.0 {
        let n = Normal::new(0.0, noise.sigma_speed).expect("finite sigma");
        out.speed = (out.speed + n.sample(rng)).max(0.0);
    }
    if noise.sigma_dir > 0.0 {
        let n = Normal::new(0.0, noise.sigma_dir).expect("finite sigma");
        out.direction = wrap_angle(out.direction + n.sample(rng));
    }
    out
}

/// What the paddle wheel and anemometer read: flow relative to the moving hull.
pub fn sense<R: Rng + ?Sized>(
    s: &AsvState,
    env: &Environment,
    noise: &NoiseSpec,
    rng: &mut R,
) -> Result<SensorFrame, VehicleError> {
    let g = s.ground_velocity();
    let c = env.current.sample(s.pos, s.t)?.to_enu();
    let w = env.wind.sample(s.pos, s.t)?.to_enu();
    let rel_water = perturb(to_hull(c - g, s.heading), noise, rng);
    let rel_wind = perturb(to_hull(w - g, s.heading), noise, rng);
    Ok(SensorFrame { rel_water, rel_wind, gps: s.pos, gps_speed: s.spd_t, gps_track: s.h_t, compass: s.heading })
}

/// World-frame current and wind recovered from a sensor frame.
pub fn relative_to_absolute(f: &SensorFrame, s: &AsvState) -> ForceSample {
    let g = s.ground_velocity();
    let world = |rel: ForceVector| {
        let v = EnuVector::from_polar(rel.speed, rel.direction + f.compass) + g;
        // below the round-off of the sum the flow is indistinguishable from still
        if v.norm() <= 8.0 * f64::EPSILON * (rel.speed + g.norm()) {
            EnuVector::default()
        } else {
            v
        }
    };
    let c = ForceVector::from_enu(world(f.rel_water));
    let w = ForceVector::from_enu(world(f.rel_wind));
    ForceSample { spd_c: c.speed, dir_c: c.direction, spd_w: w.speed, dir_w: w.direction }
}
