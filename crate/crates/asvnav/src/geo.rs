//! Local equirectangular geometry. Bearings are degrees clockwise from true north.

use serde::{Deserialize, Serialize};

use crate::error::GeoError;

pub const METERS_PER_DEG_LAT: f64 = 111_194.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    /// Validates latitude and wraps longitude into [-180, 180).
    pub fn new(lat: f64, lon: f64) -> Result<Self, GeoError> {
        if !lat.is_finite() || !lon.is_finite() {
            return Err(GeoError::NonFinite);
        }
        if !(-90.0..=90.0).contains(&lat) {
            return Err(GeoError::LatitudeOutOfRange(lat));
        }
        Ok(GeoPoint { lat, lon: wrap_lon(lon) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnuVector {
    pub east: f64,
    pub north: f64,
}

impl EnuVector {
    pub const ZERO: EnuVector = EnuVector { east: 0.0, north: 0.0 };

    pub fn new(east: f64, north: f64) -> Self {
        EnuVector { east, north }
    }

    /// Vector of length `mag` pointing along `bearing`.
    pub fn from_polar(mag: f64, bearing: f64) -> Self {
        let r = bearing.to_radians();
        EnuVector { east: mag * r.sin(), north: mag * r.cos() }
    }

    pub fn norm(self) -> f64 {
        self.east.hypot(self.north)
    }

    /// Bearing of the vector; the zero vector reports 0.
    pub fn bearing(self) -> f64 {
        if self.east == 0.0 && self.north == 0.0 {
            0.0
        } else {
            wrap_angle(self.east.atan2(self.north).to_degrees())
        }
    }

    pub fn dot(self, o: EnuVector) -> f64 {
        self.east * o.east + self.north * o.north
    }

    /// z-component of self × o; positive when `o` lies counter-clockwise of self.
    pub fn cross(self, o: EnuVector) -> f64 {
        self.east * o.north - self.north * o.east
    }

    pub fn scale(self, k: f64) -> Self {
        EnuVector { east: self.east * k, north: self.north * k }
    }

    pub fn is_finite(self) -> bool {
        self.east.is_finite() && self.north.is_finite()
    }
}

impl std::ops::Add for EnuVector {
    type Output = EnuVector;
    fn add(self, o: EnuVector) -> EnuVector {
        EnuVector { east: self.east + o.east, north: self.north + o.north }
    }
}

impl std::ops::Sub for EnuVector {
    type Output = EnuVector;
    fn sub(self, o: EnuVector) -> EnuVector {
        EnuVector { east: self.east - o.east, north: self.north - o.north }
    }
}

impl std::ops::Neg for EnuVector {
    type Output = EnuVector;
    fn neg(self) -> EnuVector {
        EnuVector { east: -self.east, north: -self.north }
    }
}

/// Wrap into [0, 360).
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

/// Wrap into (-180, 180].
pub fn wrap_180(theta: f64) -> f64 {
    let r = wrap_angle(theta);
    if r > 180.0 {
        r - 360.0
    } else {
        r
    }
}

fn wrap_lon(lon: f64) -> f64 {
    if (-180.0..180.0).contains(&lon) {
        return lon;
    }
    let r = (lon + 180.0).rem_euclid(360.0) - 180.0;
    if r >= 180.0 {
        -180.0
    } else {
        r
    }
}

fn mid_lat_scale(a: f64, b: f64) -> f64 {
    (0.5 * (a + b)).to_radians().cos() * METERS_PER_DEG_LAT
}

/// Planar displacement from `a` to `b`, longitude scaled at the mean latitude
/// so the result is antisymmetric in its arguments.
pub fn displacement(a: GeoPoint, b: GeoPoint) -> EnuVector {
    let north = (b.lat - a.lat) * METERS_PER_DEG_LAT;
    let east = wrap_lon(b.lon - a.lon) * mid_lat_scale(a.lat, b.lat);
    EnuVector { east, north }
}

/// Range in meters and bearing in [0, 360).
pub fn distance_bearing(a: GeoPoint, b: GeoPoint) -> (f64, f64) {
    let d = displacement(a, b);
    (d.norm(), d.bearing())
}

pub fn offset_point(origin: GeoPoint, delta: EnuVector) -> Result<GeoPoint, GeoError> {
    if !delta.is_finite() {
        return Err(GeoError::NonFinite);
    }
    let lat = origin.lat + delta.north / METERS_PER_DEG_LAT;
    let lon = origin.lon + delta.east / mid_lat_scale(origin.lat, lat);
    GeoPoint::new(lat, lon)
}

/// Fixed-origin tangent plane used by the simulator and the scorer. Unlike
/// [`displacement`], the longitude scale is frozen at the origin so that
/// planar sums stay exactly additive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalFrame {
    pub origin: GeoPoint,
    lon_scale: f64,
}

impl LocalFrame {
    pub fn new(origin: GeoPoint) -> Self {
        LocalFrame { origin, lon_scale: origin.lat.to_radians().cos() * METERS_PER_DEG_LAT }
    }

    pub fn to_enu(&self, p: GeoPoint) -> EnuVector {
        EnuVector {
            east: wrap_lon(p.lon - self.origin.lon) * self.lon_scale,
            north: (p.lat - self.origin.lat) * METERS_PER_DEG_LAT,
        }
    }

    pub fn to_geo(&self, v: EnuVector) -> Result<GeoPoint, GeoError> {
        if !v.is_finite() {
            return Err(GeoError::NonFinite);
        }
        GeoPoint::new(
            self.origin.lat + v.north / METERS_PER_DEG_LAT,
            self.origin.lon + v.east / self.lon_scale,
        )
    }
}
