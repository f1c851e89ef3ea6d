//! Current and wind fields. Directions are the way the flow moves toward.

use serde::{Deserialize, Serialize};

use crate::error::EnvError;
use crate::geo::{wrap_angle, EnuVector, GeoPoint, LocalFrame};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ForceVector {
    pub speed: f64,
    pub direction: f64,
}

impl ForceVector {
    pub fn new(speed: f64, direction: f64) -> Self {
        ForceVector { speed, direction: wrap_angle(direction) }
    }

    pub fn to_enu(self) -> EnuVector {
        EnuVector::from_polar(self.speed, self.direction)
    }

    pub fn from_enu(v: EnuVector) -> Self {
        ForceVector { speed: v.norm(), direction: v.bearing() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gust {
    pub amplitude: f64,
    pub period: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldShape {
    Uniform {
        flow: ForceVector,
    },
    /// Parabolic cross-channel profile about a straight centerline.
    RiverProfile {
        centerline_point: GeoPoint,
        axis_bearing: f64,
        centerline: ForceVector,
        half_width: f64,
    },
    /// Row-major nodes starting at `south_west`, rows stepping north.
    Grid {
        south_west: GeoPoint,
        dlat: f64,
        dlon: f64,
        rows: usize,
        cols: usize,
        nodes: Vec<ForceVector>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    #[serde(flatten)]
    pub shape: FieldShape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gust: Option<Gust>,
}

impl FieldSpec {
    pub fn uniform(speed: f64, direction: f64) -> Self {
        FieldSpec { shape: FieldShape::Uniform { flow: ForceVector::new(speed, direction) }, gust: None }
    }

    pub fn calm() -> Self {
        Self::uniform(0.0, 0.0)
    }

    pub fn with_gust(mut self, amplitude: f64, period: f64) -> Self {
        self.gust = Some(Gust { amplitude, period });
        self
    }

    pub fn is_calm(&self) -> bool {
        matches!(self.shape, FieldShape::Uniform { flow } if flow.speed == 0.0) && self.gust.is_none()
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let bad = |m: &str| Err(EnvError::Invalid(m.to_string()));
        let base = match &self.shape {
            FieldShape::Uniform { flow } => flow.speed,
            FieldShape::RiverProfile { half_width, centerline, .. } => {
                if !(*half_width > 0.0) {
                    return bad("half_width must be positive");
                }
                centerline.speed
            }
            FieldShape::Grid { dlat, dlon, rows, cols, nodes, .. } => {
                if !(*dlat > 0.0 && *dlon > 0.0) {
                    return bad("grid spacing must be positive");
                }
                if *rows < 2 || *cols < 2 || nodes.len() != rows * cols {
                    return bad("grid needs rows*cols nodes with at least 2x2");
                }
                nodes.iter().map(|n| n.speed).fold(f64::INFINITY, f64::min)
            }
        };
        if !(base >= 0.0) || !base.is_finite() {
            return bad("speeds must be finite and non-negative");
        }
        if let Some(g) = self.gust {
            if !(g.period > 0.0) {
                return bad("gust period must be positive");
            }
            if !(g.amplitude >= 0.0 && g.amplitude < base) {
                return bad("gust amplitude must be below the base speed");
            }
        }
        Ok(())
    }

    /// Field value at `p`, time `t`.
    pub fn sample(&self, p: GeoPoint, t: f64) -> Result<ForceVector, EnvError> {
        let mut f = match &self.shape {
            FieldShape::Uniform { flow } => *flow,
            FieldShape::RiverProfile { centerline_point, axis_bearing, centerline, half_width } => {
                let d = LocalFrame::new(*centerline_point).to_enu(p);
                let axis = EnuVector::from_polar(1.0, *axis_bearing);
                let lateral = axis.cross(d);
                let q = lateral / half_width;
                ForceVector { speed: centerline.speed * (1.0 - q * q).max(0.0), direction: centerline.direction }
            }
            FieldShape::Grid { south_west, dlat, dlon, rows, cols, nodes } => {
                let fi = (p.lat - south_west.lat) / dlat;
                let fj = (p.lon - south_west.lon) / dlon;
                let (nr, nc) = ((*rows - 1) as f64, (*cols - 1) as f64);
                if !(0.0..=nr).contains(&fi) || !(0.0..=nc).contains(&fj) {
                    return Err(EnvError::OutOfDomain(p));
                }
                let i0 = (fi.floor() as usize).min(rows - 2);
                let j0 = (fj.floor() as usize).min(cols - 2);
                let (u, v) = (fi - i0 as f64, fj - j0 as f64);
                let node = |i: usize, j: usize| nodes[i * cols + j].to_enu();
                let e = node(i0, j0).scale((1.0 - u) * (1.0 - v))
                    + node(i0, j0 + 1).scale((1.0 - u) * v)
                    + node(i0 + 1, j0).scale(u * (1.0 - v))
                    + node(i0 + 1, j0 + 1).scale(u * v);
                // exact node hits return the stored value untouched
                if u == 0.0 && v == 0.0 {
                    nodes[i0 * cols + j0]
                } else if u == 1.0 && v == 1.0 {
                    nodes[(i0 + 1) * cols + j0 + 1]
                } else if u == 1.0 && v == 0.0 {
                    nodes[(i0 + 1) * cols + j0]
                } else if u == 0.0 && v == 1.0 {
                    nodes[i0 * cols + j0 + 1]
                } else {
                    ForceVector::from_enu(e)
                }
            }
        };
        if let Some(g) = self.gust {
            f.speed = (f.speed + g.amplitude * (2.0 * std::f64::consts::PI * t / g.period).sin()).max(0.0);
        }
        if f.speed == 0.0 {
            f.direction = 0.0;
        }
        Ok(f)
    }
}

pub fn sample_current(field: &FieldSpec, p: GeoPoint, t: f64) -> Result<ForceVector, EnvError> {
    field.sample(p, t)
}

pub fn sample_wind(field: &FieldSpec, p: GeoPoint, t: f64) -> Result<ForceVector, EnvError> {
    field.sample(p, t)
}

/// The pair of fields acting on a vehicle plus the planar frame the
/// simulation integrates in.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub frame: LocalFrame,
    pub current: FieldSpec,
    pub wind: FieldSpec,
}

impl Environment {
    pub fn new(origin: GeoPoint, current: FieldSpec, wind: FieldSpec) -> Self {
        Environment { frame: LocalFrame::new(origin), current, wind }
    }

    pub fn calm(origin: GeoPoint) -> Self {
        Self::new(origin, FieldSpec::calm(), FieldSpec::calm())
    }
}
