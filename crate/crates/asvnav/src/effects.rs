//! Linear effect model: what the current and wind do to the vehicle's progress.
//!
//! Forces enter as east/north components. Two further features project the
//! current and wind onto the travel direction, so the along-track deficit is
//! linear in the same feature vector as the drift components.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::env::ForceVector;
use crate::error::EffectError;
use crate::geo::{wrap_angle, EnuVector};

pub const MODEL_FORMAT: &str = "asvnav-effect-model";
pub const MODEL_VERSION: u32 = 1;
pub const RECIPE_COMPONENTS_V1: &str = "components-v1";

pub const FEATURE_NAMES: [&str; 6] =
    ["current_east", "current_north", "wind_east", "wind_north", "current_along", "wind_along"];
pub const OUTPUT_NAMES: [&str; 3] = ["drift_east", "drift_north", "deficit"];

/// World-frame current and wind at the vehicle.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ForceSample {
    pub spd_c: f64,
    pub dir_c: f64,
    pub spd_w: f64,
    pub dir_w: f64,
}

impl ForceSample {
    pub fn new(current: ForceVector, wind: ForceVector) -> Self {
        ForceSample { spd_c: current.speed, dir_c: current.direction, spd_w: wind.speed, dir_w: wind.direction }
    }

    pub fn current(&self) -> EnuVector {
        EnuVector::from_polar(self.spd_c, self.dir_c)
    }

    pub fn wind(&self) -> EnuVector {
        EnuVector::from_polar(self.spd_w, self.dir_w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EffectPrediction {
    /// Along-track ground-speed deficit; positive slows progress.
    pub effect_spd: f64,
    pub effect_dir: f64,
    pub effect_x: f64,
    pub effect_y: f64,
}

impl EffectPrediction {
    pub fn drift(&self) -> EnuVector {
        EnuVector::new(self.effect_x, self.effect_y)
    }
}

/// One logged control step. The direction vector is the intended direction
/// of travel the deficit is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainingSample {
    pub current_east: f64,
    pub current_north: f64,
    pub wind_east: f64,
    pub wind_north: f64,
    pub commanded_speed: f64,
    pub heading_east: f64,
    pub heading_north: f64,
    pub drift_east: f64,
    pub drift_north: f64,
    pub deficit: f64,
}

impl TrainingSample {
    fn features(&self) -> [f64; 6] {
        let c = EnuVector::new(self.current_east, self.current_north);
        let w = EnuVector::new(self.wind_east, self.wind_north);
        let h = EnuVector::new(self.heading_east, self.heading_north);
        [c.east, c.north, w.east, w.north, c.dot(h), w.dot(h)]
    }

    fn targets(&self) -> [f64; 3] {
        [self.drift_east, self.drift_north, self.deficit]
    }

    fn is_finite(&self) -> bool {
        self.features().iter().chain(self.targets().iter()).all(|v| v.is_finite()) && self.commanded_speed.is_finite()
    }
}

fn feature_vector(f: &ForceSample, heading: f64) -> [f64; 6] {
    let c = f.current();
    let w = f.wind();
    let h = EnuVector::from_polar(1.0, heading);
    [c.east, c.north, w.east, w.north, c.dot(h), w.dot(h)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectModel {
    pub format: String,
    pub version: u32,
    pub recipe: String,
    pub intercept: bool,
    pub features: Vec<String>,
    pub outputs: Vec<String>,
    /// One row per output; a trailing intercept column when `intercept`.
    pub coefficients: Vec<Vec<f64>>,
    pub residual_rmse: Vec<f64>,
    pub samples: usize,
    /// Features that were identically zero in training; their weights are pinned to 0.
    #[serde(default)]
    pub inactive_features: Vec<String>,
}

impl EffectModel {
    fn with_coefficients(coefficients: Vec<Vec<f64>>, intercept: bool) -> Self {
        let mut features: Vec<String> = FEATURE_NAMES.iter().map(|s| s.to_string()).collect();
        if intercept {
            features.push("intercept".into());
        }
        EffectModel {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            recipe: RECIPE_COMPONENTS_V1.into(),
            intercept,
            features,
            outputs: OUTPUT_NAMES.iter().map(|s| s.to_string()).collect(),
            coefficients,
            residual_rmse: vec![0.0; 3],
            samples: 0,
            inactive_features: Vec::new(),
        }
    }

    /// The simulator's own drift law: current plus `wind_drag_factor` times wind.
    pub fn oracle(wind_drag_factor: f64) -> Self {
        let k = wind_drag_factor;
        Self::with_coefficients(
            vec![
                vec![1.0, 0.0, k, 0.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0, k, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, 0.0, -1.0, -k],
            ],
            false,
        )
    }

    /// Predicts no effect for any input.
    pub fn zero() -> Self {
        Self::with_coefficients(vec![vec![0.0; 6]; 3], false)
    }

    pub fn check(&self) -> Result<(), EffectError> {
        if self.format != MODEL_FORMAT || self.version != MODEL_VERSION || self.recipe != RECIPE_COMPONENTS_V1 {
            return Err(EffectError::Unsupported(format!("{} v{} recipe {}", self.format, self.version, self.recipe)));
        }
        let width = FEATURE_NAMES.len() + usize::from(self.intercept);
        if self.coefficients.len() != 3 || self.coefficients.iter().any(|r| r.len() != width) {
            return Err(EffectError::Unsupported("coefficient matrix has the wrong shape".into()));
        }
        if self.coefficients.iter().flatten().any(|c| !c.is_finite()) {
            return Err(EffectError::Unsupported("non-finite coefficient".into()));
        }
        Ok(())
    }

    /// Raw (drift_east, drift_north, deficit).
    fn apply(&self, x: &[f64; 6]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (o, row) in out.iter_mut().zip(&self.coefficients) {
            *o = x.iter().zip(row).map(|(a, b)| a * b).sum::<f64>();
            if self.intercept {
                *o += row[6];
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, EffectError> {
        let m: EffectModel = serde_json::from_str(s).map_err(|e| EffectError::Unsupported(e.to_string()))?;
        m.check()?;
        Ok(m)
    }
}

/// Ordinary least squares per output.
pub fn fit(samples: &[TrainingSample], intercept: bool) -> Result<EffectModel, EffectError> {
    let nf = FEATURE_NAMES.len();
    let width = nf + usize::from(intercept);
    if samples.len() < 10 * width {
        return Err(EffectError::TooFewSamples { needed: 10 * width, features: width, got: samples.len() });
    }
    if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
        return Err(EffectError::NonFinite(i));
    }
    let n = samples.len();
    let mut rows: Vec<[f64; 7]> = Vec::with_capacity(n);
    for s in samples {
        let f = s.features();
        let mut r = [1.0; 7];
        r[..6].copy_from_slice(&f);
        rows.push(r);
    }

    let mut names: Vec<&str> = FEATURE_NAMES.to_vec();
    if intercept {
        names.push("intercept");
    }
    let active: Vec<usize> = (0..width).filter(|&j| rows.iter().any(|r| r[j] != 0.0)).collect();
    let inactive: Vec<String> =
        (0..width).filter(|j| !active.contains(j)).map(|j| names[j].to_string()).collect();

    let mut coefficients = vec![vec![0.0; width]; 3];
    let y = DMatrix::from_fn(n, 3, |i, k| samples[i].targets()[k]);
    if !active.is_empty() {
        let x = DMatrix::from_fn(n, active.len(), |i, j| rows[i][active[j]]);
        let qr = x.clone().qr();
        let r = qr.r();
        for (jj, &j) in active.iter().enumerate() {
            let col_norm = x.column(jj).norm();
            if r[(jj, jj)].abs() <= 1e-9 * col_norm {
                return Err(EffectError::RankDeficient(names[j].to_string()));
            }
        }
        let qty = qr.q().tr_mul(&y);
        let beta = r
            .solve_upper_triangular(&qty)
            .ok_or_else(|| EffectError::RankDeficient(names[active[active.len() - 1]].to_string()))?;
        for (jj, &j) in active.iter().enumerate() {
            for (k, row) in coefficients.iter_mut().enumerate() {
                row[j] = beta[(jj, k)];
            }
        }
    }

    let mut model = EffectModel::with_coefficients(coefficients, intercept);
    let mut sse = [0.0; 3];
    for s in samples {
        let p = model.apply(&s.features());
        for k in 0..3 {
            sse[k] += (p[k] - s.targets()[k]).powi(2);
        }
    }
    model.residual_rmse = sse.iter().map(|e| (e / n as f64).sqrt()).collect();
    model.samples = n;
    model.inactive_features = inactive;
    Ok(model)
}

/// Planar components of a polar effect.
pub fn convert_to_coordinate_vectors(effect_spd_mag: f64, effect_dir: f64) -> (f64, f64) {
    let r = effect_dir.to_radians();
    (effect_spd_mag * r.sin(), effect_spd_mag * r.cos())
}

/// `heading` is the intended direction of travel; the deficit is measured along it.
/// The current recipe does not use the speed inputs; they are accepted so
/// richer recipes can slot in.
pub fn predict(
    model: &EffectModel,
    f: &ForceSample,
    _spd_target: f64,
    _spd_t: f64,
    heading: f64,
) -> Result<EffectPrediction, EffectError> {
    model.check()?;
    let [de, dn, deficit] = model.apply(&feature_vector(f, heading));
    let drift = EnuVector::new(de, dn);
    let effect_dir = if drift.norm() == 0.0 { 0.0 } else { wrap_angle(de.atan2(dn).to_degrees()) };
    let (effect_x, effect_y) = convert_to_coordinate_vectors(drift.norm(), effect_dir);
    Ok(EffectPrediction { effect_spd: deficit, effect_dir, effect_x, effect_y })
}
