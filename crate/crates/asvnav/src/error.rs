use thiserror::Error;

use crate::geo::GeoPoint;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error("non-finite coordinate or offset")]
    NonFinite,
    #[error("latitude {0} outside [-90, 90]")]
    LatitudeOutOfRange(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("point ({}, {}) lies outside the grid field", .0.lat, .0.lon)]
    OutOfDomain(GeoPoint),
    #[error("invalid field: {0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VehicleError {
    #[error("time step {0} s outside (0, 0.5]")]
    BadTimeStep(f64),
    #[error("non-finite actuator command")]
    NonFiniteCommand,
    #[error("invalid vehicle parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Geo(#[from] GeoError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EffectError {
    #[error("need at least {needed} samples for {features} features, got {got}")]
    TooFewSamples { needed: usize, features: usize, got: usize },
    #[error("feature matrix is rank deficient: `{0}` is degenerate")]
    RankDeficient(String),
    #[error("non-finite value in training sample {0}")]
    NonFinite(usize),
    #[error("unsupported effect model: {0}")]
    Unsupported(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScoreError {
    #[error("leg {0} has coincident endpoints")]
    DegenerateLeg(usize),
    #[error("no scored samples")]
    Empty,
    #[error("missing table cells: {0}")]
    MissingCells(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Vehicle(#[from] VehicleError),
    #[error(transparent)]
    Effect(#[from] EffectError),
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
}

pub type Result<T> = std::result::Result<T, Error>;
