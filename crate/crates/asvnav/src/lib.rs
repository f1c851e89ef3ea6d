//! Planar ASV guidance simulator: a baseline PID waypoint navigator, the
//! feed-forward intermediate-waypoint augmentation that wraps it, and the
//! cross-track scoring used to compare the two.

// `!(x > 0.0)` style checks are kept on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod augment;
pub mod control;
pub mod effects;
pub mod env;
pub mod error;
pub mod geo;
pub mod harness;
pub mod metrics;
pub mod vehicle;

pub use error::{Error, Result};
