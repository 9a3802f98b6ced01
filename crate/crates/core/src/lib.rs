//! Uplink spectral efficiency of multi-cell massive MIMO with intermittent
//! user activity, synchronous or asynchronous pilots and Poisson-distributed
//! base stations.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar for common use.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod model;
pub mod parallel;
pub mod real;
pub mod stats;

pub use error::{Error, Result};
pub use real::Real;

pub type Config = model::SystemConfig<f64>;
pub type ConfigF32 = model::SystemConfig<f32>;
pub type Layout = geometry::Deployment<f64>;
pub type LayoutF32 = geometry::Deployment<f32>;
pub type Point = geometry::Point2<f64>;
pub type Sinr = channel::SinrBreakdown<f64>;
pub type SinrF32 = channel::SinrBreakdown<f32>;
