//! Two-dimensional vortex panel solver for airfoil potential flow with a
//! laminar boundary-layer drag correction, a pipelined batch execution
//! engine, and a genetic airfoil-shape optimizer.
//!
//! The numerical stack is generic over the floating-point scalar (see
//! [`Scalar`]); `f64` is the default precision and `f32` is available for
//! single-precision batch runs.

pub mod analysis;
pub mod error;
pub mod ga;
pub mod geometry;
pub mod linalg;
pub mod panel;
pub mod pipeline;
pub mod scalar;
pub mod viscous;

pub use analysis::{analyze, AirfoilAnalysis};
pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default-precision aliases.
pub type Airfoil64 = geometry::Airfoil<f64>;
pub type Panel64 = geometry::Panel<f64>;
pub type Point64 = geometry::Point2<f64>;
pub type FlowCondition64 = panel::FlowCondition<f64>;
pub type FlowSolution64 = panel::FlowSolution<f64>;
pub type BsplineGenome64 = geometry::BsplineGenome<f64>;

/// Single-precision aliases.
pub type Airfoil32 = geometry::Airfoil<f32>;
pub type Panel32 = geometry::Panel<f32>;
pub type Point32 = geometry::Point2<f32>;
pub type FlowCondition32 = panel::FlowCondition<f32>;
pub type FlowSolution32 = panel::FlowSolution<f32>;
pub type BsplineGenome32 = geometry::BsplineGenome<f32>;
