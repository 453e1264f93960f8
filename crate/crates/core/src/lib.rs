//! Convex trigonometry: generalized `cos_Ω`, `sin_Ω` for planar convex bodies,
//! the polar angle correspondence, the generalized pendulum, and sub-Finsler
//! extremals built on them.
//!
//! The crate is `no_std` (with `alloc`). File formats and the command line
//! live in the `convex-trig` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod body;
pub mod config;
pub mod error;
pub mod gallery;
pub mod geodesics;
pub mod math;
pub mod ode;
pub mod pendulum;
pub mod polygon;
pub mod quadrature;
pub mod trig;

pub use body::{ConvexBody, Violation};
pub use config::Tolerances;
pub use error::{Error, Result};
pub use math::Vec2;
pub use polygon::{build_tables, PolygonTables};
pub use trig::{AngleCorrespondence, DerivativePair, Trig};
pub use geodesics::{Extremal, ExtremalSpec, ExtremalTrajectory, System};
pub use pendulum::{Direction, Pendulum, PendulumState, PendulumTrajectory, Regime, SeparatrixPolicy};
