//! Numerical analysis of closed frontal curves in ℝⁿ.
//!
//! A frontal is a smooth closed curve `γ` that admits a continuous unit
//! tangent field `e` even through its singular points. This crate locates
//! and classifies those singular points, builds `e` together with its sign
//! function and angle lift, integrates the curvature measure `‖e′‖ dt`,
//! and checks the Fenchel-type bounds that hold for non-co-orientable
//! frontals (`K ≥ π`, equality classification, cusp counting).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, rendering and
//! the command-line front end live in the companion `frontal` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod curvature;
pub mod curve;
pub mod error;
pub mod frame;
pub mod generator;
pub mod jet;
pub mod quadrature;
pub mod singular;
pub mod topology;
pub mod trig;
pub mod vector;
pub mod verify;

pub use analysis::{analyze, Analysis, AnalysisOptions};
pub use curvature::{CurvatureSummary, LConvexity};
pub use curve::{Backend, ClosedCurve, Family, Placement};
pub use error::{Error, Result};
pub use frame::{AngleLift, FrontalFrame, HalfInt};
pub use generator::{GeneratedCurve, GeneratorSpec, ThetaMode, Topology};
pub use jet::{Jet, Taylor};
pub use singular::SingularPoint;
pub use trig::TrigPoly;
pub use verify::{TheoremId, TheoremVerdict, VerdictStatus};

/// Period of every closed curve handled by this crate.
pub const PERIOD: f64 = 2.0 * core::f64::consts::PI;
