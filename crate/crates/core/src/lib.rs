//! # mirrorpair
//!
//! Design of two-mirror beam shapers: a collimated beam with a prescribed
//! intensity profile is reflected twice and leaves collimated with another
//! prescribed profile. Both mirrors are envelopes of paraboloids whose foci
//! sit on the opposite mirror; the heights come from the dual potentials of
//! a discrete transport problem with quadratic cost.
//!
//! ```
//! use mirrorpair::{design, Demo, DesignSettings, Kind};
//!
//! let (spec, _) = Demo::Stretch1d.problem_with_cells(16).to_spec().unwrap();
//! let d = design(&spec, Kind::TypeA, &DesignSettings::default()).unwrap();
//! assert!(mirrorpair::verify::check_opl(&d.pair) < 1e-9);
//! ```
//!
//! Modules:
//! - [`ot`]: exact transportation simplex, entropic solver, dual/height maps.
//! - [`reflector`]: envelope evaluation, ray tracing, symmetries, sampling.
//! - [`verify`]: optical path, reflection law, pushforward, Monge-Ampère and
//!   optimality checks.
//! - [`io`]: problem files, meshes, reports and solution directories.

pub mod demo;
pub mod density;
pub mod design;
pub mod error;
pub mod geometry;
pub mod io;
pub mod measure;
pub mod ot;
pub mod pair;
pub mod par;
pub mod plan;
pub mod problem;
pub mod reflector;
pub mod verify;

pub use demo::Demo;
pub use density::{AnalyticDensity, SampledDensity, SyntheticProblem};
pub use design::{design, design_both, design_with_cost, Design, DesignSettings};
pub use error::{Error, Result};
pub use geometry::{paraboloid_h, paraboloid_k, quadratic_cost, Point};
pub use measure::DiscreteMeasure;
pub use pair::{Gauge, Kind, ReflectorPair};
pub use par::Exec;
pub use plan::{PlanEntry, TransportPlan};
pub use problem::{validate_problem, Normalization, ProblemSpec};
