//! Self-similar trajectories and their multiscale measures.
//!
//! * [`geometry`] builds level-`k` polylines from a generator (line, Koch,
//!   Peano, the Cesàro family, or any user generator).
//! * [`measures`] gives the closed-form per-scale quantities: resolution
//!   ladder, length, area, the scale-change function `gamma` and the
//!   regime bounds it obeys.
//! * [`kinematics`] attaches a mass and a traversal time and turns those
//!   into areolar velocity/momentum changes and uncertainty products.
//! * [`estimator`] measures arbitrary polylines empirically (box counting,
//!   divider stepping) and fits a dimension; it also generates seeded
//!   Brownian trails.
//! * [`io`] holds the CSV/JSON report writers and the SVG renderer.

pub mod error;
pub mod estimator;
pub mod exec;
pub mod geometry;
pub mod io;
pub mod kinematics;
pub mod measures;

pub use error::{Error, Result};
pub use exec::{configure_threads, Execution};
pub use geometry::{
    refine, similarity_dimension, Builtin, GeneratorSpec, PathMetadata, Point, Polyline,
};
pub use kinematics::{ParticleContext, UncertaintyRow};
pub use measures::{Regime, RegimeBound, ScaleRow};
