//! Shape proportion (SP) and sphericity for n-dimensional shapes.
//!
//! Two routes to the same pair of descriptors:
//!
//! * [`analytic`] evaluates closed forms for balls, hypercubes, simplices,
//!   orthoplexes and the Platonic solids, with a Monte-Carlo membership
//!   oracle to check them.
//! * [`binning`] turns point data into a binary voxel image, and
//!   [`metrics`] measures that image using the primitives in [`grid`].
//!
//! [`sim`] and [`stats`] drive the simulated-ball sweep and the bootstrap,
//! and [`iris`] runs the species-subset study on the Iris measurements.

pub mod analytic;
pub mod binning;
pub mod error;
pub mod grid;
pub mod iris;
pub mod metrics;
pub mod sim;
pub mod stats;

pub use analytic::{AnalyticShape, McEstimate, PlatonicSolid, SpVariant};
pub use binning::{bin_points, BinningSpec, PointCloud};
pub use error::{Error, Result};
pub use grid::{distance_field, GridImage, VoxelIndex};
pub use metrics::{analyze, measure, ShapeMetrics};
pub use stats::{bootstrap_metric, summarize, QuantileSummary};
