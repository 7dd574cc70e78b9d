//! Multi-manifold clustering with the largest angle path distance.

pub mod anglegraph;
pub mod cli;
pub mod cloud;
pub mod datasets;
pub mod dendrogram;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod io;
pub mod neighborhood;
pub mod params;
pub mod pipeline;
pub mod simplex;

pub use cloud::{PointCloud, Simplex};
pub use error::{Error, Result};
pub use params::{ClusterCount, Eta, Params, WeightMode};
