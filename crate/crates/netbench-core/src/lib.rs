//! Build sub-network datasets from one large social network, mirror them
//! with the R-MAT recursive-matrix generator, and score any candidate set
//! against a reference set with Maximum Mean Discrepancy over structural and
//! social-network statistics.
//!
//! Modules:
//! - [`graph`]: immutable undirected simple graphs and structural primitives
//! - [`dataset`]: edgelist/manifest file formats and dataset summaries
//! - [`eswr`]: exploration sampling with replacement (Metropolis-Hastings walk)
//! - [`rmat`]: R-MAT parameter fitting, generation, and per-dataset mirroring
//! - [`metrics`]: degree, clustering, spectral, and shortest-path statistics
//! - [`dynamics`]: SIR simulation and Louvain community detection
//! - [`mmd`]: MMD estimation and the eight-metric evaluation suite
//!
//! The `parallel` feature (default) maps per-graph work onto rayon; disabling
//! it yields a fully sequential build with identical outputs.

pub mod dataset;
pub mod dynamics;
pub mod error;
pub mod eswr;
pub mod exec;
pub mod graph;
pub mod metrics;
pub mod mmd;
pub mod rmat;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{ComponentLabeling, Graph};
