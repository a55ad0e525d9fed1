use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by any toolkit operation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("density is undefined for a graph with {n_nodes} node(s)")]
    UndefinedDensity { n_nodes: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("manifest: {0}")]
    Manifest(String),

    #[error("dataset integrity: {0}")]
    Integrity(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("largest component has {available} node(s) but {requested} were requested")]
    InsufficientSource { available: usize, requested: usize },

    #[error("walk stalled after {steps} steps with {collected}/{target} nodes collected")]
    WalkStalled {
        steps: usize,
        collected: usize,
        target: usize,
    },

    #[error("adjacency quadrant '{quadrant}' holds no edges; parameters cannot be fitted")]
    EmptyQuadrant { quadrant: char },

    #[error(
        "edge placement budget exhausted after {attempts} rejected draws for {requested} edges"
    )]
    PlacementSaturated { attempts: usize, requested: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph has {n_nodes} node(s) but {required} are required")]
    TooSmallGraph { n_nodes: usize, required: usize },

    #[error("modularity is undefined for a graph without edges")]
    UndefinedModularity,

    #[error("incompatible samples: {0}")]
    IncompatibleSamples(String),

    #[error("empty sample set")]
    EmptyInput,

    #[error("no values to bin for metric '{metric}'")]
    EmptyMetric { metric: &'static str },
}

impl Error {
    /// Wrap an I/O failure with the path it concerned.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
