use std::path::PathBuf;

use crate::geometry::ValidationReport;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path:?}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid mesh: {0}")]
    InvalidMesh(ValidationReport),

    #[error("mesh is flat along the slicing axis (x0 = x1 = {0})")]
    FlatMesh(f64),

    #[error("facets parallel to the slicing plane remain after orientation: faces {faces:?}")]
    ParallelFacets { faces: Vec<usize> },

    #[error("plane x = {x} passes within {distance:e} of vertex {vertex}; retry at x = {suggested}")]
    DegenerateIncidence { x: f64, vertex: usize, distance: f64, suggested: f64 },

    #[error("open chain while welding the section at x = {x}")]
    OpenChain { x: f64 },

    #[error("cross-section at x = {x} has non-positive area {area}")]
    NonPositiveArea { x: f64, area: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
