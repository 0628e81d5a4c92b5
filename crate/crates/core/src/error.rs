use thiserror::Error;

/// Errors raised by mesh generation, optimization and the FEM solve.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular transform: degenerate triangle (signed area {0:e})")]
    SingularTransform(f64),

    #[error("center placement failed: fan triangle {triangle} is degenerate or inverted; adjust the center weight")]
    CenterPlacement { triangle: usize },

    #[error("non-conforming mesh: {0}")]
    NonConforming(String),

    #[error("coincident nodes {0} and {1}")]
    CoincidentNodes(usize, usize),

    #[error("boundary adjacency broken at node {0}")]
    BoundaryAdjacency(usize),

    #[error("solve failed: {0}")]
    SolveFailed(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
