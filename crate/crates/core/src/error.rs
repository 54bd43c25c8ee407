use thiserror::Error;

use crate::geometry::Model;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("model mismatch: {0} value combined with {1} value")]
    ModelMismatch(Model, Model),
    #[error("torus dimensions {m}x{n} are too small (both must be at least 2)")]
    TorusTooSmall { m: i64, n: i64 },
    #[error("face set is not connected")]
    Disconnected,
    #[error("face set is not simply connected ({holes} hole(s))")]
    NotSimplyConnected { holes: i64 },
    #[error("vertex {0} does not belong to the graph")]
    UnknownVertex(String),
    #[error("{0} is not an edge of the graph")]
    UnknownEdge(String),
    #[error("event edges share the vertex {0}")]
    OverlappingEdges(String),
    #[error("graph has no perfect matching")]
    NoMatchings,
    #[error("enumeration refused: {vertices} vertices exceeds the cap of {cap}")]
    OracleCap { vertices: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("quadrature did not reach tolerance {tol:e} (achieved error bound {achieved:e})")]
    NoConvergence { tol: f64, achieved: f64 },
    #[error("torus coupling sum has a vanishing denominator")]
    DegenerateDenominator,
    #[error("not a perfect matching: {0}")]
    NotPerfectMatching(String),
    #[error("invalid input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
