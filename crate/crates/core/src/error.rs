use thiserror::Error;

use crate::rational::{format_q, Q};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation orders differ: {} vs {}", format_q(.0), format_q(.1))]
    TruncationMismatch(Q, Q),
    #[error("cannot truncate to {} beyond known order {}", format_q(.requested), format_q(.available))]
    TruncationUnavailable { requested: Q, available: Q },
    #[error("series is not a unit of the Novikov ring (valuation {valuation})")]
    NotAUnit { valuation: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("geometry is infeasible: {0}")]
    Infeasible(String),
    #[error("{} is not a transition time", format_q(.0))]
    NotATransition(Q),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("no consistent branch assignment for the labelling")]
    NoRegularLabelling,
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("no solver seed converged after {seeds_tried} seeds")]
    NoConvergence { seeds_tried: usize },
    #[error("degenerate Hessian at the seed")]
    DegenerateHessian,
    #[error("Newton iteration stuck at residual order {}", format_q(.0))]
    NewtonStuck(Q),
    #[error("certificate refused: derivative {index} has residual of valuation {}", format_q(.valuation))]
    CertificateRefused { index: usize, valuation: Q },
    #[error("invalid weight signature ({n_plus}, {n_minus})")]
    InvalidSignature { n_plus: usize, n_minus: usize },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("element violates the required filtration: {0}")]
    Filtration(String),
    #[error("algebra has no unit")]
    NoUnit,
    #[error("fixed-point iteration did not stabilize within {0} steps")]
    NotStabilized(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
