use thiserror::Error;

use crate::lattice::LatticePoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon is not strictly convex at vertex {0}")]
    NotStrictlyConvex(LatticePoint),
    #[error("polygon has zero area")]
    DegeneratePolygon,
    #[error("linear order vectors must be nonzero")]
    ZeroOrderVector,
    #[error("linear order does not separate {0} and {1}")]
    NonInjectiveOrder(LatticePoint, LatticePoint),
    #[error("genus {genus} gives {steps} path steps; at least one is required")]
    InvalidGenus { genus: i64, steps: i64 },
    #[error("expected {expected} quadrant signs, got {got}")]
    SignCount { expected: usize, got: usize },
    #[error("lattice step must be nonzero")]
    ZeroStep,
    #[error("sign class {mask:#06b} is not valid for step {step}")]
    InvalidSignClass { step: LatticePoint, mask: u8 },
    #[error("directions {0} and {1} are parallel")]
    ParallelDirections(LatticePoint, LatticePoint),
    #[error("direction {0} is not primitive")]
    NotPrimitive(LatticePoint),
    #[error("subdivision has a cell that is neither a triangle nor a parallelogram")]
    NotSimple,
    #[error("tropical polynomial has no terms")]
    EmptySupport,
    #[error("Newton polygon of the support is not two-dimensional")]
    DegenerateSupport,
    #[error("malformed subdivision: {0}")]
    MalformedSubdivision(String),
    #[error("incompatible marked dual graph: {0}")]
    IncompatibleGraph(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
