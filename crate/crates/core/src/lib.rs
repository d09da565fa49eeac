pub mod dual_graph;
pub mod error;
pub mod lattice;
mod par;
pub mod path;
pub mod real;
pub mod subdivision;
pub mod svg;
pub mod tropical;

pub use dual_graph::{marked_dual_graph, DualEdge, DualNode, MarkedDualGraph};
pub use error::{Error, Result};
pub use lattice::{LatticePoint, LatticePolygon, LinearOrder, ToricDegree};
pub use par::Execution;
pub use path::{
    count, decode, enumerate_paths, first_convex_corner, mu, mu_side, reflected_corner, CurveExport, DecodedCurve,
    LatticePath, PathCounter, PathMultiplicity, Side,
};
pub use real::{
    curve_real_multiplicity, mu_real_side, nu_real_side, real_signed_count, sign_class_of, vertex_welschinger_sign,
    welschinger_count, Quadrant, SignClass, SignedPath,
};
pub use subdivision::{Cell, CellKind, DualSubdivision};
pub use tropical::{
    canonicalize, check_balancing, curve_of, dual_subdivision, genus_of_simple, vertex_multiplicity,
    PlaneTropicalCurve, RationalPoint, TropicalPolynomial,
};
