//! Exact computer algebra for the geometry of oriented geodesics on the
//! boundary circle: intersection numbers, ghost polygons and their bracket,
//! the swapping algebra, and correlation-function evaluation through exact
//! rational projectors.
//!
//! Everything algebraic is exact (`BigInt` homogeneous coordinates and
//! `BigRational` coefficients); the only floating-point corner is the
//! barycenter solver in [`hyperbolic`].

pub mod boundary;
pub mod config;
pub mod error;
pub mod ghost;
pub mod hyperbolic;
pub mod matrix;
pub mod repr;
pub mod sampling;
pub mod swap;

pub use boundary::{
    apply_mobius, cyclic_orient, cyclically_oriented, epsilon, epsilon_theta, BoundaryPoint,
    MobiusMap, OrientedGeodesic, ThetaGeodesic, ThetaSignature,
};
pub use config::{Configuration, Edge, EdgeKind, EdgeTuple, GhostPolygon};
pub use error::GhostError;
pub use ghost::{
    bracket, bracket_generators, cancellation_terms, hexagonal_check, jacobiator, nested_bracket,
    CancellationFamilies, CircleLinking, GhostElement, GhostMonomial, LinkingStructure,
};
pub use repr::{FamilyKind, GroupPresentation, LimitFamily, OrbitSum, Projector};
pub use swap::{
    multifraction, pi, polygonal_decomposition, swap_bracket, Multifraction, PairGen, SwapElement,
    SwapMonomial,
};

/// Exact rational scalar used for all algebraic coefficients.
pub type Rational = num_rational::BigRational;
