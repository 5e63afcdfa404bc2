//! Exact-arithmetic triangle selection.
//!
//! Given `n` points in general position and `m` triangles spanned by them, the
//! [`selection`] pipeline constructs a point lying in the interior of
//! `Ω(m³/(n⁶ log² n))` of the triangles and records every counting step in a
//! [`SelectionCertificate`] that can be re-checked from the instance alone.
//! [`oracle`] computes the true maximum depth independently.
//!
//! All coordinates are arbitrary-precision rationals. Nothing in this crate
//! touches floating point except the reported bound value.

pub mod certificate;
pub mod generators;
pub mod geometry;
pub mod intervals;
pub mod oracle;
pub mod selection;

pub use certificate::{ChainCheck, Relation, SelectionCertificate};
pub use geometry::{
    count_containing, orient, point_in_triangle_interior, Orientation, Point2, PointSet, Rational,
    Segment2, Triangle, TriangleSet,
};
pub use intervals::{max_stabbing, weighted_select, Interval1, IntervalMultiset};
pub use oracle::{exact_max_depth, heuristic_baseline, DepthResult};
pub use selection::{run_selection, SelectionOptions};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate point at indices {0} and {1}")]
    DuplicatePoint(usize, usize),
    #[error("general position violated: points {0}, {1}, {2} are collinear")]
    Collinear(usize, usize, usize),
    #[error("line does not cross segment strictly")]
    NotCrossing,
    #[error("degenerate segment")]
    DegenerateSegment,
    #[error("triangle needs three distinct vertices, got ({0}, {1}, {2})")]
    DegenerateTriangle(usize, usize, usize),
    #[error("triangle vertex index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("duplicate triangle ({0}, {1}, {2})")]
    DuplicateTriangle(usize, usize, usize),
    #[error("no intervals")]
    NoIntervals,
    #[error("interval endpoints must satisfy lo < hi")]
    EmptyInterval,
    #[error("bucket range empty: m = {m} exceeds n³ = {n_cubed}")]
    BucketRangeEmpty { m: usize, n_cubed: u128 },
    #[error("instance too small: need n >= 4 and m >= 2 (got n = {n}, m = {m})")]
    InstanceTooSmall { n: usize, m: usize },
    #[error("z0 not in general position")]
    ZNotGeneral,
    #[error("unrecoverable z0 degeneracy: {0}")]
    Degenerate(String),
    #[error("no triangles")]
    NoTriangles,
    #[error("m exceeds C(n,3): m = {m}, C({n},3) = {max}")]
    TooManyTriangles { m: usize, n: usize, max: usize },
    #[error("n must be at least 4, got {0}")]
    TooFewPoints(usize),
    #[error("generator degenerate: {0} consecutive rejections")]
    GeneratorDegenerate(usize),
    #[error("certificate check {name} failed: {detail}")]
    CheckFailed { name: String, detail: String },
    #[error("invalid rational {0:?}")]
    ParseRational(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
