use thiserror::Error;

use crate::algebra::Quaternion;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by a zero quaternion")]
    ZeroDivisor,
    #[error("point is a pole of the Möbius map (cz + d = 0)")]
    PoleOfMap,
    #[error("field evaluated at or within tolerance of a singularity {0:?}")]
    SingularPoint(Quaternion),
    #[error("derivative order {0} is not supported (maximum 3)")]
    UnsupportedOrder(usize),
    #[error("jet of order {0} is not available for this field")]
    JetUnavailable(usize),
    #[error("induced field has v(a0, 0) = {0:e} on the real axis")]
    AxisSingularity(f64),
    #[error("complex evaluator failed: {0}")]
    DomainError(String),
    #[error("bad sphere resolution: {0}")]
    BadResolution(String),
    #[error("sphere radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("integrand singular on the contour near {0:?}")]
    SingularOnContour(Quaternion),
    #[error("point lies on the contour")]
    PointOnContour,
    #[error("map vanishes on the contour near {0:?}")]
    ZeroOnContour(Quaternion),
    #[error("|f(c)| = {0:e} exceeds the zero tolerance")]
    NotAZero(f64),
    #[error("|DF| = {0:e} is too small to invert")]
    DegenerateDF(f64),
    #[error("grid node within tolerance of a pole at {0:?}")]
    PoleOnGrid(Quaternion),
    #[error("poles {0:?} and {1:?} are closer than twice the contour radius")]
    PoleCollision(Quaternion, Quaternion),
    #[error("series does not converge: {0}")]
    NonConvergent(String),
    #[error("ball of radius {epsilon} overlaps its dilation images (limit {limit})")]
    BallTooLarge { epsilon: f64, limit: f64 },
    #[error("point {0:?} lies outside the half-space")]
    OutsideHalfSpace(Quaternion),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
