//! Numerical quaternionic analysis: Cauchy–Fueter kernels and their
//! operators, contour integrals over 3-spheres, SU(2) instantons generated
//! by Fueter-holomorphic fields, and kernels on conformally flat quotients.

pub mod algebra;
pub mod contour;
pub mod error;
pub mod gauge;
pub mod jet;
pub mod kernels;
pub mod manifolds;
pub mod quadrature;

pub use algebra::{MobiusTransform, PolarForm, Quat, Quaternion};
pub use error::{Error, Result};
