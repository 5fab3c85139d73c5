//! Numerical geometry of the convex hull of the symmetric moment curve.
//!
//! The orbitope `B_{2k}` is the convex hull of the symmetric moment curve
//!
//! ```text
//! x(t) = (cos t, sin t, cos 3t, sin 3t, ..., cos (2k-1)t, sin (2k-1)t)
//! ```
//!
//! This crate builds affine hyperplanes tangent to the curve with prescribed
//! multiplicities, certifies whether they support the orbitope, estimates the
//! local neighborliness arc length `φ_k`, and evaluates the closed-form
//! bounds (contact separation, minimum volume ellipsoid, inradius sandwich).
//!
//! The crate is `no_std` and only needs `alloc`. Parallel execution of
//! multi-start searches is pluggable through [`neighborliness::StartRunner`];
//! the bundled [`neighborliness::Sequential`] runner is used when no other
//! executor is supplied.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod curve;
pub mod ellipsoid;
pub mod error;
pub mod face;
pub mod linalg;
pub mod neighborliness;
pub mod runner;
pub mod tangent;
pub mod trig_poly;

pub use curve::{Arc, CirclePoint, CurveSpec};
pub use error::{Error, Result};
pub use face::FaceCertificate;
pub use tangent::{Hyperplane, TangencyPattern};
pub use trig_poly::{CircleRootSet, TrigPoly};
