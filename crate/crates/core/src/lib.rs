//! Spherical harmonics on the tangent bundle of the two-sphere.
//!
//! The crate has five layers, each usable on its own:
//!
//! * [`coupling`]: Wigner 3j and 6j symbols and Clebsch-Gordan coefficients in
//!   exact radical-rational arithmetic (integer angular momenta).
//! * [`scalar`]: the scalar harmonics `Y_{l,m,n}(theta, phi, beta)` carrying a
//!   second magnetic index, with ladder operators, products and quadrature.
//! * [`dtensor`]: tensor-valued harmonics built from the scalar ones by
//!   coupling in spin-1 frame tensors, together with their permutation,
//!   contraction and product algebra.
//! * [`geometry`]: charts on the (slit) tangent bundle, exact rotation flows,
//!   finite-difference Lie derivatives and the vertical differential.
//! * [`finsler`]: the metric of a spherically symmetric Finsler Lagrangian
//!   expressed in the tensor harmonic basis, with its closed-form inverse.
//!
//! [`verify`] bundles the numerical cross-check suites that the CLI and the
//! acceptance tests share.

pub mod coupling;
pub mod dtensor;
pub mod error;
pub mod finsler;
pub mod geometry;
pub mod quadrature;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
