//! Simulation and statistical verification toolkit for quantum
//! trajectories of finite-dimensional open quantum systems.
//!
//! The crate builds Lindblad generators and their unraveling
//! decompositions, simulates jump, diffusive, and discrete-time
//! trajectories with reproducible per-trajectory random streams, and
//! verifies on simulated ensembles that pathwise time averages converge to
//! (random) equilibrium states with the statistics the mean projector
//! predicts.
//!
//! All numerics are generic over the real scalar type through
//! [`scalar::Scalar`]; the aliases below fix the `f64` instantiation used
//! by the command-line tools and the verification suites.

pub mod density;
pub mod error;
pub mod linalg;
pub mod mat;
pub mod rng;
pub mod scalar;
pub mod superop;
pub mod tol;

pub use density::Density;
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use superop::SuperOp;
pub use tol::Tolerances;

/// Complex number over the default scalar.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix over the default scalar.
pub type Matrix = mat::CMat<f64>;
/// Dense complex vector over the default scalar.
pub type Vector = mat::CVec<f64>;
/// Density matrix over the default scalar.
pub type DensityMatrix = Density<f64>;
/// Superoperator over the default scalar.
pub type Superoperator = SuperOp<f64>;
