//! Numerical laboratory for the radial cubic Schrödinger equation on the unit
//! ball of R³ with Dirichlet boundary conditions.
//!
//! The crate is `no_std` and only needs `alloc`. It contains the explicit
//! radial Dirichlet eigenbasis, half-integer Bessel functions and the Airy
//! function, the bilinear eigenfunction and Bessel estimates, the lattice
//! counting machinery (circle and perturbed-quadric counts, exponential sums,
//! Van der Corput bounds) and a Strang-splitting time integrator.
//!
//! IO, parallel sweeps and the command line live in the `ballnls` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

pub mod bilinear;
pub mod eigenbasis;
pub mod error;
pub mod lattice;
pub mod quadrature;
pub mod regression;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
