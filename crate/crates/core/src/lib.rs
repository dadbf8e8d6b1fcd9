//! Operator algebra, dense linear algebra and integrability machinery for
//! lattice models built from generalised Clifford generators: the transverse
//! field Ising chain, the free-fermionic eight-vertex chain, the Fendley model
//! and their clock-operator (chiral Potts like) generalisations.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command line
//! front end and wall-clock timing live in the `onsager-cli` companion crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod algebra;
pub mod error;
pub mod integrability;
pub mod intertwiner;
pub mod linalg;
pub mod models;
pub mod report;
pub mod sample;
pub mod spectral;
pub mod verifier;

pub use algebra::{ClockString, OperatorSum, Pauli};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use models::{Boundary, ModelKind, ModelSpec};
pub use report::{Bound, VerificationReport};

pub use num_complex::Complex64;

/// Shorthand for building a complex scalar.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
