//! Spin-coupling coefficients for electrons in quantum-dot arrays and the
//! exchange-only encoded gates built on top of them.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is a pure function
//! of its inputs; IO and file formats live in the companion `qdspin-cli` crate.
//!
//! Conventions used throughout:
//! - spin operators are `S = sigma / 2` with hbar omitted;
//! - site 0 is the leftmost tensor factor and the most significant bit of a
//!   basis index; dots A, B, C, ... map to sites 0, 1, 2, ...;
//! - bit value 0 is spin up, `sigma_z = diag(1, -1)`.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cg_basis;
pub mod encoded_gates;
mod error;
pub mod heitler_london;
pub mod numeric;
pub mod spin_algebra;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use spin_algebra::ComplexMatrix;
