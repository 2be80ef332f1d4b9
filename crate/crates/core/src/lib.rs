//! Empirical bang-bang decoupling.
//!
//! The crate reconstructs the χ-matrix of a noisy channel from simulated
//! process tomography, reads off the short-time effective generator, solves
//! the averaged-rotation conditions for storage and gate targets, turns the
//! resulting rotations back into pulses, and checks them by re-simulating
//! the system–bath dynamics. An offline learning loop refines pulse sets
//! against a time-integrated cost.
//!
//! ```
//! use bbforge::operator_algebra::{build_pauli_basis, expand, sigma_z};
//!
//! let basis = build_pauli_basis(1).unwrap();
//! let v = expand(&sigma_z(), &basis).unwrap();
//! assert_eq!(v.coords, vec![0.0, 0.0, 1.0]);
//! ```

pub mod bb_synthesis;
pub mod cli;
pub mod error;
pub mod groups;
pub mod json;
pub mod linalg;
pub mod models;
pub mod open_system;
pub mod operator_algebra;
pub mod optimizer;
pub mod random;
pub mod tomography;

pub use error::{Error, Result};
