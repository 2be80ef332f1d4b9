//! Simulated quantum process tomography: probe a channel, invert for χ,
//! and read off the short-time effective generator.

mod generator;
mod qpt;

pub use generator::{extract_generator, EffectiveGenerator, PairMatrix, QubitLayout, SHORT_TIME_LIMIT};
pub use qpt::{
    chi_from_lambda, run_qpt, ChiMatrix, QptSetup, TomographyData, INCONSISTENCY_TOL, LINEARITY_TOL,
    MAX_QPT_QUBITS, PINV_RELATIVE_CUTOFF,
};
