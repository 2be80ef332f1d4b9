//! Exact dense system ⊗ bath evolution: the source of synthetic tomography
//! data and the oracle that verifies BB sequences.

mod dynamics;
mod group;
mod model;
mod state;

pub use dynamics::{
    apply_bb_cycle, bb_cycle_unitary, bb_evolution, commutes_with_group, kraus_from_model, propagate,
    propagate_substepped, reduced_state, symmetrize_hamiltonian, JointChannel, BATH_EIGEN_CUTOFF,
};
pub use group::PulseGroup;
pub use model::{Coupling, SystemBathModel};
pub use state::{DensityMatrix, KrausSet};
