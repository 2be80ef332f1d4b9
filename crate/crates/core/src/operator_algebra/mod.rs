//! Pauli-string operator bases, coordinate expansions, and the adjoint
//! representation SU(n) → SO(n² − 1) used by the geometric picture of
//! decoupling.

mod adjoint;
mod axis_angle;
mod pauli;

pub use adjoint::{adjoint_of, averaged_action, AdjointRotation};
pub(crate) use adjoint::adjoint_unchecked;
pub use axis_angle::{
    canonical_angle, canonical_orthogonal_axis, unitary_from_rotation, AxisAngle, Param,
    PartialRotation, RotationConstraints, RotationSolution, SolutionSummary, CONSTRAINT_TOL,
};
pub use pauli::{
    build_pauli_basis, expand, pauli, real_trace, reconstruct, sigma_dot, sigma_x, sigma_y,
    sigma_z, BasisId, CoordinateVector, OperatorBasis, PauliString, MAX_BASIS_QUBITS,
};
