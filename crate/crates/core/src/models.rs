//! Ready-made system–bath models used by the examples, tests and CLI.

use crate::error::Result;
use crate::linalg::{c, embed_single, identity, kron, CMat};
use crate::open_system::{Coupling, DensityMatrix, SystemBathModel};
use crate::operator_algebra::{sigma_x, sigma_y, sigma_z};

fn bath_state(r: [f64; 3]) -> Result<CMat> {
    Ok(DensityMatrix::bloch(r)?.into_matrix())
}

/// (g/2)·σz ⊗ σz with a static bath of polarization ⟨σz⟩ = `polarization`.
///
/// A fully polarized bath turns this into the unitary phase-flip channel
/// exp(−i(g/2)σz t), whose generator coordinates are (0, 0, −g/2).
pub fn dephasing(g: f64, polarization: f64) -> Result<SystemBathModel> {
    SystemBathModel::new(
        CMat::zeros(2, 2),
        CMat::zeros(2, 2),
        vec![Coupling::new(sigma_z() * c(g / 2.0, 0.0), sigma_z()).named("dephasing")],
        bath_state([0.0, 0.0, polarization])?,
        1,
    )
}

/// Dephasing with a precessing bath, H_B = ω·σx, so that a parity kick
/// leaves a residual error linear in the pulse interval.
pub fn dephasing_with_bath_dynamics(g: f64, omega: f64, bath_bloch: [f64; 3]) -> Result<SystemBathModel> {
    SystemBathModel::new(
        CMat::zeros(2, 2),
        sigma_x() * c(omega, 0.0),
        vec![Coupling::new(sigma_z() * c(g / 2.0, 0.0), sigma_z()).named("dephasing")],
        bath_state(bath_bloch)?,
        1,
    )
}

/// Dominant dephasing plus a weak bit flip:
/// (g/2)·σz ⊗ σz + (g′/2)·σx ⊗ (I + σx).
pub fn dephasing_bit_flip(g: f64, g_flip: f64, bath_bloch: [f64; 3]) -> Result<SystemBathModel> {
    SystemBathModel::new(
        CMat::zeros(2, 2),
        CMat::zeros(2, 2),
        vec![
            Coupling::new(sigma_z() * c(g / 2.0, 0.0), sigma_z()).named("dephasing"),
            Coupling::new(sigma_x() * c(g_flip / 2.0, 0.0), identity(2) + sigma_x()).named("bit flip"),
        ],
        bath_state(bath_bloch)?,
        1,
    )
}

/// J·(σx⊗σx + σy⊗σy + σz⊗σz).
pub fn heisenberg(j: f64) -> CMat {
    (kron(&sigma_x(), &sigma_x()) + kron(&sigma_y(), &sigma_y()) + kron(&sigma_z(), &sigma_z())) * c(j, 0.0)
}

/// Two exchange-coupled qubits with independent dephasing through one fully
/// polarized bath qubit. The system Hamiltonian is −J·σ⃗₁·σ⃗₂ and the
/// dephasing terms are −g₁σz⊗I and −g₂I⊗σz, so the measured generator has
/// pair entries +J on the (x,y,z) diagonal, +g₁ at (z,0) and +g₂ at (0,z).
pub fn heisenberg_dephasing(j: f64, g1: f64, g2: f64) -> Result<SystemBathModel> {
    SystemBathModel::new(
        heisenberg(-j),
        CMat::zeros(2, 2),
        vec![
            Coupling::new(embed_single(&sigma_z(), 0, 2) * c(-g1, 0.0), sigma_z()).named("dephasing 1"),
            Coupling::new(embed_single(&sigma_z(), 1, 2) * c(-g2, 0.0), sigma_z()).named("dephasing 2"),
        ],
        bath_state([0.0, 0.0, 1.0])?,
        1,
    )
}

/// No Hamiltonian at all on `num_qubits` qubits.
pub fn zero_noise(num_qubits: usize) -> Result<SystemBathModel> {
    SystemBathModel::closed(CMat::zeros(1 << num_qubits, 1 << num_qubits))
}

/// The first-order phase-flip map ρ ↦ ρ + (igt/2)[ρ, σz] (linear, not
/// completely positive beyond first order).
pub fn first_order_phase_flip(g: f64, t: f64) -> impl Fn(&CMat) -> CMat + Sync {
    let z = sigma_z();
    move |rho: &CMat| {
        let comm = rho * &z - &z * rho;
        rho + comm * c(0.0, g * t / 2.0)
    }
}
