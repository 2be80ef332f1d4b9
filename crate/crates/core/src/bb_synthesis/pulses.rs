use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, identity, kron, trace, CMat};
use crate::operator_algebra::{adjoint_of, build_pauli_basis, AdjointRotation, AxisAngle, OperatorBasis};

/// Accepted ‖R(U) − R‖_F for a recovered pulse.
pub const PULSE_RESIDUAL_TOL: f64 = 1e-8;

/// Unitaries (up to phase) whose adjoint rotations are the given ones.
pub fn group_to_pulses(rotations: &[AdjointRotation]) -> Result<Vec<CMat>> {
    rotations.iter().map(unitary_from_adjoint).collect()
}

/// A unitary U with adjoint_of(U) = R. Single-qubit rotations go through
/// the axis-angle form; larger ones solve λ_i U = U Q_i with Q_i = Σ_j R_ij λ_j.
pub fn unitary_from_adjoint(r: &AdjointRotation) -> Result<CMat> {
    let d = r.source_dim;
    if !d.is_power_of_two() || d < 2 || r.dim() != d * d - 1 {
        return Err(Error::Shape(format!(
            "rotation of size {} does not come from qubits of dimension {d}",
            r.dim()
        )));
    }
    let basis = build_pauli_basis(d.trailing_zeros() as usize)?;
    let u = if d == 2 {
        AxisAngle::from_rotation(r)?.unitary()
    } else {
        null_space_unitary(r, &basis)
    };
    let residual = (adjoint_of(&u, &basis)?.matrix - &r.matrix).norm();
    if residual > PULSE_RESIDUAL_TOL {
        return Err(Error::NonRepresentable { residual });
    }
    Ok(u)
}

fn null_space_unitary(r: &AdjointRotation, basis: &OperatorBasis) -> CMat {
    let d = basis.dim();
    let gens = basis.generators();
    let id = identity(d);
    // vec(λU − UQ) = (I⊗λ − Qᵀ⊗I) vec U, column-major
    let mut gram = CMat::zeros(d * d, d * d);
    for (i, li) in gens.iter().enumerate() {
        let mut q = CMat::zeros(d, d);
        for (j, lj) in gens.iter().enumerate() {
            q += lj * c(r.matrix[(i, j)], 0.0);
        }
        let block = kron(&id, li) - kron(&q.transpose(), &id);
        gram += block.adjoint() * &block;
    }
    let (vals, vecs) = hermitian_eigen(&gram);
    let k = (0..vals.len())
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .unwrap_or(0);
    let mut u = CMat::from_column_slice(d, d, vecs.column(k).as_slice());
    let scale = (d as f64).sqrt() / u.norm();
    u *= c(scale, 0.0);
    fix_phase(&mut u);
    u
}

/// Global phase convention: real positive trace, or when the trace
/// vanishes, real positive first large entry in column-major order.
pub fn fix_phase(u: &mut CMat) {
    let tr = trace(u);
    let big = u.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let anchor = if tr.norm() > 1e-8 * u.nrows() as f64 {
        tr
    } else {
        match u.iter().find(|z| z.norm() > 0.5 * big) {
            Some(&z) => z,
            None => return,
        }
    };
    let phase = anchor.conj() / anchor.norm();
    *u *= phase;
}
