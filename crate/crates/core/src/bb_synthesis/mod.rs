//! Inverse problem: from a measured generator ξ and a wanted generator w
//! to a pulse set whose averaged generator (1/|G|)Σ R_kᵀξ equals w.

mod encoded;
mod pulses;
mod report;
mod single;
mod target;
mod two_qubit;

use serde::{Deserialize, Serialize};

pub use encoded::solve_encoded;
pub use pulses::{fix_phase, group_to_pulses, unitary_from_adjoint, PULSE_RESIDUAL_TOL};
pub use report::{check_encoded, error_report, ErrorReport};
pub use single::{rotated, solve_single_qubit_gate, solve_storage, solve_storage_vectors, ACCEPT_TOL};
pub use target::{StabilizerSpace, TargetKind, TargetSpec};
pub use two_qubit::{general, kick_for, local_products, solve_two_qubit, TwoQubitMethod};

use crate::error::{Error, Result};
use crate::linalg::{c, CMat};
use crate::open_system::PulseGroup;
use crate::operator_algebra::{build_pauli_basis, CoordinateVector, PauliString, RotationSolution};
use crate::tomography::EffectiveGenerator;

/// A pulse set together with the first-order generator it produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisResult {
    pub method: String,
    pub group: PulseGroup,
    /// Averaged generator on the addressed sites.
    pub achieved: CoordinateVector,
    pub report: ErrorReport,
    /// Solution sets behind each non-identity single-qubit pulse.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rotation_sets: Vec<RotationSolution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthesisOptions {
    pub max_group_size: usize,
    /// Pulse interval of the result; the generator's time scale when absent.
    pub delta_t: Option<f64>,
    pub two_qubit_method: TwoQubitMethod,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            max_group_size: 4,
            delta_t: None,
            two_qubit_method: TwoQubitMethod::Auto,
        }
    }
}

/// Solves for `target` on the register described by `generator`. Pulses
/// act on the whole register; the report refers to the addressed sites,
/// or to the whole register for encoded targets.
pub fn synthesize(generator: &EffectiveGenerator, target: &TargetSpec, options: &SynthesisOptions) -> Result<SynthesisResult> {
    let n = generator.num_qubits();
    let delta_t = options.delta_t.unwrap_or(generator.time_scale);
    let max = options.max_group_size;
    if target.sites.iter().any(|&s| s >= n) {
        return Err(Error::Shape(format!("target site outside a {n}-qubit register")));
    }
    let mut res = match target.kind {
        TargetKind::Storage => solve_storage(&generator.single(target.sites[0])?, delta_t, max)?,
        TargetKind::SingleQubit => {
            let w = [target.wanted.coords[0], target.wanted.coords[1], target.wanted.coords[2]];
            solve_single_qubit_gate(&generator.single(target.sites[0])?, w, delta_t, max)?
        }
        TargetKind::TwoQubit => {
            let xi = generator.pair(target.sites[0], target.sites[1])?.to_coordinates();
            solve_two_qubit(&xi, &target.wanted, delta_t, max, options.two_qubit_method)?
        }
        TargetKind::Encoded => return solve_encoded(&generator.full, target, delta_t, max),
    };
    if res.group.dim() != 1 << n {
        let pulses = res
            .group
            .pulses()
            .iter()
            .map(|p| embed_on_sites(p, &target.sites, n))
            .collect::<Result<Vec<_>>>()?;
        res.group = PulseGroup::new(pulses, delta_t)?;
    }
    Ok(res)
}

/// Places an operator on the given sites (in order) of an `num_qubits`
/// register by expanding it in Pauli strings.
pub fn embed_on_sites(op: &CMat, sites: &[usize], num_qubits: usize) -> Result<CMat> {
    let k = sites.len();
    if op.nrows() != 1 << k || sites.iter().any(|&s| s >= num_qubits) {
        return Err(Error::Shape("operator does not fit the given sites".into()));
    }
    let local = build_pauli_basis(k)?;
    let coeffs = local.expand_complex(op)?;
    let mut out = CMat::zeros(1 << num_qubits, 1 << num_qubits);
    for (s, z) in local.strings().iter().zip(coeffs) {
        if z.norm() == 0.0 {
            continue;
        }
        let mut labels = vec![0u8; num_qubits];
        for (pos, &site) in sites.iter().enumerate() {
            labels[site] = s.indices()[pos];
        }
        out += PauliString::new(labels)?.matrix() * z;
    }
    Ok(out * c(1.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;
    use crate::operator_algebra::{sigma_x, sigma_y, sigma_z, BasisId};
    use crate::tomography::QubitLayout;

    #[test]
    fn embedding_respects_site_order() {
        let xz = kron(&sigma_x(), &sigma_z());
        let e = embed_on_sites(&xz, &[2, 0], 3).unwrap();
        let want = crate::linalg::kron_all([&sigma_z(), &crate::linalg::identity(2), &sigma_x()]);
        assert!((e - want).norm() < 1e-14);
        let y = embed_on_sites(&sigma_y(), &[1], 2).unwrap();
        assert!((y - kron(&crate::linalg::identity(2), &sigma_y())).norm() < 1e-14);
    }

    #[test]
    fn storage_on_the_second_of_two_qubits() {
        let mut full = CoordinateVector::zeros(BasisId { num_qubits: 2 });
        full.set(&"IZ".parse().unwrap(), -0.5);
        full.set(&"ZI".parse().unwrap(), 0.2);
        let gen = EffectiveGenerator::from_coordinates(full, 0.01, &QubitLayout::singles(2)).unwrap();
        let res = synthesize(&gen, &TargetSpec::storage(1), &SynthesisOptions::default()).unwrap();
        assert_eq!(res.group.dim(), 4);
        assert_eq!(res.group.delta_t(), 0.01);
        assert!(res.report.distance < 1e-15);
        let json = crate::json::to_string(&res).unwrap();
        let back: SynthesisResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back.group.len(), 2);
    }
}
