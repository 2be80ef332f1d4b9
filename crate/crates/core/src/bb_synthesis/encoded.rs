use crate::error::{Error, Result};
use crate::groups::{enumerate_candidate_groups, klein_groups, pauli_kick_groups, GroupSkeleton};
use crate::linalg::identity;
use crate::open_system::PulseGroup;
use crate::operator_algebra::{adjoint_of, averaged_action, build_pauli_basis, CoordinateVector};

use super::report::check_encoded;
use super::single::ACCEPT_TOL;
use super::target::TargetSpec;
use super::SynthesisResult;

fn catalogue(num_qubits: usize, max_size: usize) -> Result<Vec<GroupSkeleton>> {
    match num_qubits {
        1 | 2 => enumerate_candidate_groups(1 << num_qubits, max_size),
        3 => {
            let mut out = pauli_kick_groups(3);
            if max_size >= 4 {
                out.extend(klein_groups(3));
            }
            Ok(out)
        }
        n => Err(Error::Capacity(format!("encoded search supports up to 3 qubits, got {n}"))),
    }
}

/// Smallest catalogue group whose averaged generator matches the target
/// up to an element of the stabilizer span.
pub fn solve_encoded(
    xi: &CoordinateVector,
    target: &TargetSpec,
    delta_t: f64,
    max_size: usize,
) -> Result<SynthesisResult> {
    let n = xi.basis.num_qubits;
    if target.wanted.basis != xi.basis {
        return Err(Error::Shape("target and generator act on different registers".into()));
    }
    let basis = build_pauli_basis(n)?;
    let mut candidates = vec![GroupSkeleton::new("trivial", vec![identity(1 << n)])];
    candidates.extend(catalogue(n, max_size)?);
    let mut best = f64::INFINITY;
    for sk in candidates {
        let rots = sk
            .pulses
            .iter()
            .map(|p| adjoint_of(p, &basis))
            .collect::<Result<Vec<_>>>()?;
        let achieved = averaged_action(&rots, xi)?;
        let report = check_encoded(&achieved, target)?;
        let d = report.stabilizer_distance.unwrap_or(report.distance);
        if d <= ACCEPT_TOL {
            return Ok(SynthesisResult {
                method: format!("encoded:{}", sk.name),
                group: PulseGroup::new(sk.pulses, delta_t)?,
                achieved,
                report,
                rotation_sets: Vec::new(),
            });
        }
        best = best.min(d);
    }
    Err(Error::NoSolution {
        best_residual: best,
        detail: format!("no catalogue group of at most {max_size} pulses meets the encoded condition"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bb_synthesis::StabilizerSpace;
    use crate::operator_algebra::{BasisId, PauliString};

    fn coords(n: usize, terms: &[(&str, f64)]) -> CoordinateVector {
        let mut v = CoordinateVector::zeros(BasisId { num_qubits: n });
        for (s, x) in terms {
            v.set(&s.parse::<PauliString>().unwrap(), *x);
        }
        v
    }

    #[test]
    fn zz_noise_is_harmless_inside_the_code_space() {
        let xi = coords(2, &[("ZZ", 0.4)]);
        let target = TargetSpec::encoded(
            CoordinateVector::zeros(xi.basis),
            Some(StabilizerSpace::from_labels(&["ZZ"]).unwrap()),
        )
        .unwrap();
        let res = solve_encoded(&xi, &target, 0.01, 4).unwrap();
        assert!(res.group.is_trivial());
    }

    #[test]
    fn local_z_noise_needs_a_kick() {
        let xi = coords(2, &[("ZI", 0.3), ("XX", 0.4)]);
        let target = TargetSpec::encoded(
            CoordinateVector::zeros(xi.basis),
            Some(StabilizerSpace::from_labels(&["XX"]).unwrap()),
        )
        .unwrap();
        let res = solve_encoded(&xi, &target, 0.01, 4).unwrap();
        assert_eq!(res.group.len(), 2);
        assert!(res.report.stabilizer_distance.unwrap() < 1e-12);
        assert!(res.report.distance > 0.1);
    }

    #[test]
    fn three_qubit_search() {
        // no single Pauli anticommutes with X, Y and Z on the first qubit
        let xi = coords(3, &[("ZII", 0.3), ("XII", 0.2), ("YII", -0.1), ("IIX", 0.1)]);
        let target = TargetSpec::encoded(CoordinateVector::zeros(xi.basis), None).unwrap();
        assert!(solve_encoded(&xi, &target, 0.01, 2).is_err());
        let res = solve_encoded(&xi, &target, 0.01, 4).unwrap();
        assert_eq!(res.group.len(), 4);
    }
}
