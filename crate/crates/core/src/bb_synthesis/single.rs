use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::groups::kick;
use crate::linalg::{identity, CMat};
use crate::open_system::PulseGroup;
use crate::operator_algebra::{
    averaged_action, canonical_orthogonal_axis, unitary_from_rotation, AxisAngle, BasisId, CoordinateVector,
    RotationConstraints, RotationSolution,
};

use super::report::error_report;
use super::SynthesisResult;

/// Residual below which a constructed group is accepted.
pub const ACCEPT_TOL: f64 = 1e-9;

/// Generators below this norm count as zero.
pub const ZERO_TOL: f64 = 1e-12;

fn one_qubit(v: [f64; 3]) -> CoordinateVector {
    CoordinateVector {
        coords: v.to_vec(),
        basis: BasisId { num_qubits: 1 },
    }
}

fn as_array(v: &CoordinateVector) -> Result<[f64; 3]> {
    if v.basis.num_qubits != 1 {
        return Err(Error::Shape(format!(
            "expected single-qubit coordinates, got {} qubits",
            v.basis.num_qubits
        )));
    }
    Ok([v.coords[0], v.coords[1], v.coords[2]])
}

/// Canonical (n̂, θ) of a rotation set's representative.
fn canonical(sol: &RotationSolution) -> AxisAngle {
    AxisAngle::from_rotation_matrix(&sol.representative().rotation_matrix())
}

fn finish(
    method: &str,
    pulses: Vec<CMat>,
    delta_t: f64,
    xi: &CoordinateVector,
    wanted: &CoordinateVector,
    rotation_sets: Vec<RotationSolution>,
) -> Result<SynthesisResult> {
    let group = PulseGroup::new(pulses, delta_t)?;
    let achieved = averaged_action(group.rotations(), xi)?;
    let report = error_report(&achieved, wanted)?;
    Ok(SynthesisResult {
        method: method.to_string(),
        group,
        achieved,
        report,
        rotation_sets,
    })
}

/// Storage group for one qubit whose generator is ξ.
pub fn solve_storage(xi: &CoordinateVector, delta_t: f64, max_size: usize) -> Result<SynthesisResult> {
    let v = as_array(xi)?;
    solve_storage_vectors(&[v], xi, delta_t, max_size)
}

/// Storage group that annihilates every vector in `constraints`; the
/// result is reported against `xi`.
pub fn solve_storage_vectors(
    constraints: &[[f64; 3]],
    xi: &CoordinateVector,
    delta_t: f64,
    max_size: usize,
) -> Result<SynthesisResult> {
    let zero = CoordinateVector::zeros(BasisId { num_qubits: 1 });
    let scale = constraints
        .iter()
        .map(|v| Vector3::from(*v).norm())
        .fold(0.0, f64::max);
    if scale <= ZERO_TOL {
        return finish("trivial", vec![identity(2)], delta_t, xi, &zero, vec![RotationSolution::Unconstrained]);
    }
    let m = nalgebra::DMatrix::from_fn(3, constraints.len(), |i, j| constraints[j][i] / scale);
    let svd = m.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let rank = order.iter().filter(|&&k| svd.singular_values[k] > ACCEPT_TOL).count();
    let dir = |k: usize| -> [f64; 3] {
        let col = u.column(order[k]);
        [col[0], col[1], col[2]]
    };
    match rank {
        1 => {
            let a = Vector3::from(dir(0));
            let sol = unitary_from_rotation(&RotationConstraints::new().maps(a.into(), (-a).into()))?;
            let aa = canonical(&sol);
            finish("half-turn", vec![identity(2), aa.unitary()], delta_t, xi, &zero, vec![sol])
        }
        2 => {
            let (a, b) = (Vector3::from(dir(0)), Vector3::from(dir(1)));
            let sol = unitary_from_rotation(
                &RotationConstraints::new()
                    .maps(a.into(), (-a).into())
                    .maps(b.into(), (-b).into()),
            )?;
            let aa = canonical(&sol);
            finish("half-turn", vec![identity(2), aa.unitary()], delta_t, xi, &zero, vec![sol])
        }
        _ => {
            if max_size < 4 {
                return Err(Error::NoSolution {
                    best_residual: scale,
                    detail: format!("constraints span three directions; a group of 4 is needed, bound is {max_size}"),
                });
            }
            let pulses = vec![
                identity(2),
                kick([1.0, 0.0, 0.0]),
                kick([0.0, 1.0, 0.0]),
                kick([0.0, 0.0, 1.0]),
            ];
            finish("pauli", pulses, delta_t, xi, &zero, Vec::new())
        }
    }
}

/// Group {I, g_1, …, g_{k−1}} with (1/k)Σ R_jᵀξ = w for a single qubit.
///
/// The rotated copies u_j = R_jᵀξ must sum to s = k·w − ξ and each keep
/// the length of ξ; they are placed on a regular polygon around s.
pub fn solve_single_qubit_gate(
    xi: &CoordinateVector,
    wanted: [f64; 3],
    delta_t: f64,
    max_size: usize,
) -> Result<SynthesisResult> {
    let x = Vector3::from(as_array(xi)?);
    let w = Vector3::from(wanted);
    let (nx, nw) = (x.norm(), w.norm());
    let target = one_qubit(wanted);
    if nw > nx * (1.0 + 1e-12) + 1e-15 {
        return Err(Error::InfeasibleMagnitude {
            wanted: nw,
            measured: nx,
            max_scale: if nw > 0.0 { nx / nw } else { 0.0 },
        });
    }
    if nw < 1e-15 {
        return solve_storage(xi, delta_t, max_size);
    }
    if (x - w).norm() <= ACCEPT_TOL * nx.max(1.0) {
        return finish("trivial", vec![identity(2)], delta_t, xi, &target, vec![RotationSolution::Unconstrained]);
    }
    let xhat = x / nx;
    let mut best = f64::INFINITY;
    for k in 2..=max_size {
        let m = (k - 1) as f64;
        let s = w * k as f64 - x;
        let center = s / m;
        let excess = center.norm() - nx;
        if excess > ACCEPT_TOL * nx || (k == 2 && excess.abs() > ACCEPT_TOL * nx) {
            best = best.min(excess.abs());
            continue;
        }
        let radius = (nx * nx - center.norm_squared()).max(0.0).sqrt();
        let e1 = Vector3::from(canonical_orthogonal_axis(&if s.norm() > 1e-14 { s.into() } else { xhat.into() }));
        let e2 = if s.norm() > 1e-14 { s.normalize().cross(&e1) } else { xhat.cross(&e1) };
        let mut pulses = vec![identity(2)];
        let mut sets = Vec::new();
        for j in 0..k - 1 {
            let phi = 2.0 * PI * j as f64 / m;
            let mut u = center + (e1 * phi.cos() + e2 * phi.sin()) * radius;
            u *= nx / u.norm();
            let sol = unitary_from_rotation(&RotationConstraints::new().maps(xhat.into(), (u / nx).into()))?;
            pulses.push(canonical(&sol).unitary());
            sets.push(sol);
        }
        let res = finish("polygon", pulses, delta_t, xi, &target, sets)?;
        if res.report.distance <= ACCEPT_TOL {
            return Ok(res);
        }
        best = best.min(res.report.distance);
    }
    Err(Error::NoSolution {
        best_residual: best,
        detail: format!("no polygon of at most {max_size} pulses reaches the target"),
    })
}

/// R_jᵀξ for a pulse, as a 3-vector.
pub fn rotated(aa: &AxisAngle, v: [f64; 3]) -> [f64; 3] {
    let r: Matrix3<f64> = aa.rotation_matrix();
    (r.transpose() * Vector3::from(v)).into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn v(a: [f64; 3]) -> CoordinateVector {
        one_qubit(a)
    }

    #[test]
    fn dephasing_gives_x_half_turn() {
        let res = solve_storage(&v([0.0, 0.0, -0.5]), 0.01, 4).unwrap();
        assert_eq!(res.group.len(), 2);
        let aa = res.group.axis_angles().unwrap()[1];
        assert!((aa.angle - FRAC_PI_2).abs() < 1e-12);
        assert!(aa.axis[2].abs() < 1e-12);
        assert!(res.report.distance < 1e-15);
    }

    #[test]
    fn two_directions_fix_the_normal() {
        let xi = v([0.3, 0.0, -0.4]);
        let res = solve_storage_vectors(&[[0.0, 0.0, -0.4], [0.3, 0.0, 0.0]], &xi, 0.01, 4).unwrap();
        let aa = res.group.axis_angles().unwrap()[1];
        assert!((Vector3::from(aa.axis) - Vector3::y()).norm() < 1e-12);
        assert!(res.report.distance < 1e-12);
        assert!(res.rotation_sets[0].is_unique());
    }

    #[test]
    fn generic_vectors_need_the_pauli_group() {
        let xi = v([0.1, 0.2, 0.3]);
        let cons = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(solve_storage_vectors(&cons, &xi, 0.01, 3).is_err());
        let res = solve_storage_vectors(&cons, &xi, 0.01, 4).unwrap();
        assert_eq!(res.group.len(), 4);
        assert!(res.report.distance < 1e-14);
    }

    #[test]
    fn zero_generator_is_left_alone() {
        let res = solve_storage(&v([0.0; 3]), 0.01, 4).unwrap();
        assert!(res.group.is_trivial());
    }

    #[test]
    fn gate_on_the_thales_sphere_needs_two_pulses() {
        // |w|² = w·ξ
        let xi = v([0.0, 0.0, 1.0]);
        let res = solve_single_qubit_gate(&xi, [0.5, 0.0, 0.5], 0.01, 4).unwrap();
        assert_eq!(res.group.len(), 2);
        assert!(res.report.distance < 1e-12);
    }

    #[test]
    fn shorter_gate_uses_a_polygon() {
        let xi = v([0.2, -0.1, 0.6]);
        let w = [0.1, 0.3, 0.0];
        let res = solve_single_qubit_gate(&xi, w, 0.01, 6).unwrap();
        assert!(res.group.len() >= 3);
        assert!(res.report.distance < 1e-9);
        // direct check of the average
        let mut acc = [0.0; 3];
        for aa in res.group.axis_angles().unwrap() {
            let r = rotated(&aa, [0.2, -0.1, 0.6]);
            (0..3).for_each(|k| acc[k] += r[k] / res.group.len() as f64);
        }
        assert!((Vector3::from(acc) - Vector3::from(w)).norm() < 1e-9);
    }

    #[test]
    fn longer_gate_is_rejected_with_scale() {
        let err = solve_single_qubit_gate(&v([0.0, 0.0, 0.5]), [1.0, 0.0, 0.0], 0.01, 4).unwrap_err();
        match err {
            Error::InfeasibleMagnitude { max_scale, .. } => assert!((max_scale - 0.5).abs() < 1e-15),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn matching_gate_is_trivial() {
        let res = solve_single_qubit_gate(&v([0.0, 0.3, 0.0]), [0.0, 0.3, 0.0], 0.01, 4).unwrap();
        assert!(res.group.is_trivial());
        let h = AxisAngle { axis: [1.0, 0.0, 0.0], angle: FRAC_PI_2 };
        assert!((Vector3::from(rotated(&h, [0.0, 0.3, 0.0])) + Vector3::new(0.0, 0.3, 0.0)).norm() < 1e-15);
    }
}
