use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::bb_synthesis::fix_phase;
use crate::error::{Error, Result};
use crate::linalg::{c, identity, kron_all, phase_distance, CMat};
use crate::open_system::PulseGroup;
use crate::operator_algebra::{adjoint_of, build_pauli_basis, canonical_angle, AxisAngle};
use crate::random::{random_axis_angle, random_unit_vector};

/// Pulse set encoded as one axis–angle per qubit for each non-identity
/// pulse; the identity g_0 is implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Genome {
    pub pulses: Vec<Vec<AxisAngle>>,
}

impl Genome {
    pub fn trivial() -> Self {
        Self { pulses: Vec::new() }
    }

    pub fn group_size(&self) -> usize {
        self.pulses.len() + 1
    }

    pub fn random(r: &mut impl Rng, num_qubits: usize, max_size: usize) -> Self {
        let k = r.random_range(2..=max_size.max(2));
        Self {
            pulses: (1..k)
                .map(|_| (0..num_qubits).map(|_| random_axis_angle(r)).collect())
                .collect(),
        }
    }

    pub fn to_group(&self, num_qubits: usize, delta_t: f64) -> Result<PulseGroup> {
        let mut pulses = vec![identity(1 << num_qubits)];
        for p in &self.pulses {
            if p.len() != num_qubits {
                return Err(Error::Shape("genome pulse does not cover the register".into()));
            }
            let factors: Vec<CMat> = p.iter().map(AxisAngle::unitary).collect();
            pulses.push(kron_all(factors.iter()));
        }
        PulseGroup::new(pulses, delta_t)
    }

    /// Encodes a group of local pulses; fails when some pulse does not
    /// factor into single-qubit unitaries.
    pub fn from_group(group: &PulseGroup) -> Result<Self> {
        let n = group.dim().trailing_zeros() as usize;
        let basis = build_pauli_basis(1)?;
        let mut pulses = Vec::new();
        for g in &group.pulses()[1..] {
            let factors = factor_local(g, n)?;
            let aas = factors
                .iter()
                .map(|f| AxisAngle::from_rotation(&adjoint_of(f, &basis)?))
                .collect::<Result<Vec<_>>>()?;
            pulses.push(aas);
        }
        Ok(Self { pulses })
    }

    /// Gaussian perturbation of every axis and angle.
    pub fn mutate(&mut self, r: &mut impl Rng, sigma: f64) {
        let normal = Normal::new(0.0, sigma).expect("finite σ");
        for aa in self.pulses.iter_mut().flatten() {
            let mut axis = aa.axis.map(|x| x + normal.sample(r));
            let len = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
            if len < 1e-12 {
                axis = random_unit_vector(r);
            } else {
                axis = axis.map(|x| x / len);
            }
            *aa = AxisAngle {
                axis,
                angle: canonical_angle(aa.angle + normal.sample(r)),
            };
        }
    }

    /// Grows or shrinks the set by one pulse within [2, max_size].
    pub fn mutate_size(&mut self, r: &mut impl Rng, num_qubits: usize, max_size: usize) {
        let grow = r.random_bool(0.5);
        if grow && self.group_size() < max_size {
            self.pulses.push((0..num_qubits).map(|_| random_axis_angle(r)).collect());
        } else if !grow && self.group_size() > 2 {
            let k = r.random_range(0..self.pulses.len());
            self.pulses.remove(k);
        }
    }

    /// Uniform crossover pulse by pulse; the child takes the first
    /// parent's size.
    pub fn crossover(&self, other: &Self, r: &mut impl Rng) -> Self {
        let pulses = self
            .pulses
            .iter()
            .enumerate()
            .map(|(k, p)| match other.pulses.get(k) {
                Some(q) if r.random_bool(0.5) => q.clone(),
                _ => p.clone(),
            })
            .collect();
        Self { pulses }
    }
}

/// Splits U = u_0 ⊗ … ⊗ u_{n−1} by successive rank-one realignments.
pub fn factor_local(u: &CMat, num_qubits: usize) -> Result<Vec<CMat>> {
    let mut factors = Vec::with_capacity(num_qubits);
    let mut rest = u.clone();
    for _ in 1..num_qubits {
        let d = rest.nrows() / 2;
        // R[(i,j), (k,l)] = U[(i·d + k), (j·d + l)]
        let mut realigned = CMat::zeros(4, d * d);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..d {
                    for l in 0..d {
                        realigned[(i * 2 + j, k * d + l)] = rest[(i * d + k, j * d + l)];
                    }
                }
            }
        }
        let svd = realigned.svd(true, true);
        let (uu, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
        let s = &svd.singular_values;
        let k = (0..s.len()).max_by(|&a, &b| s[a].total_cmp(&s[b])).unwrap_or(0);
        let head = CMat::from_fn(2, 2, |i, j| uu[(i * 2 + j, k)] * c(2f64.sqrt(), 0.0));
        let tail = CMat::from_fn(d, d, |i, j| vt[(k, i * d + j)] * c(s[k] / 2f64.sqrt(), 0.0));
        factors.push(head);
        rest = tail;
    }
    factors.push(rest);
    for f in &mut factors {
        let det = f[(0, 0)] * f[(1, 1)] - f[(0, 1)] * f[(1, 0)];
        if det.norm() > 1e-12 {
            *f /= det.sqrt();
        }
        fix_phase(f);
    }
    let rebuilt = kron_all(factors.iter());
    let err = phase_distance(&rebuilt, u);
    if err > 1e-9 {
        return Err(Error::Domain(format!("pulse is not a product of single-qubit unitaries ({err:.2e})")));
    }
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::kick;
    use crate::linalg::kron;
    use crate::operator_algebra::sigma_x;
    use crate::random::rng;

    #[test]
    fn round_trip_through_group() {
        let mut r = rng(5);
        let g = Genome::random(&mut r, 2, 4);
        let group = g.to_group(2, 0.01).unwrap();
        let back = Genome::from_group(&group).unwrap();
        let again = back.to_group(2, 0.01).unwrap();
        for (a, b) in group.rotations().iter().zip(again.rotations()) {
            assert!((&a.matrix - &b.matrix).norm() < 1e-9);
        }
    }

    #[test]
    fn entangling_pulse_does_not_factor() {
        let mut cnot = identity(4);
        cnot[(2, 2)] = c(0.0, 0.0);
        cnot[(3, 3)] = c(0.0, 0.0);
        cnot[(2, 3)] = c(1.0, 0.0);
        cnot[(3, 2)] = c(1.0, 0.0);
        assert!(factor_local(&cnot, 2).is_err());
        let xx = kron(&sigma_x(), &kick([0.0, 1.0, 0.0]));
        assert_eq!(factor_local(&xx, 2).unwrap().len(), 2);
    }

    #[test]
    fn mutation_keeps_unit_axes_and_size_bounds() {
        let mut r = rng(6);
        let mut g = Genome::random(&mut r, 1, 4);
        for _ in 0..50 {
            g.mutate(&mut r, 0.3);
            g.mutate_size(&mut r, 1, 4);
            assert!((2..=4).contains(&g.group_size()));
            for aa in g.pulses.iter().flatten() {
                let n: f64 = aa.axis.iter().map(|x| x * x).sum();
                assert!((n - 1.0).abs() < 1e-12);
            }
        }
    }
}
