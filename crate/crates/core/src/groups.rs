//! Catalogue of discrete pulse sets: parity kicks, Pauli groups, cyclic
//! groups and (for two qubits) local products and Klein four-groups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, identity, kron, kron_all, CMat};
use crate::open_system::PulseGroup;
use crate::operator_algebra::{pauli, AxisAngle, PauliString};

/// A pulse set without a pulse interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSkeleton {
    pub name: String,
    #[serde(with = "crate::json::complex_matrix_list")]
    pub pulses: Vec<CMat>,
}

impl GroupSkeleton {
    pub fn new(name: impl Into<String>, pulses: Vec<CMat>) -> Self {
        Self {
            name: name.into(),
            pulses,
        }
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.pulses.first().map_or(0, |p| p.nrows())
    }

    pub fn with_delta_t(&self, delta_t: f64) -> Result<PulseGroup> {
        PulseGroup::new(self.pulses.clone(), delta_t)
    }
}

/// The 26 directions with components in {−1, 0, 1}, normalized; ordered
/// by number of non-zero components, then lexicographically.
pub fn default_axis_grid() -> Vec<[f64; 3]> {
    let mut dirs: Vec<[i32; 3]> = Vec::new();
    for a in -1..=1 {
        for b in -1..=1 {
            for c in -1..=1 {
                if (a, b, c) != (0, 0, 0) {
                    dirs.push([a, b, c]);
                }
            }
        }
    }
    dirs.sort_by_key(|d| {
        let nz = d.iter().filter(|&&x| x != 0).count();
        (nz, d.map(|x| -x))
    });
    dirs.iter()
        .map(|d| {
            let n = ((d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) as f64).sqrt();
            [d[0] as f64 / n, d[1] as f64 / n, d[2] as f64 / n]
        })
        .collect()
}

/// e^{i n̂·σ π/2} = i n̂·σ.
pub fn kick(axis: [f64; 3]) -> CMat {
    AxisAngle {
        axis,
        angle: std::f64::consts::FRAC_PI_2,
    }
    .unitary()
}

/// i^{weight}·P for a Pauli string: the product of single-qubit kicks.
pub fn pauli_kick(s: &PauliString) -> CMat {
    let factors: Vec<CMat> = s
        .indices()
        .iter()
        .map(|&a| if a == 0 { identity(2) } else { pauli(a) * c(0.0, 1.0) })
        .collect();
    kron_all(factors.iter())
}

const AXES: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

fn label(v: [f64; 3]) -> String {
    format!("({:+.3},{:+.3},{:+.3})", v[0], v[1], v[2])
}

fn parity_kicks(grid: &[[f64; 3]]) -> Vec<GroupSkeleton> {
    let mut seen: Vec<[f64; 3]> = Vec::new();
    let mut out = Vec::new();
    for &n in grid {
        // ±n̂ give the same kick up to a global sign
        if seen.iter().any(|m| (0..3).all(|k| (m[k] + n[k]).abs() < 1e-12)) {
            continue;
        }
        seen.push(n);
        out.push(GroupSkeleton::new(format!("kick{}", label(n)), vec![identity(2), kick(n)]));
    }
    out
}

fn cyclic(axis_index: usize, order: usize) -> GroupSkeleton {
    let axis = AXES[axis_index];
    let pulses = (0..order)
        .map(|k| {
            AxisAngle {
                axis,
                angle: std::f64::consts::PI * k as f64 / order as f64,
            }
            .unitary()
        })
        .collect();
    GroupSkeleton::new(format!("C{order}-{}", ['x', 'y', 'z'][axis_index]), pulses)
}

fn pauli_group_1q() -> GroupSkeleton {
    let mut pulses = vec![identity(2)];
    pulses.extend(AXES.iter().map(|&a| kick(a)));
    GroupSkeleton::new("pauli", pulses)
}

/// Kick pairs {I, i^w P} for every non-identity Pauli string P of `n` qubits.
pub fn pauli_kick_groups(n: usize) -> Vec<GroupSkeleton> {
    (1..(1usize << (2 * n)))
        .map(|k| {
            let s = PauliString::from_ordinal(n, k);
            GroupSkeleton::new(format!("kick-{s}"), vec![identity(1 << n), pauli_kick(&s)])
        })
        .collect()
}

/// Order-four groups {I, A, B, AB} of Pauli kicks on `n` qubits, one per
/// distinct subgroup, in order of their generating strings.
pub fn klein_groups(n: usize) -> Vec<GroupSkeleton> {
    let count = 1usize << (2 * n);
    let mut seen: Vec<[usize; 3]> = Vec::new();
    let mut out = Vec::new();
    for a in 1..count {
        for b in (a + 1)..count {
            let mut key = [a, b, product_ordinal(n, a, b)];
            key.sort_unstable();
            if seen.contains(&key) {
                continue;
            }
            seen.push(key);
            let sa = PauliString::from_ordinal(n, a);
            let sb = PauliString::from_ordinal(n, b);
            let ka = pauli_kick(&sa);
            let kb = pauli_kick(&sb);
            let kab = &ka * &kb;
            out.push(GroupSkeleton::new(
                format!("klein-{sa}-{sb}"),
                vec![identity(1 << n), ka, kb, kab],
            ));
        }
    }
    out
}

/// Ordinal of P_a·P_b up to phase. With 1=x, 2=y, 3=z the product of two
/// single-qubit labels is their xor.
fn product_ordinal(n: usize, a: usize, b: usize) -> usize {
    let sa = PauliString::from_ordinal(n, a);
    let sb = PauliString::from_ordinal(n, b);
    let prod = sa.indices().iter().zip(sb.indices()).map(|(&p, &q)| p ^ q).collect();
    PauliString::new(prod).expect("labels stay in 0..4").ordinal()
}

/// Candidate pulse sets of at most `max_size` elements for a 1-qubit
/// (dim 2) or 2-qubit (dim 4) register.
pub fn enumerate_candidate_groups(dim: usize, max_size: usize) -> Result<Vec<GroupSkeleton>> {
    enumerate_with_grid(dim, max_size, &default_axis_grid())
}

pub fn enumerate_with_grid(dim: usize, max_size: usize, grid: &[[f64; 3]]) -> Result<Vec<GroupSkeleton>> {
    if max_size < 2 {
        return Err(Error::Domain(format!("group size bound must be at least 2, got {max_size}")));
    }
    let mut out = Vec::new();
    match dim {
        2 => {
            out.extend(parity_kicks(grid));
            for order in 3..=max_size.min(8) {
                for k in 0..3 {
                    out.push(cyclic(k, order));
                }
                if order == 4 {
                    out.push(pauli_group_1q());
                }
            }
        }
        4 => {
            out.extend(pauli_kick_groups(2));
            if max_size >= 3 {
                for k in 0..3 {
                    for q in 0..2 {
                        let g = cyclic(k, 3);
                        let pulses = g
                            .pulses
                            .iter()
                            .map(|p| if q == 0 { kron(p, &identity(2)) } else { kron(&identity(2), p) })
                            .collect();
                        out.push(GroupSkeleton::new(format!("{}-on-{q}", g.name), pulses));
                    }
                }
            }
            if max_size >= 4 {
                out.extend(klein_groups(2));
            }
        }
        _ => {
            return Err(Error::Shape(format!("candidate groups exist for dim 2 or 4, got {dim}")));
        }
    }
    out.retain(|g| g.len() <= max_size);
    out.sort_by_key(GroupSkeleton::len);
    Ok(out)
}
