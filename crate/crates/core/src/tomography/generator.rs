use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator_algebra::{BasisId, CoordinateVector, PauliString};

use super::qpt::ChiMatrix;

/// Generators with t·‖ξ‖ above this are outside the short-time regime.
pub const SHORT_TIME_LIMIT: f64 = 0.1;

/// Which qubits and pairs to report generators for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitLayout {
    pub num_qubits: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl QubitLayout {
    /// Every unordered pair i < j.
    pub fn all_pairs(num_qubits: usize) -> Self {
        let pairs = (0..num_qubits)
            .flat_map(|i| ((i + 1)..num_qubits).map(move |j| (i, j)))
            .collect();
        Self { num_qubits, pairs }
    }

    pub fn singles(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            pairs: Vec::new(),
        }
    }
}

/// ξ^{ij}_{αβ}, α on qubit i and β on qubit j, 0 = identity; the (0,0)
/// entry is always zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairMatrix {
    pub qubits: (usize, usize),
    pub matrix: [[f64; 4]; 4],
}

impl PairMatrix {
    /// The same numbers as coordinates in the 2-qubit Pauli basis.
    pub fn to_coordinates(&self) -> CoordinateVector {
        let mut coords = vec![0.0; 15];
        for a in 0..4 {
            for b in 0..4 {
                if a + b > 0 {
                    coords[a * 4 + b - 1] = self.matrix[a][b];
                }
            }
        }
        CoordinateVector {
            coords,
            basis: BasisId { num_qubits: 2 },
        }
    }

    pub fn from_coordinates(qubits: (usize, usize), v: &CoordinateVector) -> Result<Self> {
        if v.basis.num_qubits != 2 {
            return Err(Error::Shape("pair matrix needs 2-qubit coordinates".into()));
        }
        let mut matrix = [[0.0; 4]; 4];
        for (k, &x) in v.coords.iter().enumerate() {
            matrix[(k + 1) / 4][(k + 1) % 4] = x;
        }
        Ok(Self { qubits, matrix })
    }
}

/// Short-time generator coordinates ξ_α = Im χ_{α,0} / t, in rate units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveGenerator {
    /// All non-identity Pauli strings of the register.
    pub full: CoordinateVector,
    /// Weight-one part, one (x, y, z) triple per qubit.
    pub xi: Vec<[f64; 3]>,
    pub pairs: Vec<PairMatrix>,
    pub time_scale: f64,
}

impl EffectiveGenerator {
    /// Assembles the per-qubit and pair views from full coordinates.
    pub fn from_coordinates(full: CoordinateVector, time_scale: f64, layout: &QubitLayout) -> Result<Self> {
        let n = full.basis.num_qubits;
        if layout.num_qubits != n {
            return Err(Error::Shape(format!(
                "layout has {} qubits, coordinates {n}",
                layout.num_qubits
            )));
        }
        let xi = (0..n)
            .map(|q| {
                let mut v = [0.0; 3];
                for (k, x) in v.iter_mut().enumerate() {
                    *x = full.get(&PauliString::single(n, q, k as u8 + 1)).unwrap_or(0.0);
                }
                v
            })
            .collect();
        let pairs = layout
            .pairs
            .iter()
            .map(|&(i, j)| {
                if i == j || i >= n || j >= n {
                    return Err(Error::Shape(format!("invalid qubit pair ({i}, {j})")));
                }
                Ok(PairMatrix {
                    qubits: (i, j),
                    matrix: pair_block(&full, i, j),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            full,
            xi,
            pairs,
            time_scale,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.full.basis.num_qubits
    }

    /// Single-qubit coordinates of `qubit` as a 1-qubit vector.
    pub fn single(&self, qubit: usize) -> Result<CoordinateVector> {
        let v = self
            .xi
            .get(qubit)
            .ok_or_else(|| Error::Shape(format!("no qubit {qubit}")))?;
        CoordinateVector::new(v.to_vec(), BasisId { num_qubits: 1 })
    }

    /// Pair coordinates of (i, j) in the 2-qubit basis, computed from the
    /// full coordinates whether or not the layout listed the pair.
    pub fn pair(&self, i: usize, j: usize) -> Result<PairMatrix> {
        let n = self.num_qubits();
        if i == j || i >= n || j >= n {
            return Err(Error::Shape(format!("invalid qubit pair ({i}, {j})")));
        }
        Ok(PairMatrix {
            qubits: (i, j),
            matrix: pair_block(&self.full, i, j),
        })
    }
}

fn pair_block(full: &CoordinateVector, i: usize, j: usize) -> [[f64; 4]; 4] {
    let n = full.basis.num_qubits;
    let mut m = [[0.0; 4]; 4];
    for (a, row) in m.iter_mut().enumerate() {
        for (b, x) in row.iter_mut().enumerate() {
            if a + b == 0 {
                continue;
            }
            let mut idx = vec![0u8; n];
            idx[i] = a as u8;
            idx[j] = b as u8;
            let s = PauliString::new(idx).expect("valid labels");
            *x = full.get(&s).unwrap_or(0.0);
        }
    }
    m
}

/// Reads ξ_α = Im χ_{α,0}/t off a χ-matrix measured at t = `time_tag`.
pub fn extract_generator(chi: &ChiMatrix, layout: &QubitLayout) -> Result<EffectiveGenerator> {
    let t = chi.time_tag;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::DegenerateTime);
    }
    let coords: Vec<f64> = (1..chi.entries.nrows()).map(|a| chi.entries[(a, 0)].im / t).collect();
    let full = CoordinateVector::new(coords, chi.basis)?;
    if t * full.norm() > SHORT_TIME_LIMIT {
        log::warn!(
            "probe time {t:.3e} with generator norm {:.3e} is outside the short-time regime",
            full.norm()
        );
    }
    EffectiveGenerator::from_coordinates(full, t, layout)
}
