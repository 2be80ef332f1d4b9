use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, RMat};
use crate::operator_algebra::{build_pauli_basis, expand, BasisId, CoordinateVector, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Storage,
    SingleQubit,
    TwoQubit,
    Encoded,
}

/// Real span of Hermitian stabilizer generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStabilizer")]
pub struct StabilizerSpace {
    #[serde(with = "crate::json::complex_matrix_list")]
    generators: Vec<CMat>,
}

#[derive(Deserialize)]
struct RawStabilizer {
    #[serde(with = "crate::json::complex_matrix_list")]
    generators: Vec<CMat>,
}

impl TryFrom<RawStabilizer> for StabilizerSpace {
    type Error = Error;
    fn try_from(raw: RawStabilizer) -> Result<Self> {
        Self::new(raw.generators)
    }
}

impl StabilizerSpace {
    pub fn new(generators: Vec<CMat>) -> Result<Self> {
        if let Some(first) = generators.first() {
            let d = first.nrows();
            for g in &generators {
                if g.shape() != (d, d) {
                    return Err(Error::Shape("stabilizer generators differ in shape".into()));
                }
                crate::linalg::ensure_hermitian(g, "stabilizer generator")?;
            }
        }
        let space = Self { generators };
        let gram = space.gram();
        let rank = gram.clone().svd(false, false).rank(1e-10 * gram.norm().max(1.0));
        if rank != space.generators.len() {
            return Err(Error::Domain(format!(
                "stabilizer generators are linearly dependent (rank {rank} of {})",
                space.generators.len()
            )));
        }
        Ok(space)
    }

    /// Span of Pauli strings given by label, e.g. `["ZZ"]`.
    pub fn from_labels(labels: &[&str]) -> Result<Self> {
        let gens = labels
            .iter()
            .map(|l| l.parse::<PauliString>().map(|s| s.matrix()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(gens)
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// G_ij = Tr(B_i B_j).
    pub fn gram(&self) -> RMat {
        let n = self.generators.len();
        RMat::from_fn(n, n, |i, j| crate::linalg::trace_product(&self.generators[i], &self.generators[j]).re)
    }

    /// Least-squares projection of a Hermitian D onto the span: returns the
    /// coefficients and the residual D − Σ c_i B_i.
    pub fn project(&self, d: &CMat) -> Result<(Vec<f64>, CMat)> {
        if self.generators.is_empty() {
            return Ok((Vec::new(), d.clone()));
        }
        if self.generators[0].shape() != d.shape() {
            return Err(Error::Shape("deviation and stabilizer act on different spaces".into()));
        }
        let rhs = nalgebra::DVector::from_iterator(
            self.generators.len(),
            self.generators.iter().map(|b| crate::linalg::trace_product(b, d).re),
        );
        let coeffs = self
            .gram()
            .svd(true, true)
            .solve(&rhs, 1e-14)
            .map_err(|e| Error::Domain(format!("projection failed: {e}")))?;
        let mut resid = d.clone();
        for (b, &x) in self.generators.iter().zip(coeffs.iter()) {
            resid -= b * c(x, 0.0);
        }
        Ok((coeffs.iter().copied().collect(), resid))
    }
}

/// The wanted effective generator and where it applies.
///
/// `wanted` lives in the basis of the addressed sites: one qubit for
/// storage and single-qubit gates, two for two-qubit targets, and the
/// whole register for encoded targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTarget")]
pub struct TargetSpec {
    pub kind: TargetKind,
    pub sites: Vec<usize>,
    pub wanted: CoordinateVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilizer: Option<StabilizerSpace>,
}

#[derive(Deserialize)]
struct RawTarget {
    kind: TargetKind,
    #[serde(default)]
    sites: Vec<usize>,
    #[serde(default)]
    wanted: Option<WantedJson>,
    #[serde(default)]
    stabilizer: Option<StabilizerSpace>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WantedJson {
    Coords(Vec<f64>),
    Full(CoordinateVector),
    Pair([[f64; 4]; 4]),
}

impl TryFrom<RawTarget> for TargetSpec {
    type Error = Error;
    fn try_from(raw: RawTarget) -> Result<Self> {
        let wanted = match raw.wanted {
            Some(WantedJson::Full(v)) => v,
            Some(WantedJson::Coords(v)) => {
                let n = qubits_for_len(v.len())?;
                CoordinateVector::new(v, BasisId { num_qubits: n })?
            }
            Some(WantedJson::Pair(m)) => crate::tomography::PairMatrix { qubits: (0, 1), matrix: m }.to_coordinates(),
            None => match raw.kind {
                TargetKind::Storage | TargetKind::SingleQubit => CoordinateVector::zeros(BasisId { num_qubits: 1 }),
                TargetKind::TwoQubit => CoordinateVector::zeros(BasisId { num_qubits: 2 }),
                TargetKind::Encoded => {
                    return Err(Error::Config("encoded targets need an explicit wanted vector".into()))
                }
            },
        };
        let sites = if raw.sites.is_empty() {
            match raw.kind {
                TargetKind::Storage | TargetKind::SingleQubit => vec![0],
                TargetKind::TwoQubit => vec![0, 1],
                TargetKind::Encoded => Vec::new(),
            }
        } else {
            raw.sites
        };
        TargetSpec {
            kind: raw.kind,
            sites,
            wanted,
            stabilizer: raw.stabilizer,
        }
        .validated()
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    (1..=crate::operator_algebra::MAX_BASIS_QUBITS)
        .find(|&n| (1usize << (2 * n)) - 1 == len)
        .ok_or_else(|| Error::Shape(format!("{len} coordinates do not match any Pauli basis")))
}

impl TargetSpec {
    fn validated(self) -> Result<Self> {
        let n = self.wanted.basis.num_qubits;
        match self.kind {
            TargetKind::Storage => {
                if self.wanted.coords.iter().any(|&x| x != 0.0) {
                    return Err(Error::Domain("storage targets want a zero generator".into()));
                }
                if self.sites.len() != 1 || n != 1 {
                    return Err(Error::Shape("storage targets address one qubit".into()));
                }
            }
            TargetKind::SingleQubit => {
                if self.sites.len() != 1 || n != 1 {
                    return Err(Error::Shape("single-qubit targets need one site and three coordinates".into()));
                }
            }
            TargetKind::TwoQubit => {
                if self.sites.len() != 2 || self.sites[0] == self.sites[1] || n != 2 {
                    return Err(Error::Shape(
                        "two-qubit targets need two distinct sites and 15 coordinates".into(),
                    ));
                }
            }
            TargetKind::Encoded => {
                if let Some(s) = &self.stabilizer {
                    if let Some(g) = s.generators().first() {
                        if g.nrows() != 1 << n {
                            return Err(Error::Shape("stabilizer and wanted generator differ in size".into()));
                        }
                    }
                }
            }
        }
        Ok(self)
    }

    pub fn storage(qubit: usize) -> Self {
        Self {
            kind: TargetKind::Storage,
            sites: vec![qubit],
            wanted: CoordinateVector::zeros(BasisId { num_qubits: 1 }),
            stabilizer: None,
        }
    }

    pub fn single_qubit(qubit: usize, wanted: [f64; 3]) -> Self {
        Self {
            kind: TargetKind::SingleQubit,
            sites: vec![qubit],
            wanted: CoordinateVector {
                coords: wanted.to_vec(),
                basis: BasisId { num_qubits: 1 },
            },
            stabilizer: None,
        }
    }

    pub fn two_qubit(pair: (usize, usize), wanted: CoordinateVector) -> Result<Self> {
        Self {
            kind: TargetKind::TwoQubit,
            sites: vec![pair.0, pair.1],
            wanted,
            stabilizer: None,
        }
        .validated()
    }

    /// Two-qubit target from a pair matrix w_{αβ} (α on the first site).
    pub fn two_qubit_matrix(pair: (usize, usize), matrix: [[f64; 4]; 4]) -> Result<Self> {
        let v = crate::tomography::PairMatrix { qubits: pair, matrix }.to_coordinates();
        Self::two_qubit(pair, v)
    }

    pub fn encoded(wanted: CoordinateVector, stabilizer: Option<StabilizerSpace>) -> Result<Self> {
        Self {
            kind: TargetKind::Encoded,
            sites: Vec::new(),
            wanted,
            stabilizer,
        }
        .validated()
    }

    /// Generator coordinates of the evolution exp(−iHt): ξ = −expand(H).
    pub fn coordinates_of_hamiltonian(h: &CMat) -> Result<CoordinateVector> {
        let n = h.nrows().trailing_zeros() as usize;
        let mut v = expand(h, &build_pauli_basis(n)?)?;
        v.coords.iter_mut().for_each(|x| *x = -*x);
        Ok(v)
    }

    /// The wanted generator embedded in an `num_qubits` register. Storage
    /// wants the whole register idle.
    pub fn full_wanted(&self, num_qubits: usize) -> Result<CoordinateVector> {
        let basis = BasisId { num_qubits };
        let mut full = CoordinateVector::zeros(basis);
        if self.sites.iter().any(|&s| s >= num_qubits) {
            return Err(Error::Shape(format!("target site outside a {num_qubits}-qubit register")));
        }
        match self.kind {
            TargetKind::Storage => {}
            TargetKind::SingleQubit => {
                for k in 0..3 {
                    full.set(&PauliString::single(num_qubits, self.sites[0], k as u8 + 1), self.wanted.coords[k]);
                }
            }
            TargetKind::TwoQubit => {
                for (idx, &x) in self.wanted.coords.iter().enumerate() {
                    let (a, b) = ((idx + 1) / 4, (idx + 1) % 4);
                    let mut labels = vec![0u8; num_qubits];
                    labels[self.sites[0]] = a as u8;
                    labels[self.sites[1]] = b as u8;
                    full.set(&PauliString::new(labels)?, x);
                }
            }
            TargetKind::Encoded => {
                if self.wanted.basis != basis {
                    return Err(Error::Shape("encoded target does not match the register".into()));
                }
                full = self.wanted.clone();
            }
        }
        Ok(full)
    }
}
