use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, ensure_dim, ensure_hermitian, identity, kron_all, trace, trace_product, CMat};

/// Largest register for which the full Pauli basis is materialized.
pub const MAX_BASIS_QUBITS: usize = 8;

pub fn sigma_x() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn sigma_y() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn sigma_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

/// Single-qubit Pauli matrix for label 0 = I, 1 = x, 2 = y, 3 = z.
pub fn pauli(label: u8) -> CMat {
    match label {
        0 => identity(2),
        1 => sigma_x(),
        2 => sigma_y(),
        3 => sigma_z(),
        _ => panic!("Pauli label out of range: {label}"),
    }
}

/// n̂·σ⃗ for a real 3-vector.
pub fn sigma_dot(v: &[f64; 3]) -> CMat {
    sigma_x() * c(v[0], 0.0) + sigma_y() * c(v[1], 0.0) + sigma_z() * c(v[2], 0.0)
}

/// Tensor product of per-qubit Pauli labels; qubit 0 is the leftmost factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliString {
    indices: Vec<u8>,
}

impl PauliString {
    pub fn new(indices: Vec<u8>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Shape("Pauli string needs at least one qubit".into()));
        }
        if let Some(bad) = indices.iter().find(|&&a| a > 3) {
            return Err(Error::Domain(format!("Pauli label {bad} not in 0..=3")));
        }
        Ok(Self { indices })
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self {
            indices: vec![0; num_qubits],
        }
    }

    /// The string acting with `label` on `qubit` and identity elsewhere.
    pub fn single(num_qubits: usize, qubit: usize, label: u8) -> Self {
        let mut indices = vec![0; num_qubits];
        indices[qubit] = label;
        Self { indices }
    }

    pub fn indices(&self) -> &[u8] {
        &self.indices
    }

    pub fn num_qubits(&self) -> usize {
        self.indices.len()
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.indices.iter().filter(|&&a| a != 0).count()
    }

    /// Qubits on which the string acts non-trivially.
    pub fn support(&self) -> Vec<usize> {
        self.indices
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(q, _)| q)
            .collect()
    }

    pub fn matrix(&self) -> CMat {
        let factors: Vec<CMat> = self.indices.iter().map(|&a| pauli(a)).collect();
        kron_all(factors.iter())
    }

    /// Position in the lexicographic ordering of all strings of this length.
    pub fn ordinal(&self) -> usize {
        self.indices.iter().fold(0, |acc, &a| acc * 4 + a as usize)
    }

    pub fn from_ordinal(num_qubits: usize, mut ordinal: usize) -> Self {
        let mut indices = vec![0u8; num_qubits];
        for slot in indices.iter_mut().rev() {
            *slot = (ordinal % 4) as u8;
            ordinal /= 4;
        }
        Self { indices }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &a in &self.indices {
            let ch = ['I', 'X', 'Y', 'Z'][a as usize];
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let indices = s
            .chars()
            .map(|ch| match ch.to_ascii_uppercase() {
                'I' => Ok(0),
                'X' => Ok(1),
                'Y' => Ok(2),
                'Z' => Ok(3),
                other => Err(Error::Domain(format!("unknown Pauli label {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(indices)
    }
}

/// Identifies the fixed operator basis a coordinate vector refers to.
///
/// Only Pauli-string bases exist, so the register size pins the basis down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisId {
    pub num_qubits: usize,
}

impl BasisId {
    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    /// Number of traceless generators, n² − 1.
    pub fn num_generators(&self) -> usize {
        (1usize << (2 * self.num_qubits)) - 1
    }

    pub fn normalization(&self) -> f64 {
        self.dim() as f64
    }
}

/// Hermitian, trace-orthogonal operator basis; element 0 is the identity.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    strings: Vec<PauliString>,
    elements: Vec<CMat>,
    normalization: f64,
    dim: usize,
}

/// All 4^N Pauli strings on `num_qubits` qubits in lexicographic order, with M = 2^N.
pub fn build_pauli_basis(num_qubits: usize) -> Result<OperatorBasis> {
    if num_qubits == 0 {
        return Err(Error::Domain("basis needs at least one qubit".into()));
    }
    if num_qubits > MAX_BASIS_QUBITS {
        return Err(Error::Capacity(format!(
            "{num_qubits} qubits exceeds the {MAX_BASIS_QUBITS}-qubit basis limit"
        )));
    }
    let count = 1usize << (2 * num_qubits);
    let strings: Vec<PauliString> = (0..count)
        .map(|k| PauliString::from_ordinal(num_qubits, k))
        .collect();
    let elements = strings.iter().map(PauliString::matrix).collect();
    Ok(OperatorBasis {
        strings,
        elements,
        normalization: (1usize << num_qubits) as f64,
        dim: 1 << num_qubits,
    })
}

impl OperatorBasis {
    pub fn id(&self) -> BasisId {
        BasisId {
            num_qubits: self.num_qubits(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.strings[0].num_qubits()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Number of elements including the identity.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> &CMat {
        &self.elements[index]
    }

    /// The traceless elements (everything but the identity).
    pub fn generators(&self) -> &[CMat] {
        &self.elements[1..]
    }

    pub fn strings(&self) -> &[PauliString] {
        &self.strings
    }

    pub fn labels(&self) -> Vec<String> {
        self.strings.iter().map(ToString::to_string).collect()
    }

    /// Index of a string among all elements (identity at 0).
    pub fn index_of(&self, s: &PauliString) -> Option<usize> {
        (s.num_qubits() == self.num_qubits()).then(|| s.ordinal())
    }

    /// Complex coefficients Tr(K_α·A)/M over every element, identity included.
    pub fn expand_complex(&self, a: &CMat) -> Result<Vec<Complex64>> {
        ensure_dim(a, self.dim, "operator")?;
        Ok(self
            .elements
            .iter()
            .map(|k| trace_product(k, a) / self.normalization)
            .collect())
    }

    /// Σ_α coeffs_α K_α over every element, identity included.
    pub fn combine_complex(&self, coeffs: &[Complex64]) -> Result<CMat> {
        if coeffs.len() != self.len() {
            return Err(Error::Shape(format!(
                "expected {} coefficients, got {}",
                self.len(),
                coeffs.len()
            )));
        }
        let mut out = CMat::zeros(self.dim, self.dim);
        for (k, &w) in self.elements.iter().zip(coeffs) {
            if w != Complex64::new(0.0, 0.0) {
                out += k * w;
            }
        }
        Ok(out)
    }
}

/// Real coordinates of a traceless Hermitian operator over the non-identity
/// basis elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateVector {
    pub coords: Vec<f64>,
    pub basis: BasisId,
}

impl CoordinateVector {
    pub fn new(coords: Vec<f64>, basis: BasisId) -> Result<Self> {
        if coords.len() != basis.num_generators() {
            return Err(Error::Shape(format!(
                "{}-qubit basis needs {} coordinates, got {}",
                basis.num_qubits,
                basis.num_generators(),
                coords.len()
            )));
        }
        Ok(Self { coords, basis })
    }

    pub fn zeros(basis: BasisId) -> Self {
        Self {
            coords: vec![0.0; basis.num_generators()],
            basis,
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Coordinate of a Pauli string (identity has no coordinate).
    pub fn get(&self, s: &PauliString) -> Option<f64> {
        let k = s.ordinal();
        (k > 0 && s.num_qubits() == self.basis.num_qubits).then(|| self.coords[k - 1])
    }

    pub fn set(&mut self, s: &PauliString, value: f64) {
        let k = s.ordinal();
        assert!(k > 0, "identity has no coordinate");
        self.coords[k - 1] = value;
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::Shape("coordinate vectors refer to different bases".into()));
        }
        Ok(Self {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
            basis: self.basis,
        })
    }

    /// Σ_i coords_i λ_i as a dense matrix.
    pub fn to_matrix(&self, basis: &OperatorBasis) -> Result<CMat> {
        reconstruct(self, basis, 0.0)
    }
}

/// Expansion coefficients coords_i = Tr(λ_i·A)/M of a Hermitian operator.
pub fn expand(operator: &CMat, basis: &OperatorBasis) -> Result<CoordinateVector> {
    ensure_dim(operator, basis.dim(), "operator")?;
    ensure_hermitian(operator, "operator")?;
    let coords = basis
        .generators()
        .iter()
        .map(|k| trace_product(k, operator).re / basis.normalization())
        .collect();
    Ok(CoordinateVector {
        coords,
        basis: basis.id(),
    })
}

/// Σ_i coords_i λ_i + (trace/n)·I.
pub fn reconstruct(v: &CoordinateVector, basis: &OperatorBasis, trace_value: f64) -> Result<CMat> {
    if v.basis != basis.id() {
        return Err(Error::Shape("coordinate vector does not match basis".into()));
    }
    let n = basis.dim();
    let mut out = identity(n) * c(trace_value / n as f64, 0.0);
    for (k, &x) in basis.generators().iter().zip(&v.coords) {
        if x != 0.0 {
            out += k * c(x, 0.0);
        }
    }
    Ok(out)
}

/// Trace of an operator as a real number (imaginary part dropped).
pub fn real_trace(a: &CMat) -> f64 {
    trace(a).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;
    use crate::random::{random_hermitian, rng};

    #[test]
    fn one_qubit_basis_is_identity_then_paulis() {
        let basis = build_pauli_basis(1).unwrap();
        assert_eq!(basis.len(), 4);
        assert_eq!(basis.normalization(), 2.0);
        assert_eq!(basis.labels(), vec!["I", "X", "Y", "Z"]);
        assert!(frobenius(&(basis.element(3) - sigma_z())) == 0.0);
    }

    #[test]
    fn two_qubit_basis_trace_orthogonal() {
        let basis = build_pauli_basis(2).unwrap();
        assert_eq!(basis.len(), 16);
        for (a, ka) in basis.elements().iter().enumerate() {
            for (b, kb) in basis.elements().iter().enumerate() {
                let expected = if a == b { 4.0 } else { 0.0 };
                assert!((trace_product(ka, kb) - c(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn three_qubit_basis_exhaustive_orthogonality() {
        let basis = build_pauli_basis(3).unwrap();
        assert_eq!(basis.len(), 64);
        let mut worst: f64 = 0.0;
        for a in 0..64 {
            for b in 0..64 {
                let expected = if a == b { 8.0 } else { 0.0 };
                let t = trace_product(basis.element(a), basis.element(b));
                worst = worst.max((t - c(expected, 0.0)).norm());
            }
        }
        assert!(worst < 1e-12, "worst deviation {worst}");
        for k in basis.generators() {
            assert!(trace(k).norm() < 1e-12);
        }
    }

    #[test]
    fn basis_size_guard() {
        assert!(matches!(build_pauli_basis(9), Err(Error::Capacity(_))));
        assert!(matches!(build_pauli_basis(0), Err(Error::Domain(_))));
    }

    #[test]
    fn pauli_string_weight_and_label() {
        let s: PauliString = "XIZ".parse().unwrap();
        assert_eq!(s.weight(), 2);
        assert_eq!(s.indices(), &[1, 0, 3]);
        assert_eq!(s.support(), vec![0, 2]);
        assert_eq!(PauliString::from_ordinal(3, s.ordinal()), s);
        let m = s.matrix();
        assert!(crate::linalg::unitarity_defect(&m) < 1e-14);
        assert!(crate::linalg::hermitian_defect(&m) < 1e-14);
    }

    #[test]
    fn expand_basis_elements() {
        let basis = build_pauli_basis(1).unwrap();
        assert_eq!(expand(&sigma_z(), &basis).unwrap().coords, vec![0.0, 0.0, 1.0]);
        let h = (sigma_x() + sigma_y()) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let v = expand(&h, &basis).unwrap();
        assert!((v.coords[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((v.coords[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(v.coords[2], 0.0);
    }

    #[test]
    fn expand_reconstructs_random_hermitian() {
        let basis = build_pauli_basis(2).unwrap();
        let mut r = rng(7);
        for _ in 0..20 {
            let h = random_hermitian(&mut r, 4);
            let v = expand(&h, &basis).unwrap();
            let back = reconstruct(&v, &basis, real_trace(&h)).unwrap();
            assert!(frobenius(&(back - &h)) < 1e-12);
        }
    }

    #[test]
    fn expand_rejects_bad_input() {
        let basis = build_pauli_basis(1).unwrap();
        assert!(matches!(expand(&identity(4), &basis), Err(Error::Shape(_))));
        let skew = sigma_x() * c(0.0, 1.0);
        assert!(matches!(expand(&skew, &basis), Err(Error::Domain(_))));
    }
}
