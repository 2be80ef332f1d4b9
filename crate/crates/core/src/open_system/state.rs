use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, ensure_square, frobenius, identity, kron_all, CMat};

use super::model::check_density;

/// Validated density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDensity")]
pub struct DensityMatrix {
    #[serde(with = "crate::json::complex_matrix")]
    matrix: CMat,
}

#[derive(Deserialize)]
struct RawDensity {
    #[serde(with = "crate::json::complex_matrix")]
    matrix: CMat,
}

impl TryFrom<RawDensity> for DensityMatrix {
    type Error = Error;
    fn try_from(raw: RawDensity) -> Result<Self> {
        Self::new(raw.matrix)
    }
}

impl DensityMatrix {
    pub fn new(matrix: CMat) -> Result<Self> {
        ensure_square(&matrix, "density matrix")?;
        check_density(&matrix, "density matrix")?;
        Ok(Self { matrix })
    }

    /// Skips validation; used for states produced by exact evolution.
    pub(crate) fn trusted(matrix: CMat) -> Self {
        Self { matrix }
    }

    pub fn from_pure(amplitudes: &[crate::linalg::Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::Domain("zero state vector".into()));
        }
        let v = CMat::from_iterator(amplitudes.len(), 1, amplitudes.iter().map(|z| z / norm));
        Ok(Self {
            matrix: &v * v.adjoint(),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: identity(dim) / c(dim as f64, 0.0),
        }
    }

    /// |+⟩⟨+| on every one of `num_qubits` qubits.
    pub fn plus(num_qubits: usize) -> Self {
        let p = CMat::from_element(2, 2, c(0.5, 0.0));
        let factors = vec![&p; num_qubits];
        Self {
            matrix: kron_all(factors),
        }
    }

    /// Single-qubit state with Bloch vector r, ‖r‖ ≤ 1.
    pub fn bloch(r: [f64; 3]) -> Result<Self> {
        let m = (identity(2) + crate::operator_algebra::sigma_dot(&r)) * c(0.5, 0.0);
        Self::new(m)
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace_distance(&self, other: &Self) -> f64 {
        crate::linalg::trace_distance(&self.matrix, &other.matrix)
    }
}

/// Operator-sum representation {A_k} of a channel at time `source_time`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausSet {
    #[serde(with = "crate::json::complex_matrix_list")]
    pub operators: Vec<CMat>,
    pub source_time: f64,
}

impl KrausSet {
    pub fn new(operators: Vec<CMat>, source_time: f64) -> Result<Self> {
        let set = Self {
            operators,
            source_time,
        };
        let n = set.dim().ok_or_else(|| Error::Shape("empty Kraus set".into()))?;
        if set.operators.iter().any(|a| a.shape() != (n, n)) {
            return Err(Error::Shape("Kraus operators differ in shape".into()));
        }
        let defect = set.completeness_defect();
        if defect > 1e-10 {
            return Err(Error::Domain(format!("Kraus set incomplete: |ΣA†A − I| = {defect:.3e}")));
        }
        Ok(set)
    }

    pub fn dim(&self) -> Option<usize> {
        self.operators.first().map(|a| a.nrows())
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn completeness_defect(&self) -> f64 {
        let Some(n) = self.dim() else { return f64::INFINITY };
        let s = self
            .operators
            .iter()
            .fold(CMat::zeros(n, n), |acc, a| acc + a.adjoint() * a);
        frobenius(&(s - identity(n)))
    }

    /// Σ_k A_k X A_k† for any operator X (not only states).
    pub fn apply(&self, x: &CMat) -> CMat {
        let n = x.nrows();
        self.operators
            .iter()
            .fold(CMat::zeros(n, n), |acc, a| acc + a * x * a.adjoint())
    }

    pub fn apply_state(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::trusted(self.apply(rho.matrix()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn states_validate() {
        assert!(DensityMatrix::bloch([0.0, 0.0, 1.0]).is_ok());
        assert!(DensityMatrix::bloch([0.0, 0.9, 0.9]).is_err());
        let p = DensityMatrix::plus(2);
        assert!((crate::linalg::trace(p.matrix()).re - 1.0).abs() < 1e-15);
        assert!(DensityMatrix::from_pure(&[c(1.0, 0.0), c(0.0, 1.0)]).is_ok());
    }

    #[test]
    fn incomplete_kraus_rejected() {
        assert!(KrausSet::new(vec![identity(2) * c(0.5, 0.0)], 0.0).is_err());
        assert!(KrausSet::new(vec![identity(2)], 0.0).is_ok());
    }
}
