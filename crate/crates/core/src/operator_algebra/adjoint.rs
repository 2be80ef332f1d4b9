use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_dim, ensure_unitary, tolerances, trace_product, CMat, RMat};

use super::pauli::{CoordinateVector, OperatorBasis};

/// Real orthogonal matrix R of the adjoint representation, defined by
/// U†λ_iU = Σ_j R_ij λ_j over the traceless basis elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjointRotation {
    #[serde(with = "crate::json::real_matrix")]
    pub matrix: RMat,
    /// Hilbert-space dimension n of the SU(n) element this represents.
    pub source_dim: usize,
}

impl AdjointRotation {
    pub fn identity(source_dim: usize) -> Self {
        let big_n = source_dim * source_dim - 1;
        Self {
            matrix: RMat::identity(big_n, big_n),
            source_dim,
        }
    }

    /// Wraps a matrix after checking RᵀR = I and det R = +1.
    pub fn from_matrix(matrix: RMat, source_dim: usize) -> Result<Self> {
        let big_n = source_dim * source_dim - 1;
        if matrix.nrows() != big_n || matrix.ncols() != big_n {
            return Err(Error::Shape(format!(
                "adjoint of SU({source_dim}) is {big_n}x{big_n}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let r = Self { matrix, source_dim };
        let tol = tolerances().orthogonality;
        if r.orthogonality_defect() > tol || (r.determinant() - 1.0).abs() > tol {
            return Err(Error::Domain(format!(
                "matrix is not a proper rotation (|RtR - I| = {:.3e}, det = {:.6})",
                r.orthogonality_defect(),
                r.determinant()
            )));
        }
        Ok(r)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim();
        (self.matrix.transpose() * &self.matrix - RMat::identity(n, n)).norm()
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.clone().determinant()
    }

    /// Coordinates of U†(Σ v_i λ_i)U, i.e. Rᵀv.
    pub fn conjugate_coords(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|j| (0..n).map(|i| v[i] * self.matrix[(i, j)]).sum())
            .collect()
    }
}

/// Adjoint rotation of a unitary: R_ij = Tr(λ_j·U†λ_iU)/M.
pub fn adjoint_of(unitary: &CMat, basis: &OperatorBasis) -> Result<AdjointRotation> {
    ensure_dim(unitary, basis.dim(), "unitary")?;
    ensure_unitary(unitary, "unitary")?;
    Ok(adjoint_unchecked(unitary, basis))
}

pub(crate) fn adjoint_unchecked(unitary: &CMat, basis: &OperatorBasis) -> AdjointRotation {
    let gens = basis.generators();
    let n = gens.len();
    let m = basis.normalization();
    let u_dag = unitary.adjoint();
    let mut matrix = RMat::zeros(n, n);
    for (i, li) in gens.iter().enumerate() {
        let conj = &u_dag * li * unitary;
        for (j, lj) in gens.iter().enumerate() {
            matrix[(i, j)] = trace_product(lj, &conj).re / m;
        }
    }
    AdjointRotation {
        matrix,
        source_dim: basis.dim(),
    }
}

/// Average (1/|G|)·Σ_k Rᵀ_k v of the conjugated coordinates, i.e. the
/// coordinates of (1/|G|)Σ_k U_k†(v·λ)U_k.
pub fn averaged_action(rotations: &[AdjointRotation], v: &CoordinateVector) -> Result<CoordinateVector> {
    if rotations.is_empty() {
        return Err(Error::Shape("empty rotation list".into()));
    }
    let mut acc = vec![0.0; v.len()];
    for r in rotations {
        if r.dim() != v.len() {
            return Err(Error::Shape(format!(
                "rotation of size {} applied to {} coordinates",
                r.dim(),
                v.len()
            )));
        }
        for (a, x) in acc.iter_mut().zip(r.conjugate_coords(&v.coords)) {
            *a += x;
        }
    }
    let k = rotations.len() as f64;
    CoordinateVector::new(acc.into_iter().map(|x| x / k).collect(), v.basis)
}
