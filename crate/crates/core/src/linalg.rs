//! Dense complex matrix helpers shared by every module.
//!
//! Everything is built on `nalgebra::DMatrix<Complex64>`. Qubit 0 is the
//! most significant tensor factor, and composite system–bath spaces are
//! ordered system ⊗ bath.

use std::sync::RwLock;

use nalgebra::{DMatrix, SymmetricEigen};
pub use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;

/// Global numerical tolerances for structural checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum ‖A − A†‖_F accepted for a Hermitian input.
    pub hermiticity: f64,
    /// Maximum ‖U†U − I‖_F (and ‖RᵀR − I‖_F) accepted for unitaries and rotations.
    pub orthogonality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            orthogonality: 1e-10,
        }
    }
}

static TOLERANCES: RwLock<Tolerances> = RwLock::new(Tolerances {
    hermiticity: 1e-10,
    orthogonality: 1e-10,
});

pub fn tolerances() -> Tolerances {
    *TOLERANCES.read().unwrap_or_else(|e| e.into_inner())
}

pub fn set_tolerances(tol: Tolerances) {
    *TOLERANCES.write().unwrap_or_else(|e| e.into_inner()) = tol;
}

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(n: usize) -> CMat {
    CMat::zeros(n, n)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a CMat>) -> CMat {
    factors
        .into_iter()
        .fold(CMat::identity(1, 1), |acc, f| acc.kronecker(f))
}

pub fn trace(a: &CMat) -> Complex64 {
    a.diagonal().sum()
}

/// Tr(a·b) without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

pub fn hermitian_defect(a: &CMat) -> f64 {
    frobenius(&(a - a.adjoint()))
}

pub fn unitarity_defect(u: &CMat) -> f64 {
    frobenius(&(u.adjoint() * u - identity(u.nrows())))
}

pub fn ensure_square(a: &CMat, what: &str) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::Shape(format!(
            "{what} must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(a.nrows())
}

pub fn ensure_dim(a: &CMat, dim: usize, what: &str) -> Result<()> {
    if a.nrows() != dim || a.ncols() != dim {
        return Err(Error::Shape(format!(
            "{what} must be {dim}x{dim}, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

pub fn ensure_hermitian(a: &CMat, what: &str) -> Result<()> {
    ensure_square(a, what)?;
    let defect = hermitian_defect(a);
    if defect > tolerances().hermiticity {
        return Err(Error::Domain(format!(
            "{what} is not Hermitian (|A - A^dag| = {defect:.3e})"
        )));
    }
    Ok(())
}

pub fn ensure_unitary(u: &CMat, what: &str) -> Result<()> {
    ensure_square(u, what)?;
    let defect = unitarity_defect(u);
    if defect > tolerances().orthogonality {
        return Err(Error::Domain(format!(
            "{what} is not unitary (|U^dag U - I| = {defect:.3e})"
        )));
    }
    Ok(())
}

/// Hermitian part (A + A†)/2.
pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

/// Matrix exponential (scaling and squaring with Padé approximants).
pub fn expm(a: &CMat) -> CMat {
    a.clone().exp()
}

/// exp(−i·H·t) for a Hermitian H.
pub fn evolution_operator(h: &CMat, t: f64) -> CMat {
    expm(&(h * c(0.0, -t)))
}

/// Eigen-decomposition of a Hermitian matrix (ascending order not guaranteed).
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let eig = SymmetricEigen::new(hermitian_part(a));
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Trace over the second factor of a `dim_a ⊗ dim_b` operator.
pub fn partial_trace_second(m: &CMat, dim_a: usize, dim_b: usize) -> CMat {
    let mut out = zeros(dim_a);
    for i in 0..dim_a {
        for j in 0..dim_a {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim_b {
                acc += m[(i * dim_b + k, j * dim_b + k)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// ½‖ρ − σ‖₁ for Hermitian arguments.
pub fn trace_distance(rho: &CMat, sigma: &CMat) -> f64 {
    let (vals, _) = hermitian_eigen(&(rho - sigma));
    0.5 * vals.iter().map(|v| v.abs()).sum::<f64>()
}

/// Place a single-qubit operator on `qubit` of an `num_qubits` register.
pub fn embed_single(op: &CMat, qubit: usize, num_qubits: usize) -> CMat {
    let id2 = identity(2);
    let factors: Vec<&CMat> = (0..num_qubits)
        .map(|q| if q == qubit { op } else { &id2 })
        .collect();
    kron_all(factors)
}

/// Minimum of ‖a − e^{iφ} b‖_F over global phases φ.
pub fn phase_distance(a: &CMat, b: &CMat) -> f64 {
    let overlap = trace_product(&b.adjoint(), a);
    if overlap.norm() < 1e-300 {
        return frobenius(&(a - b));
    }
    let phase = overlap / overlap.norm();
    frobenius(&(a - b * phase))
}

pub fn is_identity(a: &CMat, tol: f64) -> bool {
    a.nrows() == a.ncols() && frobenius(&(a - identity(a.nrows()))) <= tol
}
