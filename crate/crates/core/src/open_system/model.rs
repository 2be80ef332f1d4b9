use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_hermitian, ensure_square, hermitian_eigen, identity, kron, trace, CMat};
use crate::operator_algebra::{build_pauli_basis, PauliString};

/// One interaction term S_γ ⊗ B_γ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    #[serde(with = "crate::json::complex_matrix")]
    pub system: CMat,
    #[serde(with = "crate::json::complex_matrix")]
    pub bath: CMat,
}

impl Coupling {
    pub fn new(system: CMat, bath: CMat) -> Self {
        Self {
            name: String::new(),
            system,
            bath,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

#[derive(Deserialize)]
struct RawModel {
    #[serde(with = "crate::json::complex_matrix")]
    system_hamiltonian: CMat,
    #[serde(with = "crate::json::complex_matrix")]
    bath_hamiltonian: CMat,
    #[serde(default)]
    couplings: Vec<Coupling>,
    #[serde(with = "crate::json::complex_matrix")]
    bath_initial: CMat,
    #[serde(default = "default_order")]
    coupling_order: u8,
}

fn default_order() -> u8 {
    1
}

impl TryFrom<RawModel> for SystemBathModel {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        SystemBathModel::new(
            raw.system_hamiltonian,
            raw.bath_hamiltonian,
            raw.couplings,
            raw.bath_initial,
            raw.coupling_order,
        )
    }
}

/// H = H_S ⊗ I + I ⊗ H_B + Σ_γ S_γ ⊗ B_γ on a finite bath, with the bath
/// prepared in `bath_initial`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct SystemBathModel {
    #[serde(with = "crate::json::complex_matrix")]
    system_hamiltonian: CMat,
    #[serde(with = "crate::json::complex_matrix")]
    bath_hamiltonian: CMat,
    couplings: Vec<Coupling>,
    #[serde(with = "crate::json::complex_matrix")]
    bath_initial: CMat,
    coupling_order: u8,
    #[serde(skip)]
    total: CMat,
}

impl SystemBathModel {
    pub fn new(
        system_hamiltonian: CMat,
        bath_hamiltonian: CMat,
        couplings: Vec<Coupling>,
        bath_initial: CMat,
        coupling_order: u8,
    ) -> Result<Self> {
        let ds = ensure_square(&system_hamiltonian, "system hamiltonian")?;
        let db = ensure_square(&bath_hamiltonian, "bath hamiltonian")?;
        ensure_hermitian(&system_hamiltonian, "system hamiltonian")?;
        ensure_hermitian(&bath_hamiltonian, "bath hamiltonian")?;
        if !(1..=2).contains(&coupling_order) {
            return Err(Error::Domain(format!("coupling order must be 1 or 2, got {coupling_order}")));
        }
        for (k, cpl) in couplings.iter().enumerate() {
            let what = if cpl.name.is_empty() { format!("coupling {k}") } else { cpl.name.clone() };
            if cpl.system.shape() != (ds, ds) || cpl.bath.shape() != (db, db) {
                return Err(Error::Shape(format!(
                    "{what}: expected {ds}x{ds} system and {db}x{db} bath operators"
                )));
            }
            ensure_hermitian(&cpl.system, &what)?;
            ensure_hermitian(&cpl.bath, &what)?;
            if let Some(w) = max_weight(&cpl.system)? {
                if w > coupling_order as usize {
                    return Err(Error::Domain(format!(
                        "{what}: system operator has Pauli weight {w} above coupling order {coupling_order}"
                    )));
                }
            }
        }
        ensure_square(&bath_initial, "bath state")?;
        if bath_initial.nrows() != db {
            return Err(Error::Shape(format!("bath state must be {db}x{db}")));
        }
        check_density(&bath_initial, "bath state")?;

        let mut total = kron(&system_hamiltonian, &identity(db)) + kron(&identity(ds), &bath_hamiltonian);
        for cpl in &couplings {
            total += kron(&cpl.system, &cpl.bath);
        }
        Ok(Self {
            system_hamiltonian,
            bath_hamiltonian,
            couplings,
            bath_initial,
            coupling_order,
            total,
        })
    }

    /// Closed system: a one-dimensional trivial bath.
    pub fn closed(system_hamiltonian: CMat) -> Result<Self> {
        Self::new(system_hamiltonian, CMat::zeros(1, 1), Vec::new(), identity(1), 1)
    }

    pub fn system_dim(&self) -> usize {
        self.system_hamiltonian.nrows()
    }

    pub fn bath_dim(&self) -> usize {
        self.bath_hamiltonian.nrows()
    }

    /// Number of system qubits, when the system dimension is a power of two.
    pub fn num_qubits(&self) -> Option<usize> {
        let d = self.system_dim();
        d.is_power_of_two().then(|| d.trailing_zeros() as usize)
    }

    pub fn system_hamiltonian(&self) -> &CMat {
        &self.system_hamiltonian
    }

    pub fn bath_hamiltonian(&self) -> &CMat {
        &self.bath_hamiltonian
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn bath_initial(&self) -> &CMat {
        &self.bath_initial
    }

    pub fn coupling_order(&self) -> u8 {
        self.coupling_order
    }

    /// Full Hamiltonian on system ⊗ bath.
    pub fn total_hamiltonian(&self) -> &CMat {
        &self.total
    }

    /// Rough operator-norm scale of H, used for default probe times.
    pub fn norm_estimate(&self) -> f64 {
        let (vals, _) = hermitian_eigen(&self.total);
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (hi - lo) / 2.0
    }
}

/// Largest Pauli weight present in `op` (None when the dimension is not a
/// small power of two).
fn max_weight(op: &CMat) -> Result<Option<usize>> {
    let d = op.nrows();
    if !d.is_power_of_two() || d == 1 || d > 64 {
        return Ok(None);
    }
    let n = d.trailing_zeros() as usize;
    let basis = build_pauli_basis(n)?;
    let coeffs = basis.expand_complex(op)?;
    Ok(Some(
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > 1e-12)
            .map(|(k, _)| PauliString::from_ordinal(n, k).weight())
            .max()
            .unwrap_or(0),
    ))
}

pub(crate) fn check_density(rho: &CMat, what: &str) -> Result<()> {
    let tol = crate::linalg::tolerances().hermiticity;
    ensure_hermitian(rho, what)?;
    let tr = trace(rho);
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(Error::Domain(format!("{what}: trace {tr} is not 1")));
    }
    let (vals, _) = hermitian_eigen(rho);
    if let Some(min) = vals.iter().copied().reduce(f64::min) {
        if min < -tol {
            return Err(Error::Domain(format!("{what}: negative eigenvalue {min:.3e}")));
        }
    }
    Ok(())
}
