use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator_algebra::{build_pauli_basis, CoordinateVector};

use super::target::TargetSpec;

/// Deviation of an achieved generator from the wanted one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    /// E = Im χ̃ − Im χ_w.
    pub error_vector: CoordinateVector,
    /// d = [Tr((Σ E_α K_α)²)]^{1/2}.
    pub distance: f64,
    /// Distance to the nearest point of the stabilizer span, when one is given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilizer_distance: Option<f64>,
}

impl ErrorReport {
    /// Largest coordinate of the error vector.
    pub fn max_abs(&self) -> f64 {
        self.error_vector.coords.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

pub fn error_report(tilde: &CoordinateVector, wanted: &CoordinateVector) -> Result<ErrorReport> {
    let e = tilde.sub(wanted)?;
    // Tr(K_α K_β) = M δ_αβ
    let distance = (e.basis.normalization() * e.coords.iter().map(|x| x * x).sum::<f64>()).sqrt();
    Ok(ErrorReport {
        error_vector: e,
        distance,
        stabilizer_distance: None,
    })
}

/// Distance of S̃ − S_w from the real span of the target's stabilizer
/// generators. Without a stabilizer this is the plain distance d.
pub fn check_encoded(result: &CoordinateVector, target: &TargetSpec) -> Result<ErrorReport> {
    let mut report = error_report(result, &target.wanted)?;
    let Some(space) = target.stabilizer.as_ref().filter(|s| !s.is_empty()) else {
        report.stabilizer_distance = Some(report.distance);
        return Ok(report);
    };
    let basis = build_pauli_basis(result.basis.num_qubits)?;
    if space.generators()[0].nrows() != basis.dim() {
        return Err(Error::Shape("stabilizer acts on a different register".into()));
    }
    let d = report.error_vector.to_matrix(&basis)?;
    let (_, resid) = space.project(&d)?;
    let sq = crate::linalg::trace_product(&resid, &resid).re.max(0.0);
    report.stabilizer_distance = Some(sq.sqrt().min(report.distance));
    Ok(report)
}
