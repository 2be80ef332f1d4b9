use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{ensure_square, ensure_unitary, identity, is_identity, CMat};
use crate::operator_algebra::{adjoint_of, build_pauli_basis, AdjointRotation, AxisAngle};

/// Ordered BB pulse set {g_k} with g_0 = I, applied once per Δt.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct PulseGroup {
    pulses: Vec<CMat>,
    delta_t: f64,
    rotations: Vec<AdjointRotation>,
}

#[derive(Deserialize)]
struct RawGroup {
    #[serde(with = "crate::json::complex_matrix_list")]
    pulses: Vec<CMat>,
    delta_t: f64,
}

impl TryFrom<RawGroup> for PulseGroup {
    type Error = Error;
    fn try_from(raw: RawGroup) -> Result<Self> {
        Self::new(raw.pulses, raw.delta_t)
    }
}

#[derive(Serialize)]
struct GroupView<'a> {
    size: usize,
    delta_t: f64,
    cycle_time: f64,
    #[serde(with = "crate::json::complex_matrix_list")]
    pulses: Vec<CMat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    axis_angles: Option<Vec<AxisAngle>>,
    rotations: &'a [AdjointRotation],
}

impl Serialize for PulseGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupView {
            size: self.len(),
            delta_t: self.delta_t,
            cycle_time: self.cycle_time(),
            pulses: self.pulses.clone(),
            axis_angles: self.axis_angles(),
            rotations: &self.rotations,
        }
        .serialize(s)
    }
}

impl PulseGroup {
    pub fn new(pulses: Vec<CMat>, delta_t: f64) -> Result<Self> {
        if !(delta_t.is_finite() && delta_t > 0.0) {
            return Err(Error::Domain(format!("pulse interval must be positive, got {delta_t}")));
        }
        let first = pulses.first().ok_or_else(|| Error::Shape("empty pulse group".into()))?;
        let dim = ensure_square(first, "pulse")?;
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::Shape(format!("pulses must act on qubits, got dimension {dim}")));
        }
        if !is_identity(first, crate::linalg::tolerances().orthogonality) {
            return Err(Error::Domain("first pulse g_0 must be the identity".into()));
        }
        let basis = build_pauli_basis(dim.trailing_zeros() as usize)?;
        let rotations = pulses
            .iter()
            .map(|g| {
                if g.shape() != (dim, dim) {
                    return Err(Error::Shape("pulses differ in dimension".into()));
                }
                ensure_unitary(g, "pulse")?;
                adjoint_of(g, &basis)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            pulses,
            delta_t,
            rotations,
        })
    }

    /// {I}: free evolution.
    pub fn trivial(dim: usize, delta_t: f64) -> Result<Self> {
        Self::new(vec![identity(dim)], delta_t)
    }

    /// Group {I, g_1, ...} from single-qubit axis-angle pulses.
    pub fn from_axis_angles(pulses: &[AxisAngle], delta_t: f64) -> Result<Self> {
        let mut all = vec![identity(2)];
        all.extend(pulses.iter().map(AxisAngle::unitary));
        Self::new(all, delta_t)
    }

    pub fn with_delta_t(&self, delta_t: f64) -> Result<Self> {
        if !(delta_t.is_finite() && delta_t > 0.0) {
            return Err(Error::Domain(format!("pulse interval must be positive, got {delta_t}")));
        }
        Ok(Self {
            delta_t,
            ..self.clone()
        })
    }

    /// Places every pulse on `qubit` of an `num_qubits` register.
    pub fn embed(&self, qubit: usize, num_qubits: usize) -> Result<Self> {
        if self.dim() != 2 || qubit >= num_qubits {
            return Err(Error::Shape("embedding needs a single-qubit group and a valid site".into()));
        }
        let pulses = self
            .pulses
            .iter()
            .map(|g| crate::linalg::embed_single(g, qubit, num_qubits))
            .collect();
        Self::new(pulses, self.delta_t)
    }

    pub fn pulses(&self) -> &[CMat] {
        &self.pulses
    }

    pub fn rotations(&self) -> &[AdjointRotation] {
        &self.rotations
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    /// T_c = |G|·Δt.
    pub fn cycle_time(&self) -> f64 {
        self.len() as f64 * self.delta_t
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.pulses[0].nrows()
    }

    pub fn is_trivial(&self) -> bool {
        self.len() == 1
    }

    /// Canonical axis-angle form of each pulse (single-qubit groups only).
    pub fn axis_angles(&self) -> Option<Vec<AxisAngle>> {
        (self.dim() == 2).then(|| {
            self.rotations
                .iter()
                .map(|r| AxisAngle::from_rotation(r).expect("single-qubit rotation"))
                .collect()
        })
    }
}
