use serde::{Deserialize, Serialize};

use crate::bb_synthesis::TargetSpec;
use crate::error::{Error, Result};
use crate::linalg::{identity, CMat};
use crate::open_system::{bb_cycle_unitary, propagate, JointChannel, PulseGroup, SystemBathModel};
use crate::operator_algebra::{build_pauli_basis, BasisId, CoordinateVector};
use crate::tomography::{chi_from_lambda, extract_generator, run_qpt, ChiMatrix, EffectiveGenerator, QubitLayout};

/// Settings of the time-integrated cost J = ∫₀^{M·T_c} d(t) dt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CostSettings {
    /// Integration horizon T; nodes sit at whole cycles up to T.
    pub horizon: f64,
    /// Sub-steps of the free propagator within one pulse interval.
    pub substeps: usize,
}

impl Default for CostSettings {
    fn default() -> Self {
        Self {
            horizon: 0.2,
            substeps: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostSample {
    pub time: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostEvaluation {
    pub value: f64,
    pub samples: Vec<CostSample>,
}

/// Everything needed to score a pulse set.
#[derive(Debug, Clone)]
pub struct CostFunction {
    pub model: SystemBathModel,
    pub target: TargetSpec,
    pub settings: CostSettings,
    num_qubits: usize,
    wanted: CoordinateVector,
}

impl CostFunction {
    pub fn new(model: SystemBathModel, target: TargetSpec, settings: CostSettings) -> Result<Self> {
        let n = model
            .num_qubits()
            .ok_or_else(|| Error::Shape("the system must be a register of qubits".into()))?;
        if !(settings.horizon.is_finite() && settings.horizon > 0.0) {
            return Err(Error::Domain(format!("horizon must be positive, got {}", settings.horizon)));
        }
        if settings.substeps == 0 {
            return Err(Error::Domain("at least one sub-step is required".into()));
        }
        let wanted = target.full_wanted(n)?;
        Ok(Self {
            model,
            target,
            settings,
            num_qubits: n,
            wanted,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn evaluate(&self, group: &PulseGroup) -> Result<CostEvaluation> {
        evaluate_cost(self, group)
    }
}

/// Generator coordinates Im χ_{α0}/t of a channel measured at time t.
fn coordinates(chi: &ChiMatrix) -> CoordinateVector {
    let n = chi.entries.nrows();
    CoordinateVector {
        coords: (1..n).map(|a| chi.entries[(a, 0)].im / chi.time_tag).collect(),
        basis: chi.basis,
    }
}

fn qpt_of(model: &SystemBathModel, u: CMat, t: f64) -> Result<ChiMatrix> {
    let n = model.system_dim().trailing_zeros() as usize;
    let ch = JointChannel::new(model, u)?;
    let data = run_qpt(|x| ch.apply(x), &build_pauli_basis(n)?)?.at_time(t);
    chi_from_lambda(&data)
}

/// J with the trapezoid rule on the nodes τ_m = m·T_c, m = 1…M, where
/// M·T_c ≤ T; the integrand at t = 0 is taken equal to its value at τ₁.
pub fn evaluate_cost(cost: &CostFunction, group: &PulseGroup) -> Result<CostEvaluation> {
    let tc = group.cycle_time();
    let cycles = ((cost.settings.horizon / tc) * (1.0 + 1e-12)).floor().max(1.0) as usize;
    let cycle = if group.is_trivial() {
        None
    } else {
        Some(bb_cycle_unitary(&cost.model, group, cost.settings.substeps)?)
    };
    let norm = BasisId {
        num_qubits: cost.num_qubits,
    }
    .normalization();
    let mut samples = Vec::with_capacity(cycles);
    let mut u = identity(cost.model.system_dim() * cost.model.bath_dim());
    for m in 1..=cycles {
        let t = m as f64 * tc;
        u = match &cycle {
            Some(c) => c * &u,
            None => propagate(&cost.model, t)?,
        };
        let xi = coordinates(&qpt_of(&cost.model, u.clone(), t)?);
        let e = xi.sub(&cost.wanted)?;
        let distance = (norm * e.coords.iter().map(|x| x * x).sum::<f64>()).sqrt();
        samples.push(CostSample { time: t, distance });
    }
    let mut integral = samples[0].distance * tc;
    for w in samples.windows(2) {
        integral += 0.5 * (w[0].distance + w[1].distance) * (w[1].time - w[0].time);
    }
    Ok(CostEvaluation {
        value: integral,
        samples,
    })
}

/// Effective generator of one BB cycle, measured by process tomography at
/// the cycle time. A trivial group measures the free evolution over Δt.
pub fn measure_generator(model: &SystemBathModel, group: &PulseGroup, substeps: usize) -> Result<EffectiveGenerator> {
    let n = model
        .num_qubits()
        .ok_or_else(|| Error::Shape("the system must be a register of qubits".into()))?;
    let u = if group.is_trivial() {
        propagate(model, group.delta_t())?
    } else {
        bb_cycle_unitary(model, group, substeps)?
    };
    let chi = qpt_of(model, u, group.cycle_time())?;
    extract_generator(&chi, &QubitLayout::all_pairs(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::kick;
    use crate::models;

    fn storage_cost(model: SystemBathModel, horizon: f64) -> CostFunction {
        CostFunction::new(model, TargetSpec::storage(0), CostSettings { horizon, substeps: 1 }).unwrap()
    }

    #[test]
    fn free_dephasing_cost_is_the_constant_rate() {
        // unitary phase flip: ξ_z(t) = −sin(gt)/(2t) ≈ −g/2, d = √2·|ξ_z|
        let cost = storage_cost(models::dephasing(1.0, 1.0).unwrap(), 0.1);
        let group = PulseGroup::trivial(2, 0.01).unwrap();
        let ev = cost.evaluate(&group).unwrap();
        assert_eq!(ev.samples.len(), 10);
        for s in &ev.samples {
            let exact = 2f64.sqrt() * s.time.sin() / (2.0 * s.time);
            assert!((s.distance - exact).abs() < 1e-10, "{} vs {exact}", s.distance);
        }
        assert!((ev.value - 0.1 * 0.5 * 2f64.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn parity_kick_removes_pure_dephasing() {
        let cost = storage_cost(models::dephasing(1.0, 1.0).unwrap(), 0.2);
        let group = PulseGroup::new(vec![identity(2), kick([1.0, 0.0, 0.0])], 0.01).unwrap();
        assert!(cost.evaluate(&group).unwrap().value < 1e-12);
    }

    #[test]
    fn measured_generator_under_a_kick() {
        let model = models::dephasing_bit_flip(1.0, 0.05, [0.3, 0.0, 0.8]).unwrap();
        let free = measure_generator(&model, &PulseGroup::trivial(2, 0.01).unwrap(), 1).unwrap();
        assert!((free.xi[0][2] + 0.4).abs() < 1e-4);
        assert!((free.xi[0][0] + 0.0325).abs() < 1e-4);
        let kicked = PulseGroup::new(vec![identity(2), kick([1.0, 0.0, 0.0])], 0.01).unwrap();
        let g = measure_generator(&model, &kicked, 1).unwrap();
        assert!(g.xi[0][2].abs() < 1e-3);
        assert!((g.xi[0][0] + 0.0325).abs() < 1e-3);
    }

    #[test]
    fn constant_deviation_integrates_to_horizon_times_distance() {
        // no noise, target w = (0, 0, 0.25): d = √2·0.25 at every node
        let model = models::zero_noise(1).unwrap();
        let cost = CostFunction::new(model, TargetSpec::single_qubit(0, [0.0, 0.0, 0.25]), CostSettings { horizon: 0.3, substeps: 2 }).unwrap();
        let ev = cost.evaluate(&PulseGroup::trivial(2, 0.01).unwrap()).unwrap();
        assert!((ev.value - 0.3 * 0.25 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn horizon_shorter_than_a_cycle_still_samples_once() {
        let cost = storage_cost(models::dephasing(1.0, 1.0).unwrap(), 0.001);
        let ev = cost.evaluate(&PulseGroup::trivial(2, 0.01).unwrap()).unwrap();
        assert_eq!(ev.samples.len(), 1);
    }
}
