use crate::error::{Error, Result};
use crate::linalg::{c, evolution_operator, hermitian_eigen, identity, kron, partial_trace_second, CMat, Complex64};

use super::group::PulseGroup;
use super::model::SystemBathModel;
use super::state::{DensityMatrix, KrausSet};

/// Eigenvalues of ρ_B(0) below this are dropped when building Kraus sets.
pub const BATH_EIGEN_CUTOFF: f64 = 1e-14;

/// exp(−iHt) on system ⊗ bath.
pub fn propagate(model: &SystemBathModel, t: f64) -> Result<CMat> {
    check_time(t)?;
    Ok(evolution_operator(model.total_hamiltonian(), t))
}

/// Same propagator assembled from `steps` equal sub-steps.
pub fn propagate_substepped(model: &SystemBathModel, t: f64, steps: usize) -> Result<CMat> {
    if steps <= 1 {
        return propagate(model, t);
    }
    let step = propagate(model, t / steps as f64)?;
    Ok(matrix_power(&step, steps))
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("evolution time must be non-negative, got {t}")));
    }
    Ok(())
}

pub(crate) fn matrix_power(u: &CMat, mut n: usize) -> CMat {
    let mut result = identity(u.nrows());
    let mut base = u.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

/// The reduced channel X ↦ Tr_B[U (X ⊗ ρ_B) U†] of a joint unitary.
#[derive(Debug, Clone)]
pub struct JointChannel {
    unitary: CMat,
    bath_initial: CMat,
    system_dim: usize,
    bath_dim: usize,
}

impl JointChannel {
    pub fn new(model: &SystemBathModel, unitary: CMat) -> Result<Self> {
        let n = model.system_dim() * model.bath_dim();
        if unitary.shape() != (n, n) {
            return Err(Error::Shape(format!("joint unitary must be {n}x{n}")));
        }
        Ok(Self {
            unitary,
            bath_initial: model.bath_initial().clone(),
            system_dim: model.system_dim(),
            bath_dim: model.bath_dim(),
        })
    }

    pub fn unitary(&self) -> &CMat {
        &self.unitary
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    /// Applies the channel to any system operator (linear extension).
    pub fn apply(&self, x: &CMat) -> CMat {
        let joint = kron(x, &self.bath_initial);
        let evolved = &self.unitary * joint * self.unitary.adjoint();
        partial_trace_second(&evolved, self.system_dim, self.bath_dim)
    }

    /// A_{μν} = √λ_ν ⟨μ|U|ν⟩ over the eigenbasis of ρ_B(0).
    pub fn kraus(&self, source_time: f64) -> Result<KrausSet> {
        let (vals, vecs) = hermitian_eigen(&self.bath_initial);
        let ds = self.system_dim;
        let db = self.bath_dim;
        let mut ops = Vec::new();
        for (nu, &lam) in vals.iter().enumerate() {
            if lam < BATH_EIGEN_CUTOFF {
                continue;
            }
            let ket_nu = vecs.column(nu);
            for mu in 0..db {
                let ket_mu = vecs.column(mu);
                let mut a = CMat::zeros(ds, ds);
                for s1 in 0..ds {
                    for s2 in 0..ds {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for b1 in 0..db {
                            let bra = ket_mu[b1].conj();
                            if bra == Complex64::new(0.0, 0.0) {
                                continue;
                            }
                            for b2 in 0..db {
                                acc += bra * self.unitary[(s1 * db + b1, s2 * db + b2)] * ket_nu[b2];
                            }
                        }
                        a[(s1, s2)] = acc * lam.sqrt();
                    }
                }
                ops.push(a);
            }
        }
        KrausSet::new(ops, source_time)
    }
}

/// Tr_B[U(t)(ρ ⊗ ρ_B)U†(t)].
pub fn reduced_state(model: &SystemBathModel, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    check_system_state(model, rho)?;
    let ch = JointChannel::new(model, propagate(model, t)?)?;
    Ok(DensityMatrix::trusted(ch.apply(rho.matrix())))
}

/// Kraus operators of the reduced dynamics at time t.
pub fn kraus_from_model(model: &SystemBathModel, t: f64) -> Result<KrausSet> {
    JointChannel::new(model, propagate(model, t)?)?.kraus(t)
}

fn check_system_state(model: &SystemBathModel, rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != model.system_dim() {
        return Err(Error::Shape(format!(
            "state of dimension {} for a {}-dimensional system",
            rho.dim(),
            model.system_dim()
        )));
    }
    Ok(())
}

fn check_group(model: &SystemBathModel, group: &PulseGroup) -> Result<()> {
    if group.dim() != model.system_dim() {
        return Err(Error::Shape(format!(
            "pulses of dimension {} for a {}-dimensional system",
            group.dim(),
            model.system_dim()
        )));
    }
    Ok(())
}

/// One cycle (g_{G−1}†U₀g_{G−1})⋯(g_0†U₀g_0) with instantaneous pulses and
/// the free propagator U₀(Δt) built from `substeps` equal steps.
pub fn bb_cycle_unitary(model: &SystemBathModel, group: &PulseGroup, substeps: usize) -> Result<CMat> {
    check_group(model, group)?;
    let u0 = propagate_substepped(model, group.delta_t(), substeps)?;
    let id_b = identity(model.bath_dim());
    let mut cycle = identity(u0.nrows());
    for g in group.pulses() {
        let gj = kron(g, &id_b);
        cycle = gj.adjoint() * &u0 * gj * cycle;
    }
    Ok(cycle)
}

/// Joint unitary after `num_cycles` BB cycles. A trivial group uses the free
/// propagator over the whole interval.
pub fn bb_evolution(model: &SystemBathModel, group: &PulseGroup, num_cycles: usize) -> Result<CMat> {
    check_group(model, group)?;
    if group.is_trivial() {
        return propagate(model, num_cycles as f64 * group.delta_t());
    }
    Ok(matrix_power(&bb_cycle_unitary(model, group, 1)?, num_cycles))
}

/// Reduced system state after `num_cycles` BB cycles.
pub fn apply_bb_cycle(
    model: &SystemBathModel,
    group: &PulseGroup,
    num_cycles: usize,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    if num_cycles == 0 {
        return Err(Error::Domain("at least one cycle is required".into()));
    }
    check_system_state(model, rho)?;
    let ch = JointChannel::new(model, bb_evolution(model, group, num_cycles)?)?;
    Ok(DensityMatrix::trusted(ch.apply(rho.matrix())))
}

/// (1/|G|) Σ_k g_k† H g_k.
pub fn symmetrize_hamiltonian(h: &CMat, group: &PulseGroup) -> Result<CMat> {
    if h.shape() != (group.dim(), group.dim()) {
        return Err(Error::Shape(format!(
            "operator is {}x{} but pulses act on dimension {}",
            h.nrows(),
            h.ncols(),
            group.dim()
        )));
    }
    let mut acc = CMat::zeros(h.nrows(), h.ncols());
    for g in group.pulses() {
        acc += g.adjoint() * h * g;
    }
    Ok(acc * c(1.0 / group.len() as f64, 0.0))
}

/// Whether `h` commutes with every pulse within `tol` (Frobenius norm).
pub fn commutes_with_group(h: &CMat, group: &PulseGroup, tol: f64) -> bool {
    group
        .pulses()
        .iter()
        .all(|g| crate::linalg::frobenius(&crate::linalg::commutator(g, h)) <= tol)
}
