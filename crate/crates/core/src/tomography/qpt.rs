use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_part, CMat, Complex64};
use crate::operator_algebra::{build_pauli_basis, BasisId, OperatorBasis, PauliString};

/// Largest register QPT is run on; the ξ tensor has 16^N rows.
pub const MAX_QPT_QUBITS: usize = 3;
/// Relative singular-value cutoff for the ξ-tensor pseudoinverse.
pub const PINV_RELATIVE_CUTOFF: f64 = 1e-12;
/// Absolute tolerance of the superposition test in `run_qpt`.
pub const LINEARITY_TOL: f64 = 1e-8;
/// ‖ξχ − λ‖ above this means the data admits no Hermitian χ.
pub const INCONSISTENCY_TOL: f64 = 1e-6;

/// Basis-only part of the inversion: the ξ tensor, flattened to a
/// (N_b²)×(N_b²) matrix, and its pseudoinverse.
#[derive(Debug)]
pub struct QptSetup {
    basis: OperatorBasis,
    xi: CMat,
    xi_pinv: CMat,
    condition: f64,
}

impl QptSetup {
    /// ξ^{αβ}_{jk}: K_α ρ_j K_β† = Σ_k ξ^{αβ}_{jk} ρ_k with ρ_j the matrix
    /// units |a⟩⟨b|, j = a·d + b. Row index j·N_b + k, column α·N_b + β.
    fn build(num_qubits: usize) -> Result<Self> {
        if num_qubits > MAX_QPT_QUBITS {
            return Err(Error::Capacity(format!(
                "QPT is limited to {MAX_QPT_QUBITS} qubits, got {num_qubits}"
            )));
        }
        let basis = build_pauli_basis(num_qubits)?;
        let d = basis.dim();
        let nb = d * d;
        let els = basis.elements();
        let mut xi = CMat::zeros(nb * nb, nb * nb);
        for (alpha, ka) in els.iter().enumerate() {
            for (beta, kb) in els.iter().enumerate() {
                let col = alpha * nb + beta;
                for a in 0..d {
                    for b in 0..d {
                        let j = a * d + b;
                        for cc in 0..d {
                            let left = ka[(cc, a)];
                            if left == c(0.0, 0.0) {
                                continue;
                            }
                            for e in 0..d {
                                let right = kb[(e, b)].conj();
                                if right != c(0.0, 0.0) {
                                    xi[(j * nb + cc * d + e, col)] = left * right;
                                }
                            }
                        }
                    }
                }
            }
        }
        let svd = xi.clone().svd(true, true);
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let cutoff = smax * PINV_RELATIVE_CUTOFF;
        let kept: Vec<f64> = svd.singular_values.iter().copied().filter(|&s| s > cutoff).collect();
        let smin = kept.iter().copied().fold(f64::INFINITY, f64::min);
        let xi_pinv = svd
            .pseudo_inverse(cutoff)
            .map_err(|e| Error::Domain(format!("pseudoinverse failed: {e}")))?;
        Ok(Self {
            basis,
            xi,
            xi_pinv,
            condition: smax / smin,
        })
    }

    /// Shared setup for an `num_qubits` Pauli basis, built once per process.
    pub fn for_qubits(num_qubits: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QptSetup>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(s) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&num_qubits) {
            return Ok(s.clone());
        }
        let built = Arc::new(Self::build(num_qubits)?);
        Ok(cache
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .entry(num_qubits)
            .or_insert(built)
            .clone())
    }

    pub fn basis(&self) -> &OperatorBasis {
        &self.basis
    }

    pub fn xi_tensor(&self) -> &CMat {
        &self.xi
    }

    /// Ratio of extreme retained singular values of the ξ tensor.
    pub fn condition_number(&self) -> f64 {
        self.condition
    }
}

/// Channel action coefficients λ_{jk}, E(ρ_j) = Σ_k λ_{jk} ρ_k, on the
/// matrix-unit inputs ρ_j = |a⟩⟨b|.
#[derive(Debug, Clone)]
pub struct TomographyData {
    pub lambda: CMat,
    pub time_tag: f64,
    setup: Arc<QptSetup>,
}

impl TomographyData {
    pub fn at_time(mut self, t: f64) -> Self {
        self.time_tag = t;
        self
    }

    pub fn input_basis_id(&self) -> BasisId {
        self.setup.basis.id()
    }

    pub fn xi_tensor(&self) -> &CMat {
        self.setup.xi_tensor()
    }

    pub fn setup(&self) -> &QptSetup {
        &self.setup
    }

    /// Output of the channel on the matrix unit |a⟩⟨b|, rebuilt from λ.
    pub fn output_on_unit(&self, a: usize, b: usize) -> CMat {
        let d = self.setup.basis.dim();
        let j = a * d + b;
        CMat::from_fn(d, d, |cc, e| self.lambda[(j, cc * d + e)])
    }
}

fn projector(v: &[Complex64]) -> CMat {
    let col = CMat::from_column_slice(v.len(), 1, v);
    &col * col.adjoint()
}

/// Probes a linear channel with d² preparations (|a⟩, |+_{ab}⟩, |+i_{ab}⟩),
/// rebuilds its action on every matrix unit by linearity, and expands the
/// outputs in matrix units.
pub fn run_qpt<F>(channel: F, basis: &OperatorBasis) -> Result<TomographyData>
where
    F: Fn(&CMat) -> CMat + Sync,
{
    let setup = QptSetup::for_qubits(basis.num_qubits())?;
    let d = basis.dim();
    let nb = d * d;
    let h = std::f64::consts::FRAC_1_SQRT_2;

    let mut preps: Vec<CMat> = Vec::with_capacity(nb);
    for a in 0..d {
        let mut v = vec![c(0.0, 0.0); d];
        v[a] = c(1.0, 0.0);
        preps.push(projector(&v));
    }
    let mut pair_index = HashMap::new();
    for a in 0..d {
        for b in (a + 1)..d {
            let mut plus = vec![c(0.0, 0.0); d];
            plus[a] = c(h, 0.0);
            plus[b] = c(h, 0.0);
            let mut plus_i = plus.clone();
            plus_i[b] = c(0.0, h);
            pair_index.insert((a, b), preps.len());
            preps.push(projector(&plus));
            preps.push(projector(&plus_i));
        }
    }

    let outputs: Vec<CMat> = preps.par_iter().map(&channel).collect();
    if let Some(bad) = outputs.iter().find(|o| o.shape() != (d, d)) {
        return Err(Error::Shape(format!(
            "channel returned a {}x{} matrix for a {d}x{d} input",
            bad.nrows(),
            bad.ncols()
        )));
    }

    // |a⟩⟨b| = P₊ + iP₊ᵢ − (1+i)/2 (P_a + P_b), |b⟩⟨a| = P₊ − iP₊ᵢ − (1−i)/2 (P_a + P_b)
    let mut unit_out = vec![CMat::zeros(d, d); nb];
    for a in 0..d {
        unit_out[a * d + a] = outputs[a].clone();
    }
    for (&(a, b), &k) in &pair_index {
        let diag = &outputs[a] + &outputs[b];
        let p = &outputs[k];
        let pi = &outputs[k + 1];
        unit_out[a * d + b] = p + pi * c(0.0, 1.0) - &diag * c(0.5, 0.5);
        unit_out[b * d + a] = p - pi * c(0.0, 1.0) - &diag * c(0.5, -0.5);
    }

    // superposition test on a fixed generic state
    let amps: Vec<Complex64> = (0..d)
        .map(|k| c(1.0 + 0.37 * k as f64, 0.21 * (k as f64 + 1.0).sqrt()))
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let amps: Vec<Complex64> = amps.iter().map(|z| z / norm).collect();
    let probe = projector(&amps);
    let direct = channel(&probe);
    let mut linear = CMat::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            linear += &unit_out[a * d + b] * probe[(a, b)];
        }
    }
    let mismatch = crate::linalg::frobenius(&(direct - linear));
    if mismatch > LINEARITY_TOL {
        return Err(Error::Domain(format!(
            "channel failed the superposition test (mismatch {mismatch:.3e})"
        )));
    }

    let mut lambda = CMat::zeros(nb, nb);
    for (j, out) in unit_out.iter().enumerate() {
        for cc in 0..d {
            for e in 0..d {
                lambda[(j, cc * d + e)] = out[(cc, e)];
            }
        }
    }
    Ok(TomographyData {
        lambda,
        time_tag: 0.0,
        setup,
    })
}

/// χ-matrix of a channel in the Pauli basis, identity at index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    pub entries: CMat,
    pub time_tag: f64,
    pub basis: BasisId,
    /// ‖χ − χ†‖/2 of the raw inversion before the Hermitian part was taken.
    pub skew_norm: f64,
    /// ‖ξχ − λ‖ of the returned (Hermitian) χ.
    pub residual: f64,
}

#[derive(Serialize, Deserialize)]
struct ChiJson {
    basis: Vec<String>,
    time_tag: f64,
    #[serde(with = "crate::json::complex_matrix")]
    entries: CMat,
    #[serde(default)]
    skew_norm: f64,
    #[serde(default)]
    residual: f64,
}

impl Serialize for ChiMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let labels = (0..self.entries.nrows())
            .map(|k| PauliString::from_ordinal(self.basis.num_qubits, k).to_string())
            .collect();
        ChiJson {
            basis: labels,
            time_tag: self.time_tag,
            entries: self.entries.clone(),
            skew_norm: self.skew_norm,
            residual: self.residual,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChiMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ChiJson::deserialize(d)?;
        let n = raw.basis.first().map_or(0, String::len);
        if n == 0 || raw.basis.len() != 1 << (2 * n) {
            return Err(D::Error::custom("basis labels do not form a Pauli basis"));
        }
        for (k, label) in raw.basis.iter().enumerate() {
            let s: PauliString = label.parse().map_err(D::Error::custom)?;
            if s.ordinal() != k {
                return Err(D::Error::custom(format!("basis label {label} out of order")));
            }
        }
        if raw.entries.shape() != (raw.basis.len(), raw.basis.len()) {
            return Err(D::Error::custom("entries do not match basis size"));
        }
        Ok(ChiMatrix {
            entries: raw.entries,
            time_tag: raw.time_tag,
            basis: BasisId { num_qubits: n },
            skew_norm: raw.skew_norm,
            residual: raw.residual,
        })
    }
}

impl ChiMatrix {
    /// χ_{α,β} addressed by Pauli strings.
    pub fn entry(&self, alpha: &PauliString, beta: &PauliString) -> Complex64 {
        self.entries[(alpha.ordinal(), beta.ordinal())]
    }

    /// Σ_{αβ} χ_{αβ} K_α X K_β†.
    pub fn apply(&self, x: &CMat) -> Result<CMat> {
        let setup = QptSetup::for_qubits(self.basis.num_qubits)?;
        let els = setup.basis().elements();
        crate::linalg::ensure_dim(x, setup.basis().dim(), "operator")?;
        let d = x.nrows();
        let mut out = CMat::zeros(d, d);
        for (alpha, ka) in els.iter().enumerate() {
            let left = ka * x;
            for (beta, kb) in els.iter().enumerate() {
                let w = self.entries[(alpha, beta)];
                if w.norm() > 0.0 {
                    out += &left * kb * w;
                }
            }
        }
        Ok(out)
    }
}

/// Solves Σ_{αβ} ξ^{αβ}_{jk} χ_{αβ} = λ_{jk} with the cached pseudoinverse
/// and keeps the Hermitian part.
pub fn chi_from_lambda(data: &TomographyData) -> Result<ChiMatrix> {
    let nb = data.setup.basis.len();
    let lam = CMat::from_iterator(nb * nb, 1, (0..nb * nb).map(|r| data.lambda[(r / nb, r % nb)]));
    let sol = &data.setup.xi_pinv * &lam;
    let raw = CMat::from_fn(nb, nb, |a, b| sol[(a * nb + b, 0)]);
    let chi = hermitian_part(&raw);
    let skew_norm = crate::linalg::frobenius(&(&raw - &chi));
    let chi_vec = CMat::from_iterator(nb * nb, 1, (0..nb * nb).map(|r| chi[(r / nb, r % nb)]));
    let residual = crate::linalg::frobenius(&(&data.setup.xi * chi_vec - lam));
    if residual > INCONSISTENCY_TOL {
        return Err(Error::Inconsistent { residual });
    }
    Ok(ChiMatrix {
        entries: chi,
        time_tag: data.time_tag,
        basis: data.input_basis_id(),
        skew_norm,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius, identity};
    use crate::operator_algebra::{sigma_x, sigma_z};
    use crate::random::{random_density_matrix, random_kraus, rng};

    #[test]
    fn identity_channel() {
        let basis = build_pauli_basis(1).unwrap();
        let data = run_qpt(|r: &CMat| r.clone(), &basis).unwrap();
        assert!(frobenius(&(data.lambda.clone() - identity(4))) < 1e-15);
        let chi = chi_from_lambda(&data).unwrap();
        let mut expected = CMat::zeros(4, 4);
        expected[(0, 0)] = c(1.0, 0.0);
        assert!(frobenius(&(chi.entries - expected)) < 1e-14);
    }

    #[test]
    fn sigma_x_conjugation_oracle() {
        let basis = build_pauli_basis(1).unwrap();
        let x = sigma_x();
        let data = run_qpt(|r: &CMat| &x * r * &x, &basis).unwrap();
        // |a⟩⟨b| ↦ |1−a⟩⟨1−b|: λ is the permutation j ↦ 3 − j
        let mut perm = CMat::zeros(4, 4);
        for j in 0..4 {
            perm[(j, 3 - j)] = c(1.0, 0.0);
        }
        assert!(frobenius(&(data.lambda.clone() - perm)) < 1e-15);
        let chi = chi_from_lambda(&data).unwrap();
        assert!((chi.entries[(1, 1)] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn xi_tensor_is_channel_independent() {
        let basis = build_pauli_basis(1).unwrap();
        let a = run_qpt(|r: &CMat| r.clone(), &basis).unwrap();
        let z = sigma_z();
        let b = run_qpt(|r: &CMat| &z * r * &z, &basis).unwrap();
        assert_eq!(a.xi_tensor(), b.xi_tensor());
        assert!(a.setup().condition_number() < 1.0 + 1e-12);
    }

    #[test]
    fn nonlinear_channel_detected() {
        let basis = build_pauli_basis(1).unwrap();
        let res = run_qpt(|r: &CMat| r * r[(0, 0)], &basis);
        assert!(matches!(res, Err(Error::Domain(_))));
    }

    #[test]
    fn non_hermiticity_preserving_map_is_inconsistent() {
        let basis = build_pauli_basis(1).unwrap();
        let z = sigma_z();
        let data = run_qpt(|r: &CMat| r * c(0.5, 0.0) + &z * r * c(0.0, 0.5), &basis).unwrap();
        assert!(matches!(chi_from_lambda(&data), Err(Error::Inconsistent { .. })));
    }

    #[test]
    fn random_kraus_round_trip() {
        let mut r = rng(21);
        for n in [1usize, 2] {
            let basis = build_pauli_basis(n).unwrap();
            let d = 1 << n;
            let ks = random_kraus(&mut r, d, 3);
            let ch = |x: &CMat| ks.iter().fold(CMat::zeros(d, d), |acc, k| acc + k * x * k.adjoint());
            let chi = chi_from_lambda(&run_qpt(ch, &basis).unwrap()).unwrap();
            assert!(chi.skew_norm < 1e-8);
            for _ in 0..20 {
                let rho = random_density_matrix(&mut r, d);
                assert!(frobenius(&(chi.apply(&rho).unwrap() - ch(&rho))) < 1e-9);
            }
        }
    }

    #[test]
    fn chi_matches_kraus_expansion_oracle() {
        // A_k = Σ_α a^k_α K_α gives χ_{αβ} = Σ_k a^k_α conj(a^k_β).
        let mut r = rng(23);
        let basis = build_pauli_basis(2).unwrap();
        let ks = random_kraus(&mut r, 4, 2);
        let ch = |x: &CMat| ks.iter().fold(CMat::zeros(4, 4), |acc, k| acc + k * x * k.adjoint());
        let chi = chi_from_lambda(&run_qpt(ch, &basis).unwrap()).unwrap();
        let coeffs: Vec<Vec<Complex64>> = ks.iter().map(|k| basis.expand_complex(k).unwrap()).collect();
        let oracle = CMat::from_fn(16, 16, |a, b| coeffs.iter().map(|v| v[a] * v[b].conj()).sum());
        assert!(frobenius(&(chi.entries - oracle)) < 1e-12);
    }

    #[test]
    fn lambda_is_linear_in_the_channel() {
        let mut r = rng(22);
        let basis = build_pauli_basis(1).unwrap();
        let k1 = random_kraus(&mut r, 2, 2);
        let k2 = random_kraus(&mut r, 2, 3);
        let apply = |ks: &Vec<CMat>, x: &CMat| ks.iter().fold(CMat::zeros(2, 2), |acc, k| acc + k * x * k.adjoint());
        let p = 0.3;
        let l1 = run_qpt(|x: &CMat| apply(&k1, x), &basis).unwrap().lambda;
        let l2 = run_qpt(|x: &CMat| apply(&k2, x), &basis).unwrap().lambda;
        let mix = run_qpt(|x: &CMat| apply(&k1, x) * c(p, 0.0) + apply(&k2, x) * c(1.0 - p, 0.0), &basis)
            .unwrap()
            .lambda;
        assert!(frobenius(&(mix - (l1 * c(p, 0.0) + l2 * c(1.0 - p, 0.0)))) < 1e-10);
    }

    #[test]
    fn chi_json_round_trip() {
        let basis = build_pauli_basis(2).unwrap();
        let z = crate::linalg::kron(&sigma_z(), &sigma_x());
        let chi = chi_from_lambda(&run_qpt(|r: &CMat| &z * r * &z, &basis).unwrap().at_time(0.5)).unwrap();
        let text = crate::json::to_string(&chi).unwrap();
        assert!(text.contains("\"ZX\""));
        let back: ChiMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, chi);
    }
}
