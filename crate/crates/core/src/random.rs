//! Seeded random matrices for fixtures, tests and the optimizer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, hermitian_eigen, CMat};
use crate::operator_algebra::AxisAngle;

pub type BbRng = ChaCha8Rng;

pub fn rng(seed: u64) -> BbRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(r: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(r.sample::<f64, _>(StandardNormal), r.sample::<f64, _>(StandardNormal))
    })
}

pub fn random_hermitian(r: &mut impl Rng, n: usize) -> CMat {
    let g = ginibre(r, n, n);
    (&g + g.adjoint()).scale(0.5)
}

pub fn random_traceless_hermitian(r: &mut impl Rng, n: usize) -> CMat {
    let h = random_hermitian(r, n);
    let shift = crate::linalg::trace(&h) / c(n as f64, 0.0);
    h - CMat::identity(n, n) * shift
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(r: &mut impl Rng, n: usize) -> CMat {
    let qr = ginibre(r, n, n).qr();
    let q = qr.q();
    let rr = qr.r();
    let mut u = q;
    for j in 0..n {
        let d = rr[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

pub fn random_unit_vector(r: &mut impl Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            r.sample(StandardNormal),
            r.sample(StandardNormal),
            r.sample(StandardNormal),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Random element e^{i n̂·σ θ} of SU(2) with θ uniform in (−π, π].
pub fn random_axis_angle(r: &mut impl Rng) -> AxisAngle {
    let axis = random_unit_vector(r);
    let angle = r.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    AxisAngle::new(axis, angle).expect("unit axis")
}

pub fn random_density_matrix(r: &mut impl Rng, n: usize) -> CMat {
    let g = ginibre(r, n, n);
    let rho = &g * g.adjoint();
    let tr = crate::linalg::trace(&rho);
    rho / tr
}

pub fn random_pure_state(r: &mut impl Rng, n: usize) -> CMat {
    let v = ginibre(r, n, 1);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v = v / c(norm, 0.0);
    &v * v.adjoint()
}

/// `count` Kraus operators normalized so that Σ A†A = I.
pub fn random_kraus(r: &mut impl Rng, n: usize, count: usize) -> Vec<CMat> {
    let raw: Vec<CMat> = (0..count).map(|_| ginibre(r, n, n)).collect();
    let s = raw
        .iter()
        .fold(CMat::zeros(n, n), |acc, g| acc + g.adjoint() * g);
    let (vals, vecs) = hermitian_eigen(&s);
    let inv_sqrt = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        vals.iter().map(|v| c(1.0 / v.sqrt(), 0.0)),
    ));
    let s_inv_sqrt = &vecs * inv_sqrt * vecs.adjoint();
    raw.into_iter().map(|g| g * &s_inv_sqrt).collect()
}
