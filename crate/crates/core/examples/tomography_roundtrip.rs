//! Process tomography of a random Kraus channel, then of a noisy
//! system–bath model, with the short-time generator read off χ.

use bbforge::linalg::{frobenius, CMat};
use bbforge::models;
use bbforge::open_system::{propagate, JointChannel};
use bbforge::operator_algebra::build_pauli_basis;
use bbforge::random::{random_density_matrix, random_kraus, rng};
use bbforge::tomography::{chi_from_lambda, extract_generator, run_qpt, QubitLayout};

fn main() -> bbforge::Result<()> {
    let mut r = rng(1);
    let basis = build_pauli_basis(2)?;
    let kraus = random_kraus(&mut r, 4, 3);
    let channel = |x: &CMat| kraus.iter().fold(CMat::zeros(4, 4), |acc, k| acc + k * x * k.adjoint());
    let chi = chi_from_lambda(&run_qpt(channel, &basis)?)?;
    let rho = random_density_matrix(&mut r, 4);
    println!("random 2-qubit channel: |chi(rho) - E(rho)| = {:.2e}", frobenius(&(chi.apply(&rho)? - channel(&rho))));
    println!("chi residual {:.2e}, skew part {:.2e}", chi.residual, chi.skew_norm);

    // qubit dephased by a bath qubit that also precesses
    let model = models::dephasing_with_bath_dynamics(1.0, 0.5, [0.0, 0.5, 0.6])?;
    let t = 0.01;
    let joint = JointChannel::new(&model, propagate(&model, t)?)?;
    let data = run_qpt(|x| joint.apply(x), &build_pauli_basis(1)?)?.at_time(t);
    let chi = chi_from_lambda(&data)?;
    let gen = extract_generator(&chi, &QubitLayout::singles(1))?;
    println!("Im chi[a,0] / t = {:?}", gen.single(0)?.coords);
    Ok(())
}
