//! Two exchange-coupled qubits with local dephasing: keep the exchange,
//! drop the dephasing. Once from a given generator, once end to end from a
//! simulated bath model.

use bbforge::bb_synthesis::{solve_two_qubit, synthesize, SynthesisOptions, TargetSpec, TwoQubitMethod};
use bbforge::linalg::{anticommutator, commutator, frobenius, identity, kron};
use bbforge::models;
use bbforge::open_system::PulseGroup;
use bbforge::operator_algebra::sigma_z;
use bbforge::optimizer::measure_generator;

fn main() -> bbforge::Result<()> {
    let mut m = [[0.0; 4]; 4];
    for (k, row) in m.iter_mut().enumerate().skip(1) {
        row[k] = 1.0;
    }
    let target = TargetSpec::two_qubit_matrix((0, 1), m)?;
    m[3][0] = 0.3;
    m[0][3] = 0.2;
    let xi = TargetSpec::two_qubit_matrix((0, 1), m)?.wanted;

    let res = solve_two_qubit(&xi, &target.wanted, 0.01, 4, TwoQubitMethod::LocalProducts)?;
    let u = &res.group.pulses()[1];
    println!("{}: |G| = {}\nU =\n{u}", res.method, res.group.len());
    println!("|[U, H]| = {:.1e}", frobenius(&commutator(u, &models::heisenberg(1.0))));
    println!("|{{U, ZI}}| = {:.1e}", frobenius(&anticommutator(u, &kron(&sigma_z(), &identity(2)))));

    // from simulated dynamics; a short probe keeps higher orders out
    let model = models::heisenberg_dephasing(1.0, 0.3, 0.2)?;
    let gen = measure_generator(&model, &PulseGroup::trivial(4, 1e-5)?, 1)?;
    let res = synthesize(&gen, &target, &SynthesisOptions::default())?;
    println!("simulated: {} with |G| = {}, d = {:.2e}", res.method, res.group.len(), res.report.distance);
    Ok(())
}
