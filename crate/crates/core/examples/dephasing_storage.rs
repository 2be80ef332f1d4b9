//! Storage against pure dephasing: tomography of the first-order phase-flip
//! map, then the smallest pulse set that cancels it.

use bbforge::bb_synthesis::solve_storage;
use bbforge::models;
use bbforge::operator_algebra::build_pauli_basis;
use bbforge::tomography::{chi_from_lambda, extract_generator, run_qpt, QubitLayout};

fn main() -> bbforge::Result<()> {
    let (g, t) = (1.0, 0.01);
    let data = run_qpt(models::first_order_phase_flip(g, t), &build_pauli_basis(1)?)?.at_time(t);
    let chi = chi_from_lambda(&data)?;
    let xi = extract_generator(&chi, &QubitLayout::singles(1))?.single(0)?;
    println!("xi = {:?}", xi.coords);

    let res = solve_storage(&xi, t, 4)?;
    println!("{}: |G| = {}, d = {:.1e}", res.method, res.group.len(), res.report.distance);
    for aa in res.group.axis_angles().unwrap_or_default() {
        println!("  axis {:?}, angle {:.6}", aa.axis, aa.angle);
    }
    for sol in &res.rotation_sets {
        println!("  rotation set: {:?}", sol.summary());
    }
    println!("{}", bbforge::json::to_string(&res.group)?);
    Ok(())
}
