//! Errors inside the stabilizer span do not count: check_encoded against
//! span{ZZ}, and a search that exploits it.

use bbforge::bb_synthesis::{check_encoded, solve_encoded, StabilizerSpace, TargetSpec};
use bbforge::operator_algebra::{BasisId, CoordinateVector};

fn main() -> bbforge::Result<()> {
    let basis = BasisId { num_qubits: 2 };
    let target = TargetSpec::encoded(CoordinateVector::zeros(basis), Some(StabilizerSpace::from_labels(&["ZZ"])?))?;

    let mut inside = CoordinateVector::zeros(basis);
    inside.set(&"ZZ".parse()?, 0.7);
    let r = check_encoded(&inside, &target)?;
    println!("ZZ error: d = {:.3}, stabilizer distance {:.1e}", r.distance, r.stabilizer_distance.unwrap_or(f64::NAN));

    let mut mixed = inside.clone();
    mixed.set(&"XI".parse()?, 0.2);
    let r = check_encoded(&mixed, &target)?;
    println!("ZZ + XI error: d = {:.3}, stabilizer distance {:.3}", r.distance, r.stabilizer_distance.unwrap_or(f64::NAN));

    // ZI noise with XX allowed: a single kick that flips ZI but keeps XX
    let target = TargetSpec::encoded(CoordinateVector::zeros(basis), Some(StabilizerSpace::from_labels(&["XX"])?))?;
    let mut xi = CoordinateVector::zeros(basis);
    xi.set(&"ZI".parse()?, -0.4);
    xi.set(&"XX".parse()?, 0.25);
    let res = solve_encoded(&xi, &target, 0.01, 4)?;
    println!(
        "{}: |G| = {}, stabilizer distance {:.1e}",
        res.method,
        res.group.len(),
        res.report.stabilizer_distance.unwrap_or(f64::NAN)
    );
    Ok(())
}
