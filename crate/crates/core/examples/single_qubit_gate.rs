//! Turning measured noise into a wanted generator: averaged rotations can
//! only shrink ξ, so targets longer than ξ are rejected.

use bbforge::bb_synthesis::solve_single_qubit_gate;
use bbforge::operator_algebra::{BasisId, CoordinateVector};
use bbforge::Error;

fn main() -> bbforge::Result<()> {
    let xi = CoordinateVector::new(vec![0.0, 0.0, -0.5], BasisId { num_qubits: 1 })?;
    for w in [[0.0, 0.0, -0.5], [0.3, 0.0, 0.0], [0.0, 0.1, 0.1], [0.0, 0.0, 0.0], [0.6, 0.0, 0.0]] {
        match solve_single_qubit_gate(&xi, w, 0.01, 6) {
            Ok(res) => println!(
                "w = {w:?}: {} |G| = {}, achieved {:.3?}, d = {:.1e}",
                res.method,
                res.group.len(),
                res.achieved.coords,
                res.report.distance
            ),
            Err(e @ Error::InfeasibleMagnitude { .. }) => println!("w = {w:?}: {e}"),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
