//! Adjoint action of single- and two-qubit unitaries on Pauli coordinates.
//!
//! ```bash
//! cargo run --example pauli_adjoint
//! ```

use bbforge::groups::kick;
use bbforge::linalg::kron;
use bbforge::operator_algebra::{adjoint_of, build_pauli_basis, expand, sigma_z, AxisAngle};

fn main() -> bbforge::Result<()> {
    let basis = build_pauli_basis(1)?;
    println!("basis {:?}", basis.labels());

    // a quarter turn about y
    let aa = AxisAngle::new([0.0, 1.0, 0.0], std::f64::consts::FRAC_PI_4)?;
    let r = adjoint_of(&aa.unitary(), &basis)?;
    println!("R for {aa:?}:\n{}", r.matrix);
    println!("back to axis-angle: {:?}", AxisAngle::from_rotation(&r)?);

    let z = expand(&sigma_z(), &basis)?;
    println!("z coords {:?} -> {:?}", z.coords, r.conjugate_coords(&z.coords));

    // X⊗X on two qubits flips ZI and IZ, keeps ZZ
    let basis2 = build_pauli_basis(2)?;
    let xx = kron(&kick([1.0, 0.0, 0.0]), &kick([1.0, 0.0, 0.0]));
    let r2 = adjoint_of(&xx, &basis2)?;
    for label in ["ZI", "IZ", "ZZ", "XY"] {
        let k = basis2.index_of(&label.parse()?).expect("in basis") - 1;
        println!("{label}: diagonal entry {:+.1}", r2.matrix[(k, k)]);
    }
    Ok(())
}
