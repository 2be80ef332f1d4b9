//! End-to-end acceptance checks. Runs without the libtest harness so the
//! per-criterion lines are always printed.

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bbforge::bb_synthesis::{
    check_encoded, solve_storage, solve_two_qubit, StabilizerSpace, TargetSpec, TwoQubitMethod,
};
use bbforge::linalg::{anticommutator, c, commutator, frobenius, identity, kron, phase_distance, CMat};
use bbforge::models;
use bbforge::open_system::{apply_bb_cycle, symmetrize_hamiltonian, DensityMatrix, PulseGroup};
use bbforge::operator_algebra::{
    adjoint_of, build_pauli_basis, expand, sigma_x, sigma_y, sigma_z, AxisAngle, BasisId, CoordinateVector,
};
use bbforge::optimizer::{
    analysis_chain, learning_loop, measure_generator, CostFunction, CostSettings, LearningLoopConfig,
};
use bbforge::random::{
    random_density_matrix, random_kraus, random_traceless_hermitian, random_unitary, rng,
};
use bbforge::tomography::{chi_from_lambda, extract_generator, run_qpt, QubitLayout};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c1_dephasing_storage() -> Check {
    let (g, t) = (1.0, 0.01);
    let map = models::first_order_phase_flip(g, t);
    let data = run_qpt(&map, &build_pauli_basis(1).unwrap()).map_err(|e| e.to_string())?.at_time(t);
    let chi = chi_from_lambda(&data).map_err(|e| e.to_string())?;
    let gen = extract_generator(&chi, &QubitLayout::singles(1)).map_err(|e| e.to_string())?;
    let xi = gen.single(0).map_err(|e| e.to_string())?;
    let expected = [0.0, 0.0, -g / 2.0];
    let rel = xi.coords.iter().zip(expected).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() / (g / 2.0);
    let res = solve_storage(&xi, t, 4).map_err(|e| e.to_string())?;
    let aa = res.group.axis_angles().ok_or("no axis-angle form")?[1];
    ensure(
        rel < 1e-6 && res.group.len() == 2 && (aa.angle - FRAC_PI_2).abs() < 1e-12 && aa.axis[2].abs() < 1e-9,
        format!(
            "xi rel err {rel:.2e}, |G| = {}, theta - pi/2 = {:.1e}, |n3| = {:.1e}",
            res.group.len(),
            aa.angle - FRAC_PI_2,
            aa.axis[2].abs()
        ),
    )
}

fn c2_two_pass_learning() -> Check {
    let model = models::dephasing_bit_flip(1.0, 0.05, [0.3, 0.0, 0.8]).map_err(|e| e.to_string())?;
    let cost = CostFunction::new(model, TargetSpec::storage(0), CostSettings::default()).map_err(|e| e.to_string())?;
    let passes = analysis_chain(&cost, &LearningLoopConfig::default()).map_err(|e| e.to_string())?;
    let last = passes.last().ok_or("no passes")?;
    let aa = last.candidate.axis_angles().ok_or("no axis-angle form")?[1];
    let axis_err = (0..3).map(|k| (aa.axis[k] - [0.0, 1.0, 0.0][k]).abs()).fold(0.0, f64::max);
    ensure(
        passes.len() == 2 && axis_err < 1e-8 && last.candidate.len() == 2,
        format!(
            "{} passes, final |G| = {}, axis error {axis_err:.1e}, J = {:.1e}",
            passes.len(),
            last.candidate.len(),
            last.cost
        ),
    )
}

fn c3_heisenberg() -> Check {
    let (j, g1, g2) = (1.0, 0.3, 0.2);
    let mut m = [[0.0; 4]; 4];
    for (k, row) in m.iter_mut().enumerate().skip(1) {
        row[k] = j;
    }
    let wanted = TargetSpec::two_qubit_matrix((0, 1), m).map_err(|e| e.to_string())?.wanted;
    m[3][0] = g1;
    m[0][3] = g2;
    let xi = TargetSpec::two_qubit_matrix((0, 1), m).map_err(|e| e.to_string())?.wanted;
    let res = solve_two_qubit(&xi, &wanted, 0.01, 4, TwoQubitMethod::LocalProducts).map_err(|e| e.to_string())?;
    let u = res.group.pulses().last().ok_or("empty group")?;
    let minus_xx = kron(&sigma_x(), &sigma_x()) * c(-1.0, 0.0);
    let dist = phase_distance(u, &minus_xx);
    let comm = frobenius(&commutator(u, &models::heisenberg(j)));
    let s1 = kron(&sigma_z(), &identity(2));
    let s2 = kron(&identity(2), &sigma_z());
    let anti = frobenius(&anticommutator(u, &s1)).max(frobenius(&anticommutator(u, &s2)));
    ensure(
        res.group.len() == 2 && dist < 1e-8 && comm < 1e-12 && anti < 1e-12,
        format!("|G| = {}, |U + XX| = {dist:.1e}, |[U,H]| = {comm:.1e}, |{{U,S}}| = {anti:.1e}", res.group.len()),
    )
}

fn c4_decoupling_scaling() -> Check {
    let model = models::dephasing_with_bath_dynamics(1.0, 1.0, [0.0, 0.5, 0.6]).map_err(|e| e.to_string())?;
    let free = PulseGroup::trivial(2, 0.01).map_err(|e| e.to_string())?;
    let xi = measure_generator(&model, &free, 1).map_err(|e| e.to_string())?;
    let kick_group = solve_storage(&xi.single(0).map_err(|e| e.to_string())?, 0.01, 4).map_err(|e| e.to_string())?.group;
    let rho = DensityMatrix::plus(1);
    let error_at = |dt: f64| -> Result<f64, String> {
        let g = PulseGroup::new(kick_group.pulses().to_vec(), dt).map_err(|e| e.to_string())?;
        let cycles = (1.0 / g.cycle_time()).round() as usize;
        let out = apply_bb_cycle(&model, &g, cycles, &rho).map_err(|e| e.to_string())?;
        Ok(out.trace_distance(&rho))
    };
    let (coarse, fine) = (error_at(0.1)?, error_at(0.05)?);
    let ratio = coarse / fine;
    ensure(
        kick_group.len() == 2 && (1.6..=2.4).contains(&ratio),
        format!("|G| = {}, error(0.1) = {coarse:.3e}, error(0.05) = {fine:.3e}, ratio {ratio:.3}", kick_group.len()),
    )
}

fn c5_tomography_round_trip() -> Check {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for k in 0..50 {
        let n = if k % 2 == 0 { 1 } else { 2 };
        let d = 1 << n;
        let ks = random_kraus(&mut r, d, 1 + k % 4);
        let channel = |x: &CMat| ks.iter().fold(CMat::zeros(d, d), |acc, a| acc + a * x * a.adjoint());
        let basis = build_pauli_basis(n).unwrap();
        let chi = chi_from_lambda(&run_qpt(channel, &basis).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let rho = random_density_matrix(&mut r, d);
            let got = chi.apply(&rho).map_err(|e| e.to_string())?;
            worst = worst.max(frobenius(&(got - channel(&rho))));
        }
    }
    ensure(worst < 1e-9, format!("50 channels x 20 states, worst deviation {worst:.1e}"))
}

fn c6_projector() -> Check {
    let mut r = rng(6);
    let paulis = [identity(2), sigma_x(), sigma_y(), sigma_z()];
    let one = PulseGroup::new(paulis.to_vec(), 0.01).map_err(|e| e.to_string())?;
    let two = PulseGroup::new(paulis.iter().map(|p| kron(p, &identity(2))).collect(), 0.01).map_err(|e| e.to_string())?;
    let mut zero_err = 0.0f64;
    for _ in 0..100 {
        let h = random_traceless_hermitian(&mut r, 2);
        zero_err = zero_err.max(frobenius(&symmetrize_hamiltonian(&h, &one).map_err(|e| e.to_string())?));
    }
    let mut idem_err = 0.0f64;
    for _ in 0..100 {
        let h = random_traceless_hermitian(&mut r, 4);
        let once = symmetrize_hamiltonian(&h, &two).map_err(|e| e.to_string())?;
        let twice = symmetrize_hamiltonian(&once, &two).map_err(|e| e.to_string())?;
        idem_err = idem_err.max(frobenius(&(twice - once)));
    }
    ensure(
        zero_err < 1e-12 && idem_err < 1e-12,
        format!("1-qubit annihilation {zero_err:.1e}, 2-qubit idempotence {idem_err:.1e}"),
    )
}

fn su2(u: CMat) -> CMat {
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    u / det.sqrt()
}

fn c7_adjoint_suite() -> Check {
    let basis = build_pauli_basis(1).unwrap();
    let mut r = rng(7);
    let (mut hom, mut orth, mut trip) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let u = su2(random_unitary(&mut r, 2));
        let v = su2(random_unitary(&mut r, 2));
        let ru = adjoint_of(&u, &basis).map_err(|e| e.to_string())?;
        let rv = adjoint_of(&v, &basis).map_err(|e| e.to_string())?;
        let ruv = adjoint_of(&(&u * &v), &basis).map_err(|e| e.to_string())?;
        hom = hom.max((ruv.matrix - &ru.matrix * &rv.matrix).norm());
        orth = orth.max(ru.orthogonality_defect()).max((ru.determinant() - 1.0).abs());
        let aa = AxisAngle::from_rotation(&ru).map_err(|e| e.to_string())?;
        trip = trip.max(phase_distance(&aa.unitary(), &u));
    }
    ensure(
        hom < 1e-9 && orth < 1e-9 && trip < 1e-9,
        format!("homomorphism {hom:.1e}, orthogonality {orth:.1e}, axis-angle round trip {trip:.1e}"),
    )
}

fn c8_learning_loop() -> Check {
    let model = models::dephasing(1.0, 1.0).map_err(|e| e.to_string())?;
    let cost = CostFunction::new(model, TargetSpec::storage(0), CostSettings::default()).map_err(|e| e.to_string())?;
    let config = LearningLoopConfig {
        population: 32,
        generations: 20,
        target_cost: 1e-6,
        seed: 42,
        ..LearningLoopConfig::default()
    };
    let out = learning_loop(&cost, &config).map_err(|e| e.to_string())?;
    let monotone = out.records.windows(2).all(|w| w[1].best_j <= w[0].best_j);
    let recheck = cost.evaluate(&out.best_group).map_err(|e| e.to_string())?.value;
    ensure(
        out.converged && out.records.len() <= 20 && monotone && out.best_cost <= 1e-6 && recheck <= 1e-6,
        format!(
            "converged {} after {} generations, |G| = {}, J = {:.1e} (re-evaluated {recheck:.1e}), monotone {monotone}",
            out.converged,
            out.records.len(),
            out.best_group.len(),
            out.best_cost
        ),
    )
}

fn c9_encoded_condition() -> Check {
    let basis = build_pauli_basis(2).unwrap();
    let zz = kron(&sigma_z(), &sigma_z());
    let space = StabilizerSpace::new(vec![zz.clone()]).map_err(|e| e.to_string())?;
    let wanted = CoordinateVector::zeros(BasisId { num_qubits: 2 });
    let target = TargetSpec::encoded(wanted.clone(), Some(space)).map_err(|e| e.to_string())?;
    let mut r = rng(9);
    let mut inside = 0.0f64;
    let mut resid = 0.0f64;
    for k in 0..100 {
        let a = (k as f64 - 50.0) / 7.0;
        let dev = expand(&(&zz * c(a, 0.0)), &basis).map_err(|e| e.to_string())?;
        inside = inside.max(check_encoded(&dev, &target).map_err(|e| e.to_string())?.stabilizer_distance.unwrap_or(f64::NAN));

        let h = random_traceless_hermitian(&mut r, 4);
        let dev = expand(&h, &basis).map_err(|e| e.to_string())?;
        // dense projection onto span{ZZ}
        let coef = bbforge::linalg::trace_product(&zz, &h) / c(4.0, 0.0);
        let oracle = frobenius(&(&h - &zz * coef));
        let got = check_encoded(&dev, &target).map_err(|e| e.to_string())?.stabilizer_distance.unwrap_or(f64::NAN);
        resid = resid.max((got - oracle).abs());
    }
    ensure(
        inside <= 1e-10 && resid <= 1e-10,
        format!("inside span {inside:.1e}, residual vs dense projection {resid:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 dephasing storage", c1_dephasing_storage, Duration::from_secs(1)),
        ("2 two-pass learning", c2_two_pass_learning, Duration::from_secs(5)),
        ("3 heisenberg pair", c3_heisenberg, Duration::from_secs(5)),
        ("4 decoupling scaling", c4_decoupling_scaling, Duration::from_secs(10)),
        ("5 tomography round trip", c5_tomography_round_trip, Duration::from_secs(30)),
        ("6 symmetrizer projector", c6_projector, Duration::MAX),
        ("7 adjoint suite", c7_adjoint_suite, Duration::MAX),
        ("8 learning loop", c8_learning_loop, Duration::from_secs(60)),
        ("9 encoded condition", c9_encoded_condition, Duration::MAX),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget:?} budget")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!("{} criterion {name}: {detail} [{:.3} s]", if ok { "PASS" } else { "FAIL" }, took.as_secs_f64());
    }
    println!("acceptance: {} of 9 passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
