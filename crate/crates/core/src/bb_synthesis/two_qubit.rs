use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{enumerate_candidate_groups, pauli_kick, GroupSkeleton};
use crate::linalg::{c, expm, identity, CMat};
use crate::open_system::PulseGroup;
use crate::operator_algebra::{adjoint_of, averaged_action, build_pauli_basis, CoordinateVector, OperatorBasis, PauliString};

use super::pulses::fix_phase;
use super::report::error_report;
use super::single::ACCEPT_TOL;
use super::SynthesisResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoQubitMethod {
    /// Catalogue of local Pauli products, C3 rotations and Klein groups.
    LocalProducts,
    /// {I, U} with U = exp(iΣ c_P P) fitted by Levenberg–Marquardt.
    General,
    /// Catalogue first, then the general fit.
    #[default]
    Auto,
}

fn check_pair(v: &CoordinateVector, what: &str) -> Result<()> {
    if v.basis.num_qubits != 2 {
        return Err(Error::Shape(format!("{what} must be 2-qubit coordinates")));
    }
    Ok(())
}

fn skeleton_residual(sk: &GroupSkeleton, xi: &CoordinateVector, wanted: &CoordinateVector, basis: &OperatorBasis) -> Result<f64> {
    let rots = sk
        .pulses
        .iter()
        .map(|p| adjoint_of(p, basis))
        .collect::<Result<Vec<_>>>()?;
    Ok(error_report(&averaged_action(&rots, xi)?, wanted)?.distance)
}

fn finish(method: &str, pulses: Vec<CMat>, delta_t: f64, xi: &CoordinateVector, wanted: &CoordinateVector) -> Result<SynthesisResult> {
    let group = PulseGroup::new(pulses, delta_t)?;
    let achieved = averaged_action(group.rotations(), xi)?;
    let report = error_report(&achieved, wanted)?;
    Ok(SynthesisResult {
        method: method.to_string(),
        group,
        achieved,
        report,
        rotation_sets: Vec::new(),
    })
}

/// Two-qubit pulse set whose averaged generator equals `wanted`.
pub fn solve_two_qubit(
    xi: &CoordinateVector,
    wanted: &CoordinateVector,
    delta_t: f64,
    max_size: usize,
    method: TwoQubitMethod,
) -> Result<SynthesisResult> {
    check_pair(xi, "measured generator")?;
    check_pair(wanted, "target")?;
    if error_report(xi, wanted)?.distance <= ACCEPT_TOL {
        return finish("trivial", vec![identity(4)], delta_t, xi, wanted);
    }
    let mut best = f64::INFINITY;
    if method != TwoQubitMethod::General {
        match local_products(xi, wanted, delta_t, max_size) {
            Ok(res) => return Ok(res),
            Err(Error::NoSolution { best_residual, .. }) => best = best_residual,
            Err(e) => return Err(e),
        }
        if method == TwoQubitMethod::LocalProducts {
            return Err(Error::NoSolution {
                best_residual: best,
                detail: format!("no catalogue group of at most {max_size} pulses"),
            });
        }
    }
    match general(xi, wanted, delta_t) {
        Err(Error::NoSolution { best_residual, detail }) => Err(Error::NoSolution {
            best_residual: best_residual.min(best),
            detail,
        }),
        other => other,
    }
}

/// First catalogue group, in catalogue order, whose residual is below
/// tolerance.
pub fn local_products(
    xi: &CoordinateVector,
    wanted: &CoordinateVector,
    delta_t: f64,
    max_size: usize,
) -> Result<SynthesisResult> {
    let basis = build_pauli_basis(2)?;
    let mut best = f64::INFINITY;
    for sk in enumerate_candidate_groups(4, max_size)? {
        let r = skeleton_residual(&sk, xi, wanted, &basis)?;
        if r <= ACCEPT_TOL {
            return finish(&format!("local_products:{}", sk.name), sk.pulses, delta_t, xi, wanted);
        }
        best = best.min(r);
    }
    Err(Error::NoSolution {
        best_residual: best,
        detail: "local products".into(),
    })
}

struct Fit<'a> {
    xi: &'a CoordinateVector,
    wanted: &'a CoordinateVector,
    basis: OperatorBasis,
}

impl Fit<'_> {
    fn unitary(&self, p: &DVector<f64>) -> CMat {
        let mut h = CMat::zeros(4, 4);
        for (k, g) in self.basis.generators().iter().enumerate() {
            h += g * c(p[k], 0.0);
        }
        expm(&(h * c(0.0, 1.0)))
    }

    fn residual(&self, p: &DVector<f64>) -> DVector<f64> {
        let u = self.unitary(p);
        let rot = crate::operator_algebra::adjoint_unchecked(&u, &self.basis);
        let moved = rot.conjugate_coords(&self.xi.coords);
        DVector::from_iterator(
            15,
            (0..15).map(|k| 0.5 * (self.xi.coords[k] + moved[k]) - self.wanted.coords[k]),
        )
    }

    fn jacobian(&self, p: &DVector<f64>) -> DMatrix<f64> {
        let h = 1e-6;
        let mut jac = DMatrix::zeros(15, 15);
        for k in 0..15 {
            let mut plus = p.clone();
            let mut minus = p.clone();
            plus[k] += h;
            minus[k] -= h;
            let col = (self.residual(&plus) - self.residual(&minus)) / (2.0 * h);
            jac.set_column(k, &col);
        }
        jac
    }

    fn levenberg_marquardt(&self, start: DVector<f64>, max_iter: usize) -> (DVector<f64>, f64) {
        let mut p = start;
        let mut r = self.residual(&p);
        let mut cost = r.norm_squared();
        let mut mu = 1e-3;
        for _ in 0..max_iter {
            if cost.sqrt() < 1e-14 {
                break;
            }
            let jac = self.jacobian(&p);
            let jtj = jac.transpose() * &jac;
            let grad = jac.transpose() * &r;
            let mut improved = false;
            for _ in 0..30 {
                let mut a = jtj.clone();
                for k in 0..15 {
                    a[(k, k)] += mu * (1.0 + jtj[(k, k)]);
                }
                let Some(step) = a.lu().solve(&(-&grad)) else {
                    mu *= 10.0;
                    continue;
                };
                let trial = &p + &step;
                let rt = self.residual(&trial);
                let ct = rt.norm_squared();
                if ct < cost {
                    p = trial;
                    r = rt;
                    cost = ct;
                    mu = (mu / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
                mu *= 4.0;
            }
            if !improved {
                break;
            }
        }
        (p, cost.sqrt())
    }
}

/// Least-squares fit of a single extra pulse U, started from the best
/// Pauli kicks and a few fixed generic points.
pub fn general(xi: &CoordinateVector, wanted: &CoordinateVector, delta_t: f64) -> Result<SynthesisResult> {
    let fit = Fit {
        xi,
        wanted,
        basis: build_pauli_basis(2)?,
    };
    let mut starts: Vec<(f64, DVector<f64>)> = (1..16)
        .map(|k| {
            let mut p = DVector::zeros(15);
            p[k - 1] = std::f64::consts::FRAC_PI_2;
            (fit.residual(&p).norm(), p)
        })
        .collect();
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut points: Vec<DVector<f64>> = starts.into_iter().take(4).map(|(_, p)| p).collect();
    let mut r = crate::random::rng(0x5eed);
    for _ in 0..4 {
        points.push(DVector::from_fn(15, |_, _| rand::Rng::random_range(&mut r, -1.0..1.0)));
    }
    let mut best = (f64::INFINITY, DVector::zeros(15));
    for p in points {
        let (q, res) = fit.levenberg_marquardt(p, 200);
        if res < best.0 {
            best = (res, q);
        }
        // distance is √M times the coordinate residual
        if best.0 * 2.0 <= ACCEPT_TOL {
            break;
        }
    }
    if best.0 * 2.0 > ACCEPT_TOL {
        return Err(Error::NoSolution {
            best_residual: best.0 * 2.0,
            detail: "general two-element fit".into(),
        });
    }
    let mut u = fit.unitary(&best.1);
    fix_phase(&mut u);
    finish("general", vec![identity(4), u], delta_t, xi, wanted)
}

/// Kick on a Pauli string given by label, e.g. "XX".
pub fn kick_for(label: &str) -> Result<CMat> {
    Ok(pauli_kick(&label.parse::<PauliString>()?))
}
