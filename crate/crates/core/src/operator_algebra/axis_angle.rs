//! SU(2) ↔ SO(3): axis–angle parameters of e^{i n̂·σ θ} and inversion of
//! (possibly partially specified) adjoint rotations.
//!
//! For U = e^{i n̂·σ θ} the adjoint rotation is
//!
//! ```text
//! R_αγ = cos(2θ) δ_αγ + 2 sin²θ n_α n_γ − sin(2θ) Σ_β ε_αβγ n_β
//! ```
//!
//! which is the active rotation about n̂ by −2θ. The pairs (n̂, θ),
//! (−n̂, −θ) and (n̂, θ + π) all give the same R.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, identity, CMat, RMat};

use super::adjoint::AdjointRotation;
use super::pauli::sigma_dot;

const UNIT_TOL: f64 = 1e-12;
/// Constraint consistency tolerance.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// Unit axis n̂ and angle θ of U = e^{i n̂·σ θ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisAngle {
    pub axis: [f64; 3],
    pub angle: f64,
}

impl AxisAngle {
    /// Normalizes nothing: the axis must already be a unit vector.
    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = Vector3::from(axis).norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::Domain(format!("axis norm {norm} is not 1")));
        }
        Ok(Self {
            axis,
            angle: canonical_angle(angle),
        })
    }

    pub fn identity() -> Self {
        Self {
            axis: [0.0, 0.0, 1.0],
            angle: 0.0,
        }
    }

    /// e^{i n̂·σ θ} = cos θ·I + i sin θ·n̂·σ.
    pub fn unitary(&self) -> CMat {
        identity(2) * c(self.angle.cos(), 0.0) + sigma_dot(&self.axis) * c(0.0, self.angle.sin())
    }

    /// The adjoint rotation of [`Self::unitary`], evaluated in closed form.
    pub fn rotation_matrix(&self) -> Matrix3<f64> {
        let n = Vector3::from(self.axis);
        let two_theta = 2.0 * self.angle;
        let s2 = self.angle.sin().powi(2);
        let mut r = Matrix3::identity() * two_theta.cos() + n * n.transpose() * (2.0 * s2);
        // −sin 2θ · [n]×, with ([n]×)_αγ = Σ_β ε_αβγ n_β
        r -= cross_matrix(&n) * two_theta.sin();
        r
    }

    pub fn rotation(&self) -> AdjointRotation {
        AdjointRotation {
            matrix: RMat::from_iterator(3, 3, self.rotation_matrix().iter().copied()),
            source_dim: 2,
        }
    }

    /// Canonical parameters of an SO(3) matrix: θ ∈ [0, π/2], and for
    /// θ = π/2 the axis sign is fixed by its first non-zero component.
    pub fn from_rotation_matrix(r: &Matrix3<f64>) -> Self {
        let anti = Vector3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]);
        // atan2 stays accurate near φ = π where acos of the trace does not
        let phi = (anti.norm() / 2.0).atan2((r.trace() - 1.0) / 2.0);
        let sin_phi = phi.sin();
        if phi < 1e-12 {
            return Self::identity();
        }
        let m = if sin_phi > 1e-6 {
            anti / (2.0 * sin_phi)
        } else {
            // φ ≈ π: (R + I)/2 = m mᵀ up to corrections of order (π − φ)².
            let s = (r + Matrix3::identity()) * 0.5;
            let k = (0..3)
                .max_by(|&a, &b| s[(a, a)].total_cmp(&s[(b, b)]))
                .unwrap_or(0);
            let mut col = s.column(k).into_owned() / s[(k, k)].max(1e-300).sqrt();
            if sin_phi > 0.0 {
                // Fix the sign from the small antisymmetric part when it is resolvable.
                if anti.dot(&col) < 0.0 {
                    col = -col;
                }
            }
            col
        };
        let m = m.normalize();
        // R = Rot(m, φ) = Rot(−m, −φ); with R(n, θ) = Rot(n, −2θ) take n = −m, θ = φ/2.
        let mut axis = -m;
        let angle = phi / 2.0;
        if (angle - FRAC_PI_2).abs() < 1e-12 {
            axis = canonical_sign(axis);
        }
        Self {
            axis: [axis[0], axis[1], axis[2]],
            angle,
        }
    }

    pub fn from_rotation(r: &AdjointRotation) -> Result<Self> {
        if r.source_dim != 2 || r.dim() != 3 {
            return Err(Error::Shape("axis-angle inversion needs an SO(3) rotation".into()));
        }
        Ok(Self::from_rotation_matrix(&to_matrix3(&r.matrix)))
    }

    /// True if both parameter sets describe the same adjoint rotation.
    pub fn same_rotation(&self, other: &Self, tol: f64) -> bool {
        (self.rotation_matrix() - other.rotation_matrix()).norm() <= tol
    }
}

/// Map θ into (−π, π].
pub fn canonical_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

fn cross_matrix(n: &Vector3<f64>) -> Matrix3<f64> {
    // entry (α, γ) = Σ_β ε_αβγ n_β
    Matrix3::new(0.0, -n[2], n[1], n[2], 0.0, -n[0], -n[1], n[0], 0.0)
}

fn canonical_sign(v: Vector3<f64>) -> Vector3<f64> {
    for k in 0..3 {
        if v[k].abs() > 1e-12 {
            return if v[k] < 0.0 { -v } else { v };
        }
    }
    v
}

pub(crate) fn to_matrix3(m: &RMat) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| m[(i, j)])
}

/// Active rotation by `phi` about unit axis `m` (Rodrigues).
#[cfg(test)]
fn rodrigues(m: &Vector3<f64>, phi: f64) -> Matrix3<f64> {
    let k = cross_matrix(m); // K v = m × v
    Matrix3::identity() * phi.cos() + m * m.transpose() * (1.0 - phi.cos()) + k * phi.sin()
}

/// Least-index coordinate axis orthogonal to `v`; when none exists, the
/// normalized projection of the least-index usable coordinate axis onto
/// the plane orthogonal to `v`.
pub fn canonical_orthogonal_axis(v: &[f64; 3]) -> [f64; 3] {
    let v = Vector3::from(*v);
    let vn = v.norm();
    if vn < 1e-300 {
        return [1.0, 0.0, 0.0];
    }
    let unit = v / vn;
    for k in 0..3 {
        if unit[k].abs() < 1e-12 {
            let mut e = [0.0; 3];
            e[k] = 1.0;
            return e;
        }
    }
    for k in 0..3 {
        let mut e = Vector3::zeros();
        e[k] = 1.0;
        let p = e - unit * unit.dot(&e);
        if p.norm() > 1e-6 {
            let p = p.normalize();
            return [p[0], p[1], p[2]];
        }
    }
    unreachable!("some coordinate axis has a non-trivial projection")
}

/// Constraints on an SO(3) rotation R = adjoint_of(U).
///
/// A pair (a, b) demands U†(a·σ)U = b·σ, i.e. Rᵀa = b. A specified row α
/// equal to v is the pair (e_α, v); a specified column β equal to w is the
/// pair (w, e_β). Isolated entries that do not complete a row or column are
/// only checked once the rotation is otherwise determined.
#[derive(Debug, Clone, Default)]
pub struct RotationConstraints {
    pub maps: Vec<([f64; 3], [f64; 3])>,
    pub entries: Vec<(usize, usize, f64)>,
}

impl RotationConstraints {
    pub fn new() -> Self {
        Self::default()
    }

    /// Demand U†(a·σ)U = b·σ.
    pub fn maps(mut self, from: [f64; 3], to: [f64; 3]) -> Self {
        self.maps.push((from, to));
        self
    }

    pub fn row(self, row: usize, values: [f64; 3]) -> Self {
        let mut e = [0.0; 3];
        e[row] = 1.0;
        self.maps(e, values)
    }

    pub fn column(self, col: usize, values: [f64; 3]) -> Self {
        let mut e = [0.0; 3];
        e[col] = 1.0;
        self.maps(values, e)
    }

    pub fn is_satisfied_by(&self, r: &Matrix3<f64>, tol: f64) -> bool {
        self.maps.iter().all(|(a, b)| {
            (r.transpose() * Vector3::from(*a) - Vector3::from(*b)).norm() <= tol
        }) && self
            .entries
            .iter()
            .all(|&(i, j, v)| (r[(i, j)] - v).abs() <= tol)
    }
}

/// A 3×3 rotation with some entries left free.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PartialRotation {
    pub entries: [[Option<f64>; 3]; 3],
}

impl PartialRotation {
    pub fn free() -> Self {
        Self::default()
    }

    pub fn full(m: &Matrix3<f64>) -> Self {
        let mut p = Self::default();
        for i in 0..3 {
            for j in 0..3 {
                p.entries[i][j] = Some(m[(i, j)]);
            }
        }
        p
    }

    pub fn set(mut self, row: usize, col: usize, value: f64) -> Self {
        self.entries[row][col] = Some(value);
        self
    }

    pub fn with_row(mut self, row: usize, values: [f64; 3]) -> Self {
        for (j, v) in values.into_iter().enumerate() {
            self.entries[row][j] = Some(v);
        }
        self
    }

    pub fn constraints(&self) -> RotationConstraints {
        let mut cons = RotationConstraints::new();
        let mut used = [[false; 3]; 3];
        for i in 0..3 {
            if let [Some(a), Some(b), Some(c)] = self.entries[i] {
                cons = cons.row(i, [a, b, c]);
                used[i] = [true; 3];
            }
        }
        for j in 0..3 {
            if let (Some(a), Some(b), Some(c)) = (self.entries[0][j], self.entries[1][j], self.entries[2][j]) {
                cons = cons.column(j, [a, b, c]);
                for row in used.iter_mut() {
                    row[j] = true;
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                if let (Some(v), false) = (self.entries[i][j], used[i][j]) {
                    cons.entries.push((i, j, v));
                }
            }
        }
        cons
    }
}

/// Specification of one parameter of the solution set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Fixed(f64),
    Free,
}

/// Solution set of a rotation inversion, with free parameters explicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RotationSolution {
    /// Nothing constrained.
    Unconstrained,
    /// Only the identity: θ = 0 and the axis is free.
    Identity,
    /// A single rotation, up to (n̂, θ) ↔ (−n̂, −θ).
    Unique { solution: AxisAngle },
    /// Rotations about a fixed axis by any angle.
    FixedAxis { axis: [f64; 3] },
    /// θ = ±π/2 about any axis orthogonal to `normal`.
    HalfTurn { normal: [f64; 3] },
    /// R = Rot(pivot, ψ)·R(base) for free ψ, where Rot is the active
    /// rotation about the unit vector `pivot`.
    OneParameter { base: AxisAngle, pivot: [f64; 3] },
}

/// Free/fixed view of a solution set in (n̂, θ) terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub theta: Param,
    pub axis: [Param; 3],
    /// Additional linear constraint n̂·v = 0 not expressible per component.
    pub axis_orthogonal_to: Option<[f64; 3]>,
}

impl RotationSolution {
    /// Canonical member: minimal angle, least-index orthogonal axis, θ ≥ 0.
    pub fn representative(&self) -> AxisAngle {
        match self {
            Self::Unconstrained | Self::Identity | Self::FixedAxis { .. } => AxisAngle::identity(),
            Self::Unique { solution } => *solution,
            Self::HalfTurn { normal } => AxisAngle {
                axis: canonical_orthogonal_axis(normal),
                angle: FRAC_PI_2,
            },
            Self::OneParameter { base, .. } => *base,
        }
    }

    pub fn is_unique(&self) -> bool {
        matches!(self, Self::Unique { .. } | Self::Identity)
    }

    pub fn summary(&self) -> SolutionSummary {
        let free = [Param::Free; 3];
        match self {
            Self::Unconstrained | Self::OneParameter { .. } => SolutionSummary {
                theta: Param::Free,
                axis: free,
                axis_orthogonal_to: None,
            },
            Self::Identity => SolutionSummary {
                theta: Param::Fixed(0.0),
                axis: free,
                axis_orthogonal_to: None,
            },
            Self::Unique { solution } => SolutionSummary {
                theta: Param::Fixed(solution.angle),
                axis: solution.axis.map(Param::Fixed),
                axis_orthogonal_to: None,
            },
            Self::FixedAxis { axis } => SolutionSummary {
                theta: Param::Free,
                axis: axis.map(Param::Fixed),
                axis_orthogonal_to: None,
            },
            Self::HalfTurn { normal } => {
                let nz: Vec<usize> = (0..3).filter(|&k| normal[k].abs() > 1e-12).collect();
                if nz.len() == 1 {
                    let mut axis = free;
                    axis[nz[0]] = Param::Fixed(0.0);
                    SolutionSummary {
                        theta: Param::Fixed(FRAC_PI_2),
                        axis,
                        axis_orthogonal_to: None,
                    }
                } else {
                    SolutionSummary {
                        theta: Param::Fixed(FRAC_PI_2),
                        axis: free,
                        axis_orthogonal_to: Some(*normal),
                    }
                }
            }
        }
    }

    /// Whether a given (n̂, θ) belongs to the set.
    pub fn contains(&self, aa: &AxisAngle, tol: f64) -> bool {
        let r = aa.rotation_matrix();
        match self {
            Self::Unconstrained => true,
            Self::Identity => (r - Matrix3::identity()).norm() <= tol,
            Self::Unique { solution } => (r - solution.rotation_matrix()).norm() <= tol,
            Self::FixedAxis { axis } => {
                let a = Vector3::from(*axis);
                (r.transpose() * a - a).norm() <= tol
            }
            Self::HalfTurn { normal } => {
                let a = Vector3::from(*normal).normalize();
                (r.transpose() * a + a).norm() <= tol
            }
            Self::OneParameter { base, pivot } => {
                let p = Vector3::from(*pivot);
                let target = base.rotation_matrix().transpose() * p;
                // members satisfy Rᵀ p = R(base)ᵀ p
                (r.transpose() * p - target).norm() <= tol
            }
        }
    }
}

/// Invert the adjoint map for SU(2): all (n̂, θ) whose rotation satisfies
/// the constraints.
pub fn unitary_from_rotation(constraints: &RotationConstraints) -> Result<RotationSolution> {
    let mut pairs: Vec<(Vector3<f64>, Vector3<f64>)> = Vec::new();
    for (a, b) in &constraints.maps {
        let a = Vector3::from(*a);
        let b = Vector3::from(*b);
        let (na, nb) = (a.norm(), b.norm());
        if na < 1e-14 {
            if nb > CONSTRAINT_TOL {
                return Err(Error::Infeasible("zero vector cannot rotate onto a non-zero one".into()));
            }
            continue;
        }
        if (na - nb).abs() > CONSTRAINT_TOL * na.max(1.0) {
            return Err(Error::Infeasible(format!(
                "rotations preserve length: |a| = {na}, |b| = {nb}"
            )));
        }
        pairs.push((a / na, b / nb));
    }
    for (i, (ai, bi)) in pairs.iter().enumerate() {
        for (aj, bj) in &pairs[i + 1..] {
            if (ai.dot(aj) - bi.dot(bj)).abs() > CONSTRAINT_TOL {
                return Err(Error::Infeasible("constraints do not preserve angles".into()));
            }
        }
    }

    let check_entries = |r: &Matrix3<f64>| -> Result<()> {
        for &(i, j, v) in &constraints.entries {
            if (r[(i, j)] - v).abs() > CONSTRAINT_TOL {
                return Err(Error::Infeasible(format!(
                    "entry ({i},{j}) = {v} conflicts with the determined rotation ({})",
                    r[(i, j)]
                )));
            }
        }
        Ok(())
    };

    let Some((a1, b1)) = pairs.first().copied() else {
        if constraints.entries.is_empty() {
            return Ok(RotationSolution::Unconstrained);
        }
        return Err(Error::Domain(
            "isolated entries without a complete row or column are not supported".into(),
        ));
    };

    let second = pairs.iter().find(|(a, _)| a1.cross(a).norm() > 1e-6).copied();
    match second {
        None => {
            if !constraints.entries.is_empty() {
                return Err(Error::Domain(
                    "isolated entries on an underdetermined rotation are not supported".into(),
                ));
            }
            let dot = a1.dot(&b1);
            if (b1 - a1).norm() < CONSTRAINT_TOL {
                Ok(RotationSolution::FixedAxis {
                    axis: [a1[0], a1[1], a1[2]],
                })
            } else if (b1 + a1).norm() < CONSTRAINT_TOL {
                Ok(RotationSolution::HalfTurn {
                    normal: [a1[0], a1[1], a1[2]],
                })
            } else {
                // Minimal Q = Rᵀ with Q a = b: active rotation about a × b by acos(a·b).
                let k = a1.cross(&b1).normalize();
                let phi = dot.clamp(-1.0, 1.0).acos();
                // Q = Rot(k, φ) and R(n, θ)ᵀ = Rot(n, 2θ).
                let base = AxisAngle {
                    axis: [k[0], k[1], k[2]],
                    angle: phi / 2.0,
                };
                Ok(RotationSolution::OneParameter {
                    base,
                    pivot: [a1[0], a1[1], a1[2]],
                })
            }
        }
        Some((a2, b2)) => {
            let frame = |u: Vector3<f64>, v: Vector3<f64>| {
                let e1 = u;
                let e2 = (v - e1 * e1.dot(&v)).normalize();
                let e3 = e1.cross(&e2);
                Matrix3::from_columns(&[e1, e2, e3])
            };
            let q = frame(b1, b2) * frame(a1, a2).transpose();
            for (a, b) in &pairs {
                if (q * a - b).norm() > CONSTRAINT_TOL {
                    return Err(Error::Infeasible("constraints admit no common rotation".into()));
                }
            }
            let r = q.transpose();
            check_entries(&r)?;
            if (r - Matrix3::identity()).norm() < 1e-12 {
                Ok(RotationSolution::Identity)
            } else {
                Ok(RotationSolution::Unique {
                    solution: AxisAngle::from_rotation_matrix(&r),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;
    use crate::operator_algebra::{adjoint_of, build_pauli_basis, pauli};
    use crate::random::{random_axis_angle, rng};

    #[test]
    fn closed_form_matches_conjugation() {
        let basis = build_pauli_basis(1).unwrap();
        let mut r = rng(3);
        for _ in 0..50 {
            let aa = random_axis_angle(&mut r);
            let direct = adjoint_of(&aa.unitary(), &basis).unwrap();
            let closed = aa.rotation_matrix();
            assert!((to_matrix3(&direct.matrix) - closed).norm() < 1e-10);
        }
    }

    #[test]
    fn row_three_flipped_gives_half_turn_in_xy_plane() {
        let cons = PartialRotation::free().with_row(2, [0.0, 0.0, -1.0]).constraints();
        let sol = unitary_from_rotation(&cons).unwrap();
        assert_eq!(sol, RotationSolution::HalfTurn { normal: [0.0, 0.0, 1.0] });
        let summary = sol.summary();
        assert_eq!(summary.theta, Param::Fixed(FRAC_PI_2));
        assert_eq!(summary.axis, [Param::Free, Param::Free, Param::Fixed(0.0)]);
        let rep = sol.representative();
        assert_eq!(rep.axis, [1.0, 0.0, 0.0]);
        assert!(sol.contains(&AxisAngle::new([0.6, 0.8, 0.0], -FRAC_PI_2).unwrap(), 1e-12));
        assert!(!sol.contains(&AxisAngle::new([0.6, 0.0, 0.8], FRAC_PI_2).unwrap(), 1e-6));
    }

    #[test]
    fn full_identity_leaves_axis_free() {
        let sol = unitary_from_rotation(&PartialRotation::full(&Matrix3::identity()).constraints()).unwrap();
        assert_eq!(sol, RotationSolution::Identity);
        assert_eq!(sol.summary().theta, Param::Fixed(0.0));
        assert_eq!(sol.summary().axis, [Param::Free; 3]);
    }

    #[test]
    fn quarter_turn_about_y_recovers_axis_and_half_angle() {
        // R of e^{iσy·π/4}: a π/2 rotation in the x–z plane.
        let u = AxisAngle::new([0.0, 1.0, 0.0], std::f64::consts::FRAC_PI_4).unwrap();
        let basis = build_pauli_basis(1).unwrap();
        let r = to_matrix3(&adjoint_of(&u.unitary(), &basis).unwrap().matrix);
        let sol = unitary_from_rotation(&PartialRotation::full(&r).constraints()).unwrap();
        let RotationSolution::Unique { solution } = sol else {
            panic!("expected unique solution, got {sol:?}");
        };
        assert!((Vector3::from(solution.axis) - Vector3::new(0.0, 1.0, 0.0)).norm() < 1e-12);
        assert!((solution.angle - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        // conjugation oracle: U†σ_αU = Σ_β R_αβ σ_β
        let uu = solution.unitary();
        for a in 0..3 {
            let lhs = uu.adjoint() * pauli(a as u8 + 1) * &uu;
            let rhs = (0..3).fold(CMat::zeros(2, 2), |acc, b| acc + pauli(b as u8 + 1) * c(r[(a, b)], 0.0));
            assert!(frobenius(&(lhs - rhs)) < 1e-12);
        }
    }

    #[test]
    fn two_flipped_rows_pin_the_y_axis() {
        let cons = RotationConstraints::new()
            .row(2, [0.0, 0.0, -1.0])
            .row(0, [-1.0, 0.0, 0.0]);
        let sol = unitary_from_rotation(&cons).unwrap();
        let RotationSolution::Unique { solution } = sol else { panic!() };
        assert!((Vector3::from(solution.axis) - Vector3::new(0.0, 1.0, 0.0)).norm() < 1e-12);
        assert!((solution.angle - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn inconsistent_constraints_are_infeasible() {
        let cons = RotationConstraints::new().row(0, [0.0, 2.0, 0.0]);
        assert!(matches!(unitary_from_rotation(&cons), Err(Error::Infeasible(_))));
        let cons = RotationConstraints::new()
            .row(0, [0.0, 1.0, 0.0])
            .row(1, [0.0, 1.0, 0.0]);
        assert!(matches!(unitary_from_rotation(&cons), Err(Error::Infeasible(_))));
        let stray = PartialRotation::full(&Matrix3::identity()).set(0, 1, 0.5);
        assert!(matches!(unitary_from_rotation(&stray.constraints()), Err(Error::Infeasible(_))));
    }

    #[test]
    fn generic_single_constraint_is_one_parameter_family() {
        let a = [0.0, 0.0, 1.0];
        let b = [0.6, 0.0, 0.8];
        let sol = unitary_from_rotation(&RotationConstraints::new().maps(a, b)).unwrap();
        let RotationSolution::OneParameter { base, .. } = sol else { panic!() };
        let r = base.rotation_matrix();
        assert!((r.transpose() * Vector3::from(a) - Vector3::from(b)).norm() < 1e-12);
        assert!(sol.contains(&base, 1e-12));
        // members along the family satisfy the same constraint
        let member = rodrigues(&Vector3::from(a), 0.7) * r;
        assert!((member.transpose() * Vector3::from(a) - Vector3::from(b)).norm() < 1e-12);
    }

    #[test]
    fn angle_canonicalization() {
        assert!((canonical_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(canonical_angle(PI), PI);
        assert!((canonical_angle(-PI) - PI).abs() < 1e-15);
    }

    #[test]
    fn rodrigues_agrees_with_closed_form() {
        let aa = AxisAngle::new([0.0, 0.6, 0.8], 0.4).unwrap();
        let via = rodrigues(&Vector3::from(aa.axis), -0.8);
        assert!((via - aa.rotation_matrix()).norm() < 1e-14);
    }
}
