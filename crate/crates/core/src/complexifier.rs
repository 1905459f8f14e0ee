//! Complexifiers `h(Y)` on the fibre of `T*K ≅ K × 𝔨`, their gradient map
//! and Hessian, and the pointwise identities they must satisfy.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};
use crate::linalg::max_abs_diff_real;

/// Complex time `τ = τ₁ + iτ₂` with `τ₂ ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tau {
    pub tau1: f64,
    pub tau2: f64,
}

impl Tau {
    pub fn new(tau1: f64, tau2: f64) -> Result<Self> {
        if !tau1.is_finite() || !tau2.is_finite() || tau2 < 0.0 {
            return Err(Error::InvalidConfig(format!("tau = {tau1} + {tau2}i must be finite with tau2 >= 0")));
        }
        Ok(Tau { tau1, tau2 })
    }

    pub const fn zero() -> Self {
        Tau { tau1: 0.0, tau2: 0.0 }
    }

    pub fn imaginary(tau2: f64) -> Self {
        Tau { tau1: 0.0, tau2 }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.tau1, self.tau2)
    }

    pub fn is_kahler(&self) -> bool {
        self.tau2 > 0.0
    }

    pub fn is_zero(&self) -> bool {
        self.tau1 == 0.0 && self.tau2 == 0.0
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.16e}{:+.16e}i", self.tau1, self.tau2)
    }
}

/// A point `(x, Y)` of `K × 𝔨`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub x: GroupElement,
    pub y: DVector<f64>,
}

impl PhasePoint {
    pub fn new(x: GroupElement, y: DVector<f64>) -> Self {
        PhasePoint { x, y }
    }

    /// Haar-random `x` and `Y` with independent coordinates uniform in
    /// `[-half_width, half_width]`.
    pub fn random<R: Rng + ?Sized>(model: &GroupModel, rng: &mut R, half_width: f64) -> Self {
        let x = model.random_element(rng);
        let y = DVector::from_fn(model.dim(), |_, _| half_width * (2.0 * rng.random::<f64>() - 1.0));
        PhasePoint { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplexifierKind {
    /// `h = |Y|²/2`.
    Quadratic,
    /// `h = Σ_j p(y_j)` with `p(y) = Σ_k c_k y^k`.
    AbelianProfile,
    /// `h = φ(|Y|²)` with `φ(q) = Σ_k c_k q^k`.
    RadialProfile,
}

/// Serialized descriptor `{"kind": ..., "coeffs": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexifierSpec {
    pub kind: ComplexifierKind,
    #[serde(default)]
    pub coeffs: Vec<f64>,
}

/// Polynomial `Σ c_k t^k` with its first two derivatives.
#[derive(Clone, Debug, PartialEq)]
struct Polynomial(Vec<f64>);

impl Polynomial {
    fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    fn d1(&self, t: f64) -> f64 {
        self.0.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, &c)| acc * t + k as f64 * c)
    }

    fn d2(&self, t: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .skip(2)
            .rev()
            .fold(0.0, |acc, (k, &c)| acc * t + (k * (k - 1)) as f64 * c)
    }
}

/// An Ad-invariant strictly convex function on the Lie algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Complexifier {
    spec: ComplexifierSpec,
    profile: Polynomial,
    dim: usize,
}

/// Lower bound certificate for the Hessian on a scanned domain.
#[derive(Clone, Copy, Debug)]
pub struct HessianCertificate {
    pub min_eigenvalue: f64,
    pub points: usize,
}

/// Maximal residuals of the pointwise complexifier identities.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityReport {
    /// `|[Y, u(Y)]|`.
    pub commutator: f64,
    /// `|ad_Y − H⁻¹ ad_u|` and `|ad_Y − ad_u H⁻¹|`.
    pub hessian_intertwining: f64,
    /// `|u(Ad_x Y) − Ad_x u(Y)|`.
    pub equivariance: f64,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.commutator.max(self.hessian_intertwining).max(self.equivariance)
    }
}

const INVERT_MAX_ITER: usize = 100;
const INVERT_TOL: f64 = 1e-10;

impl Complexifier {
    /// Builds and validates a complexifier for `model`. Per-coordinate
    /// profiles are rejected on non-abelian groups since they are not
    /// Ad-invariant.
    pub fn new(spec: ComplexifierSpec, model: &GroupModel) -> Result<Self> {
        if spec.kind == ComplexifierKind::AbelianProfile && !model.is_abelian() {
            return Err(Error::PropertyViolation(format!(
                "per-coordinate profile is not Ad-invariant on {}",
                model.name()
            )));
        }
        let c = Self::new_unchecked(spec, model.dim())?;
        c.check_profile()?;
        Ok(c)
    }

    /// Builds a complexifier without the Ad-invariance check. Used for the
    /// negative controls of the identity checks.
    pub fn new_unchecked(spec: ComplexifierSpec, dim: usize) -> Result<Self> {
        if spec.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidConfig("complexifier coefficients must be finite".into()));
        }
        let profile = match spec.kind {
            ComplexifierKind::Quadratic => {
                if !spec.coeffs.is_empty() {
                    return Err(Error::InvalidConfig("quadratic complexifier takes no coefficients".into()));
                }
                Polynomial(vec![0.0, 0.5])
            }
            _ => {
                if spec.coeffs.is_empty() {
                    return Err(Error::InvalidConfig("profile complexifier needs coefficients".into()));
                }
                Polynomial(spec.coeffs.clone())
            }
        };
        Ok(Complexifier { spec, profile, dim })
    }

    pub fn quadratic(model: &GroupModel) -> Self {
        Self::new(ComplexifierSpec { kind: ComplexifierKind::Quadratic, coeffs: vec![] }, model)
            .expect("quadratic complexifier is always valid")
    }

    /// The shipped quartic example: `Σ (y_j²/2 + y_j⁴/4)` on tori and
    /// `|Y|²/2 + |Y|⁴/4` on SU(2).
    pub fn quartic(model: &GroupModel) -> Self {
        let spec = if model.is_abelian() {
            ComplexifierSpec { kind: ComplexifierKind::AbelianProfile, coeffs: vec![0.0, 0.0, 0.5, 0.0, 0.25] }
        } else {
            ComplexifierSpec { kind: ComplexifierKind::RadialProfile, coeffs: vec![0.0, 0.5, 0.25] }
        };
        Self::new(spec, model).expect("quartic complexifier is valid")
    }

    /// Coefficient-level sanity: the Hessian at the origin must be positive
    /// definite and the leading coefficient nonnegative so that the profile is
    /// bounded below at infinity.
    fn check_profile(&self) -> Result<()> {
        let h0 = self.hessian_unchecked(&DVector::zeros(self.dim));
        let min = h0.symmetric_eigenvalues().min();
        if !(min > 0.0) {
            return Err(Error::PropertyViolation(format!("Hessian at the origin has eigenvalue {min}")));
        }
        if let Some(&lead) = self.profile.0.iter().rev().find(|c| **c != 0.0) {
            if lead < 0.0 {
                return Err(Error::PropertyViolation("profile has a negative leading coefficient".into()));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &ComplexifierSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_quadratic(&self) -> bool {
        self.spec.kind == ComplexifierKind::Quadratic
    }

    /// Short stable identifier of the descriptor, used as a cache key.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_string(&self.spec).expect("descriptor serializes");
        let digest = Sha256::digest(format!("{}|{}", self.dim, canonical).as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    fn check(&self, y: &DVector<f64>) {
        assert_eq!(y.len(), self.dim, "fibre vector has wrong dimension");
    }

    pub fn value(&self, y: &DVector<f64>) -> f64 {
        self.check(y);
        match self.spec.kind {
            ComplexifierKind::AbelianProfile => y.iter().map(|&t| self.profile.eval(t)).sum(),
            _ => self.profile.eval(y.norm_squared()),
        }
    }

    /// Gradient `u(Y) = ∇h(Y)` in orthonormal coordinates.
    pub fn grad_u(&self, y: &DVector<f64>) -> DVector<f64> {
        self.check(y);
        match self.spec.kind {
            ComplexifierKind::AbelianProfile => y.map(|t| self.profile.d1(t)),
            _ => y * (2.0 * self.profile.d1(y.norm_squared())),
        }
    }

    fn hessian_unchecked(&self, y: &DVector<f64>) -> DMatrix<f64> {
        match self.spec.kind {
            ComplexifierKind::AbelianProfile => DMatrix::from_diagonal(&y.map(|t| self.profile.d2(t))),
            _ => {
                let q = y.norm_squared();
                let n = self.dim;
                DMatrix::identity(n, n) * (2.0 * self.profile.d1(q)) + (y * y.transpose()) * (4.0 * self.profile.d2(q))
            }
        }
    }

    /// Hessian `H(Y)`; fails if it is not positive definite at `Y`.
    pub fn hessian(&self, y: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check(y);
        let h = self.hessian_unchecked(y);
        if h.clone().cholesky().is_none() {
            return Err(Error::PropertyViolation(format!("Hessian is not positive definite at {y:?}")));
        }
        Ok(h)
    }

    /// Eigenvalues of `H(Y)`, ascending.
    pub fn hessian_eigenvalues(&self, y: &DVector<f64>) -> Vec<f64> {
        self.check(y);
        let mut ev: Vec<f64> = self.hessian_unchecked(y).symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Solves `u(Y) = target` by damped Newton iteration started at
    /// `H(0)⁻¹·target`.
    pub fn invert_u(&self, target: &DVector<f64>) -> Result<DVector<f64>> {
        self.check(target);
        let tol = INVERT_TOL * target.norm().max(1.0);
        let h0 = self.hessian(&DVector::zeros(self.dim))?;
        let mut y = h0.lu().solve(target).ok_or(Error::SingularHessian)?;
        let mut residual = self.grad_u(&y) - target;
        for _ in 0..INVERT_MAX_ITER {
            let r = residual.norm();
            if r <= tol {
                return Ok(y);
            }
            let step = self.hessian(&y)?.lu().solve(&residual).ok_or(Error::SingularHessian)?;
            let mut t = 1.0;
            loop {
                let trial = &y - &step * t;
                let trial_res = self.grad_u(&trial) - target;
                if trial_res.norm() < r || t < 1e-12 {
                    y = trial;
                    residual = trial_res;
                    break;
                }
                t *= 0.5;
            }
        }
        let r = residual.norm();
        if r <= tol {
            Ok(y)
        } else {
            Err(Error::ConvergenceFailure { iterations: INVERT_MAX_ITER, residual: r })
        }
    }

    /// `κ(Y) = 2τ₂(⟨Y, u(Y)⟩ − h(Y))`.
    pub fn kahler_potential(&self, y: &DVector<f64>, tau2: f64) -> f64 {
        2.0 * tau2 * (y.dot(&self.grad_u(y)) - self.value(y))
    }

    /// Time-`t` flow of the Hamiltonian vector field of `h`.
    pub fn hamiltonian_flow(&self, model: &GroupModel, t: f64, p: &PhasePoint) -> PhasePoint {
        let u = self.grad_u(&p.y);
        let step = model.exp(&(u * t)).expect("fibre dimension matches model");
        PhasePoint { x: model.multiply(&p.x, &step), y: p.y.clone() }
    }

    /// Scans `H` on a grid of `[-radius, radius]^n` plus `random` extra
    /// points and checks the smallest eigenvalue against `lower_bound`.
    pub fn certify_hessian<R: Rng + ?Sized>(
        &self,
        radius: f64,
        grid: usize,
        random: usize,
        lower_bound: f64,
        rng: &mut R,
    ) -> Result<HessianCertificate> {
        let n = self.dim;
        let grid = grid.max(2);
        let mut min_eig = f64::INFINITY;
        let mut points = 0;
        let total = grid.pow(n as u32);
        for mut idx in 0..total {
            let y = DVector::from_fn(n, |_, _| {
                let k = idx % grid;
                idx /= grid;
                -radius + 2.0 * radius * k as f64 / (grid - 1) as f64
            });
            min_eig = min_eig.min(self.hessian_eigenvalues(&y)[0]);
            points += 1;
        }
        for _ in 0..random {
            let y = DVector::from_fn(n, |_, _| radius * (2.0 * rng.random::<f64>() - 1.0));
            min_eig = min_eig.min(self.hessian_eigenvalues(&y)[0]);
            points += 1;
        }
        if min_eig < lower_bound {
            return Err(Error::PropertyViolation(format!(
                "Hessian eigenvalue {min_eig} below the bound {lower_bound}"
            )));
        }
        Ok(HessianCertificate { min_eigenvalue: min_eig, points })
    }

    /// Evaluates the pointwise identities at the given samples.
    pub fn verify_identities(&self, model: &GroupModel, samples: &[PhasePoint]) -> IdentityReport {
        let mut report = IdentityReport::default();
        for p in samples {
            let u = self.grad_u(&p.y);
            let ad_y = model.ad_matrix(&p.y).expect("dimension");
            let ad_u = model.ad_matrix(&u).expect("dimension");
            report.commutator = report.commutator.max((&ad_y * &u).amax());
            let h = self.hessian_unchecked(&p.y);
            if let Some(h_inv) = h.try_inverse() {
                let left = max_abs_diff_real(&ad_y, &(&h_inv * &ad_u));
                let right = max_abs_diff_real(&ad_y, &(&ad_u * &h_inv));
                report.hessian_intertwining = report.hessian_intertwining.max(left).max(right);
            } else {
                report.hessian_intertwining = f64::INFINITY;
            }
            let ad = model.adjoint_action(&p.x);
            let moved = self.grad_u(&(&ad * &p.y));
            report.equivariance = report.equivariance.max((moved - &ad * &u).amax());
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::IrrepLabel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_pairs() -> Vec<(GroupModel, Complexifier)> {
        let mut out = Vec::new();
        for model in [GroupModel::circle(), GroupModel::torus(2), GroupModel::su2()] {
            out.push((model.clone(), Complexifier::quadratic(&model)));
            out.push((model.clone(), Complexifier::quartic(&model)));
        }
        out
    }

    #[test]
    fn gradient_examples() {
        let s1 = GroupModel::circle();
        let q = Complexifier::quadratic(&s1);
        let y = DVector::from_vec(vec![1.7]);
        assert_eq!(q.grad_u(&y), y);
        let quartic = Complexifier::quartic(&s1);
        for w in [-1.3, 0.0, 0.4, 2.0] {
            let u = quartic.grad_u(&DVector::from_vec(vec![w]))[0];
            assert!((u - (w + w * w * w)).abs() < 1e-14);
        }
        let su2 = GroupModel::su2();
        let radial = Complexifier::quartic(&su2);
        // φ = q/2 + q²/4, φ'(1) = 1, u = 2φ'(1)·Y
        let u = radial.grad_u(&DVector::from_vec(vec![0.0, 0.0, 1.0]));
        assert!((u - DVector::from_vec(vec![0.0, 0.0, 2.0])).norm() < 1e-15);
    }

    #[test]
    fn gradient_and_hessian_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let eps = 1e-5;
        for (model, c) in all_pairs() {
            let n = model.dim();
            for _ in 0..100 {
                let y = DVector::from_fn(n, |_, _| 3.0 * (2.0 * rng.random::<f64>() - 1.0));
                let u = c.grad_u(&y);
                let h = c.hessian(&y).unwrap();
                for j in 0..n {
                    let mut yp = y.clone();
                    let mut ym = y.clone();
                    yp[j] += eps;
                    ym[j] -= eps;
                    let fd = (c.value(&yp) - c.value(&ym)) / (2.0 * eps);
                    assert!((fd - u[j]).abs() < 1e-6 * u[j].abs().max(1.0));
                    let fd_col = (c.grad_u(&yp) - c.grad_u(&ym)) / (2.0 * eps);
                    for k in 0..n {
                        assert!((fd_col[k] - h[(k, j)]).abs() < 1e-6 * h[(k, j)].abs().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn hessian_examples() {
        let su2 = GroupModel::su2();
        let q = Complexifier::quadratic(&su2);
        assert_eq!(q.hessian(&DVector::from_vec(vec![0.3, -1.0, 2.0])).unwrap(), DMatrix::identity(3, 3));
        let s1 = GroupModel::circle();
        let quartic = Complexifier::quartic(&s1);
        let h = quartic.hessian(&DVector::from_vec(vec![0.7])).unwrap()[(0, 0)];
        assert!((h - (1.0 + 3.0 * 0.49)).abs() < 1e-14);
        let radial = Complexifier::quartic(&su2);
        assert_eq!(radial.hessian(&DVector::zeros(3)).unwrap(), DMatrix::identity(3, 3));
    }

    #[test]
    fn hessian_rejects_indefinite_profiles() {
        let s1 = GroupModel::circle();
        let spec = ComplexifierSpec { kind: ComplexifierKind::AbelianProfile, coeffs: vec![0.0, 0.0, 0.5, 0.0, -0.25] };
        assert!(Complexifier::new(spec.clone(), &s1).is_err());
        let c = Complexifier::new_unchecked(spec, 1).unwrap();
        assert!(matches!(c.hessian(&DVector::from_vec(vec![2.0])), Err(Error::PropertyViolation(_))));
        let flat = ComplexifierSpec { kind: ComplexifierKind::RadialProfile, coeffs: vec![1.0] };
        assert!(Complexifier::new(flat, &GroupModel::su2()).is_err());
    }

    #[test]
    fn abelian_profile_rejected_on_su2() {
        let spec = ComplexifierSpec { kind: ComplexifierKind::AbelianProfile, coeffs: vec![0.0, 0.0, 0.5] };
        assert!(matches!(Complexifier::new(spec, &GroupModel::su2()), Err(Error::PropertyViolation(_))));
    }

    #[test]
    fn hessian_certificate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (_, c) in all_pairs() {
            let cert = c.certify_hessian(4.0, 9, 100, 1.0 - 1e-12, &mut rng).unwrap();
            assert!(cert.min_eigenvalue >= 1.0 - 1e-12);
        }
        let c = Complexifier::quadratic(&GroupModel::circle());
        assert!(c.certify_hessian(1.0, 3, 0, 2.0, &mut rng).is_err());
    }

    #[test]
    fn invert_u_examples() {
        let su2 = GroupModel::su2();
        let q = Complexifier::quadratic(&su2);
        let target = DVector::from_vec(vec![0.4, -2.0, 1.5]);
        assert!((q.invert_u(&target).unwrap() - &target).norm() < 1e-14);
        let quartic = Complexifier::quartic(&GroupModel::circle());
        let w = quartic.invert_u(&DVector::from_vec(vec![2.0])).unwrap()[0];
        assert!((w - 1.0).abs() < 1e-12);
        assert!((w + w * w * w - 2.0).abs() < 1e-10);
    }

    #[test]
    fn invert_u_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (model, c) in all_pairs() {
            for _ in 0..100 {
                let y = DVector::from_fn(model.dim(), |_, _| 4.0 * (2.0 * rng.random::<f64>() - 1.0));
                let back = c.invert_u(&c.grad_u(&y)).unwrap();
                assert!((back - &y).amax() < 1e-9);
            }
        }
    }

    #[test]
    fn kahler_potential_examples() {
        let s1 = GroupModel::circle();
        let q = Complexifier::quadratic(&s1);
        let y = DVector::from_vec(vec![1.3]);
        assert!((q.kahler_potential(&y, 0.7) - 0.7 * 1.69).abs() < 1e-14);
        let quartic = Complexifier::quartic(&s1);
        for w in [0.0, 0.5, -1.2, 2.0] {
            let k = quartic.kahler_potential(&DVector::from_vec(vec![w]), 0.4);
            let expected = 0.4 * (w * w + 1.5 * w.powi(4));
            assert!((k - expected).abs() < 1e-13 * expected.max(1.0));
        }
        for (model, c) in all_pairs() {
            assert_eq!(c.kahler_potential(&DVector::zeros(model.dim()), 1.0), 0.0);
        }
    }

    #[test]
    fn kahler_potential_grows_quadratically_in_u() {
        // with m ≤ H ≤ M on the segment [0, Y]: κ ≥ τ₂ m |u|² / M²
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let tau2 = 0.8;
        for (model, c) in all_pairs() {
            for _ in 0..200 {
                let y = DVector::from_fn(model.dim(), |_, _| 5.0 * (2.0 * rng.random::<f64>() - 1.0));
                let u = c.grad_u(&y);
                let ev = c.hessian_eigenvalues(&y);
                let (m, big_m) = (1.0, ev[ev.len() - 1]);
                let k = c.kahler_potential(&y, tau2);
                assert!(k >= tau2 * m * u.norm_squared() / (big_m * big_m) * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn hamiltonian_flow_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let s1 = GroupModel::circle();
        let q = Complexifier::quadratic(&s1);
        let p = PhasePoint::new(GroupElement::Angles(DVector::from_vec(vec![1.0])), DVector::from_vec(vec![2.5]));
        assert_eq!(q.hamiltonian_flow(&s1, 0.0, &p), p);
        let moved = q.hamiltonian_flow(&s1, 3.0, &p);
        let GroupElement::Angles(theta) = &moved.x else { unreachable!() };
        let expected = (1.0 + 7.5f64).rem_euclid(2.0 * std::f64::consts::PI);
        assert!((theta[0] - expected).abs() < 1e-13);

        let su2 = GroupModel::su2();
        let radial = Complexifier::quartic(&su2);
        let rho = IrrepLabel::Spin { twice_j: 1 };
        for _ in 0..20 {
            let p = PhasePoint::random(&su2, &mut rng, 1.5);
            let twice = radial.hamiltonian_flow(&su2, 1.0, &radial.hamiltonian_flow(&su2, 1.0, &p));
            let direct = radial.hamiltonian_flow(&su2, 2.0, &p);
            assert_eq!(twice.y, p.y);
            let diff = crate::linalg::max_abs_diff(&su2.irrep_matrix(&rho, &twice.x), &su2.irrep_matrix(&rho, &direct.x));
            assert!(diff < 1e-10);
            assert_eq!(radial.value(&direct.y), radial.value(&p.y));
        }
    }

    #[test]
    fn identities_hold_for_invariant_complexifiers() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (model, c) in all_pairs() {
            let samples: Vec<PhasePoint> = (0..50).map(|_| PhasePoint::random(&model, &mut rng, 2.0)).collect();
            let report = c.verify_identities(&model, &samples);
            if model.is_abelian() {
                assert_eq!(report.max_residual(), 0.0);
            } else {
                assert!(report.max_residual() <= 1e-10, "{report:?}");
            }
        }
    }

    #[test]
    fn non_invariant_complexifier_is_flagged() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let su2 = GroupModel::su2();
        let spec = ComplexifierSpec { kind: ComplexifierKind::AbelianProfile, coeffs: vec![0.0, 0.0, 0.5, 0.0, 0.25] };
        let c = Complexifier::new_unchecked(spec, 3).unwrap();
        let samples: Vec<PhasePoint> = (0..50).map(|_| PhasePoint::random(&su2, &mut rng, 2.0)).collect();
        let report = c.verify_identities(&su2, &samples);
        assert!(report.equivariance > 0.1);
        assert!(report.commutator > 0.1);
    }

    #[test]
    fn fingerprint_depends_on_descriptor() {
        let s1 = GroupModel::circle();
        let a = Complexifier::quadratic(&s1).fingerprint();
        let b = Complexifier::quartic(&s1).fingerprint();
        assert_eq!(a.len(), 16);
        assert_ne!(a, b);
        assert_eq!(a, Complexifier::quadratic(&s1).fingerprint());
        assert_ne!(a, Complexifier::quadratic(&GroupModel::torus(2)).fingerprint());
    }

    #[test]
    fn tau_validation() {
        assert!(Tau::new(0.0, -1.0).is_err());
        assert!(Tau::new(f64::NAN, 1.0).is_err());
        assert!(Tau::new(1.0, 0.0).unwrap().tau2 == 0.0);
        assert!(!Tau::zero().is_kahler() && Tau::imaginary(0.1).is_kahler());
    }
}
