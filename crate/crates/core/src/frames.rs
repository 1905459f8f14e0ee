//! Holomorphic frames and coframes of the complex structure induced by a
//! complexifier at complex time `τ`, with the pointwise Kähler checks.
//!
//! Tangent vectors at `(x, Y)` are written `(X, V)` with `X` the
//! left-invariant component over `{X_k}` and `V` the fibre component over
//! `{∂/∂y^k}`. One-forms are written over `{w^k, dy^k}` where `w^k` is the
//! left-invariant Maurer–Cartan coframe.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::complexifier::{Complexifier, PhasePoint, Tau};
use crate::error::{Error, Result};
use crate::group::GroupModel;
use crate::linalg::{antisymmetric_function, hermitian_eigen, max_abs_diff, to_complex, CMatrix, I};

const SERIES_THRESHOLD: f64 = 1e-6;

/// Frame `Z_j = Σ_k Zx_{jk} X_k + Zy_{jk} ∂/∂y^k` together with its dual
/// coframe `Ω^j = Σ_k Ww_{jk} w^k + Wy_{jk} dy^k`.
#[derive(Clone, Debug)]
pub struct FrameData {
    pub zx: CMatrix,
    pub zy: CMatrix,
    pub ww: CMatrix,
    pub wy: CMatrix,
    pub at: PhasePoint,
    pub tau: Tau,
    ad_y: DMatrix<f64>,
    ad_u: DMatrix<f64>,
    hessian: DMatrix<f64>,
}

/// Block matrix of the canonical symplectic form at `(x, Y)`:
/// `ω((X,V),(Z,W)) = ⟨W,X⟩ − ⟨V,Z⟩ − ⟨X, ad_Y Z⟩`, and the canonical
/// one-form `θ = Σ y^j w^j`.
#[derive(Clone, Debug)]
pub struct SymplecticData {
    pub block: DMatrix<f64>,
    pub theta: DVector<f64>,
}

impl SymplecticData {
    pub fn at(model: &GroupModel, y: &DVector<f64>) -> Result<Self> {
        Ok(Self::from_ad(&model.ad_matrix(y)?, y))
    }

    fn from_ad(ad: &DMatrix<f64>, y: &DVector<f64>) -> Self {
        let n = ad.nrows();
        let mut block = DMatrix::zeros(2 * n, 2 * n);
        block.view_mut((0, 0), (n, n)).copy_from(&(-ad));
        block.view_mut((0, n), (n, n)).fill_with_identity();
        block.view_mut((n, 0), (n, n)).copy_from(&(-DMatrix::identity(n, n)));
        SymplecticData { block, theta: y.clone() }
    }

    /// Complex-bilinear evaluation `ω(a, b)`.
    pub fn eval(&self, a: &DVector<Complex64>, b: &DVector<Complex64>) -> Complex64 {
        (a.transpose() * to_complex(&self.block) * b)[(0, 0)]
    }
}

/// `(1 − e^{−τz})/z` with its value `τ` at the origin.
fn coframe_kernel(tau: Complex64, z: Complex64) -> Complex64 {
    if (tau * z).norm() < SERIES_THRESHOLD {
        tau - tau * tau * z / 2.0 + tau * tau * tau * z * z / 6.0
    } else {
        (1.0 - (-tau * z).exp()) / z
    }
}

/// Builds `Ω_τ` from `e^{−τ ad_u}` and `(1 − e^{−τ ad_u})/ad_u · H`, then the
/// frame `Z_τ` as the solution of `Ω(Z) = 1`, `Ω̄(Z) = 0`.
pub fn build_frame(model: &GroupModel, c: &Complexifier, p: &PhasePoint, tau: Tau) -> Result<FrameData> {
    if !tau.is_kahler() {
        return Err(Error::NotKahler(tau.tau2));
    }
    let n = model.dim();
    if p.y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.y.len() });
    }
    let t = tau.as_complex();
    let u = c.grad_u(&p.y);
    let hessian = c.hessian(&p.y).map_err(|_| Error::SingularHessian)?;
    let ad_u = model.ad_matrix(&u)?;
    let ad_y = model.ad_matrix(&p.y)?;

    let ww = antisymmetric_function(&ad_u, |z| (-t * z).exp());
    let wy = antisymmetric_function(&ad_u, |z| coframe_kernel(t, z)) * to_complex(&hessian);

    let mut system = CMatrix::zeros(2 * n, 2 * n);
    system.view_mut((0, 0), (n, n)).copy_from(&ww);
    system.view_mut((0, n), (n, n)).copy_from(&wy);
    system.view_mut((n, 0), (n, n)).copy_from(&ww.map(|z| z.conj()));
    system.view_mut((n, n), (n, n)).copy_from(&wy.map(|z| z.conj()));
    let mut rhs = CMatrix::zeros(2 * n, n);
    rhs.view_mut((0, 0), (n, n)).fill_with_identity();
    let solution = system.lu().solve(&rhs).ok_or(Error::SingularHessian)?;
    let zx = solution.rows(0, n).transpose();
    let zy = solution.rows(n, n).transpose();

    Ok(FrameData { zx, zy, ww, wy, at: p.clone(), tau, ad_y, ad_u, hessian })
}

impl FrameData {
    pub fn dim(&self) -> usize {
        self.zx.nrows()
    }

    /// `Z_j` as a vector `(X, V)` of length `2n`.
    pub fn vector(&self, j: usize) -> DVector<Complex64> {
        let n = self.dim();
        DVector::from_fn(2 * n, |k, _| if k < n { self.zx[(j, k)] } else { self.zy[(j, k - n)] })
    }

    /// Max deviation of `Ω^j(Z_k)` from `δ^j_k` and of `Ω̄^j(Z_k)` from 0.
    pub fn duality_residual(&self) -> f64 {
        let n = self.dim();
        let pairing = &self.ww * self.zx.transpose() + &self.wy * self.zy.transpose();
        let conj_pairing = self.ww.map(|z| z.conj()) * self.zx.transpose() + self.wy.map(|z| z.conj()) * self.zy.transpose();
        max_abs_diff(&pairing, &CMatrix::identity(n, n)).max(conj_pairing.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    fn symplectic(&self) -> SymplecticData {
        SymplecticData::from_ad(&self.ad_y, &self.at.y)
    }

    /// `max_{j,k} |ω(Z_j, Z_k)|`, zero for a Lagrangian `(1,0)` distribution.
    pub fn type11_residual(&self) -> f64 {
        let omega = self.symplectic();
        let n = self.dim();
        let vs: Vec<_> = (0..n).map(|j| self.vector(j)).collect();
        let mut worst: f64 = 0.0;
        for a in &vs {
            for b in &vs {
                worst = worst.max(omega.eval(a, b).norm());
            }
        }
        worst
    }

    /// `M_{jk} = i ω(Z̄_j, Z_k)`.
    pub fn positivity_matrix(&self) -> CMatrix {
        let omega = self.symplectic();
        let n = self.dim();
        let vs: Vec<_> = (0..n).map(|j| self.vector(j)).collect();
        CMatrix::from_fn(n, n, |j, k| I * omega.eval(&vs[j].map(|z| z.conj()), &vs[k]))
    }

    /// Smallest eigenvalue of the positivity matrix; fails unless it is
    /// positive.
    pub fn min_positivity_eigenvalue(&self) -> Result<f64> {
        let (ev, _) = hermitian_eigen(&self.positivity_matrix());
        let min = ev[0];
        if min > 0.0 {
            Ok(min)
        } else {
            Err(Error::PositivityFailure(min))
        }
    }

    /// Compares `M` with the closed form on the joint eigenvectors of
    /// `H⁻¹` (eigenvalue `β`) and `ad_u` (eigenvalue `iλ`):
    /// `λβ e^{−λτ₂} / (2 sinh λτ₂)`, equal to `β/(2τ₂)` at `λ = 0`.
    /// Returns the largest `|M v − μ v|` over the basis together with the
    /// closed-form eigenvalues.
    pub fn positivity_closed_form(&self) -> (f64, Vec<f64>) {
        let n = self.dim();
        let tau2 = self.tau.tau2;
        let h_inv = to_complex(&self.hessian.clone().try_inverse().expect("Hessian is invertible"));
        let i_ad = to_complex(&self.ad_u).map(|z| z * I);
        // generic combination separates the joint eigenspaces
        let probe = &i_ad + &h_inv * Complex64::new(0.618_033_988_749_894_9, 0.0);
        let (_, basis) = hermitian_eigen(&probe);
        let m = self.positivity_matrix();
        let mut worst: f64 = 0.0;
        let mut values = Vec::with_capacity(n);
        for k in 0..n {
            let v = basis.column(k).into_owned();
            let rayleigh = |a: &CMatrix| (v.adjoint() * a * &v)[(0, 0)].re;
            // i·ad_u v = −λ v
            let lambda = -rayleigh(&i_ad);
            let beta = rayleigh(&h_inv);
            let x = lambda * tau2;
            let mu = if x.abs() < SERIES_THRESHOLD {
                beta / (2.0 * tau2) * (1.0 - x)
            } else {
                lambda * beta * (-x).exp() / (2.0 * x.sinh())
            };
            values.push(mu);
            let r = (&m * &v - &v * Complex64::new(mu, 0.0)).norm();
            worst = worst.max(r);
        }
        values.sort_by(f64::total_cmp);
        (worst, values)
    }

    /// Residuals of `θ(Z_j) = (1/2 + iτ₁/(2τ₂)) y^j` and
    /// `Z_j(⟨Y,u⟩ − h) = −(i/(2τ₂)) y^j`; returns the larger.
    pub fn theta_residual(&self) -> f64 {
        let y = to_complex(&DMatrix::from_column_slice(self.dim(), 1, self.at.y.as_slice()));
        let (t1, t2) = (self.tau.tau1, self.tau.tau2);
        let theta = &self.zx * &y;
        let target = &y * Complex64::new(0.5, t1 / (2.0 * t2));
        let potential = &self.zy * to_complex(&self.hessian) * &y;
        let target_pot = &y * Complex64::new(0.0, -1.0 / (2.0 * t2));
        max_abs_diff(&theta, &target).max(max_abs_diff(&potential, &target_pot))
    }

    /// Half-form norm from the coefficient determinant of `(Ω̄, Ω)`
    /// against the Liouville form: `sqrt(det C / (2i)^n)`.
    pub fn halfform_det(&self) -> Complex64 {
        let n = self.dim();
        let mut c = CMatrix::zeros(2 * n, 2 * n);
        c.view_mut((0, 0), (n, n)).copy_from(&self.ww.map(|z| z.conj()));
        c.view_mut((0, n), (n, n)).copy_from(&self.wy.map(|z| z.conj()));
        c.view_mut((n, 0), (n, n)).copy_from(&self.ww);
        c.view_mut((n, n), (n, n)).copy_from(&self.wy);
        (c.determinant() / (2.0 * I).powu(n as u32)).sqrt()
    }
}

/// Closed-form half-form norm `τ₂^{n/2} η(τ₂ u) (det H)^{1/2}`.
pub fn halfform_norm(model: &GroupModel, c: &Complexifier, y: &DVector<f64>, tau: Tau) -> Result<f64> {
    if !tau.is_kahler() {
        return Err(Error::NotKahler(tau.tau2));
    }
    let n = model.dim() as f64;
    let u = c.grad_u(y);
    let det = c.hessian(y)?.determinant();
    Ok(tau.tau2.powf(n / 2.0) * model.eta(&(u * tau.tau2)) * det.sqrt())
}

/// Summary of all pointwise checks at one `(point, τ)` sample.
#[derive(Clone, Debug)]
pub struct GeometryRow {
    pub tau: Tau,
    pub duality_residual: f64,
    pub type11_residual: f64,
    pub min_eigenvalue: f64,
    pub positivity_closed_form_residual: f64,
    pub theta_residual: f64,
    pub halfform_closed: f64,
    pub halfform_det: Complex64,
}

/// Tolerances for [`GeometryRow::passes`].
pub const DUALITY_TOL: f64 = 1e-10;
pub const TYPE11_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-9;
pub const THETA_TOL: f64 = 1e-10;
pub const HALFFORM_TOL: f64 = 1e-9;

impl GeometryRow {
    pub fn compute(model: &GroupModel, c: &Complexifier, p: &PhasePoint, tau: Tau) -> Result<Self> {
        let frame = build_frame(model, c, p, tau)?;
        let (eig, _) = hermitian_eigen(&frame.positivity_matrix());
        Ok(GeometryRow {
            tau,
            duality_residual: frame.duality_residual(),
            type11_residual: frame.type11_residual(),
            min_eigenvalue: eig[0],
            positivity_closed_form_residual: frame.positivity_closed_form().0,
            theta_residual: frame.theta_residual(),
            halfform_closed: halfform_norm(model, c, &p.y, tau)?,
            halfform_det: frame.halfform_det(),
        })
    }

    pub fn halfform_discrepancy(&self) -> f64 {
        (self.halfform_det - Complex64::new(self.halfform_closed, 0.0)).norm() / self.halfform_closed.max(1.0)
    }

    pub fn passes(&self) -> bool {
        self.duality_residual <= DUALITY_TOL
            && self.type11_residual <= TYPE11_TOL
            && self.min_eigenvalue > 0.0
            && self.positivity_closed_form_residual <= POSITIVITY_TOL
            && self.theta_residual <= THETA_TOL
            && self.halfform_discrepancy() <= HALFFORM_TOL
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::expm_taylor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pairs() -> Vec<(GroupModel, Complexifier)> {
        let mut out = Vec::new();
        for model in [GroupModel::circle(), GroupModel::torus(2), GroupModel::su2()] {
            out.push((model.clone(), Complexifier::quadratic(&model)));
            out.push((model.clone(), Complexifier::quartic(&model)));
        }
        out
    }

    fn random_tau(rng: &mut ChaCha8Rng) -> Tau {
        Tau::new(4.0 * rng.random::<f64>() - 2.0, 0.2 + 1.8 * rng.random::<f64>()).unwrap()
    }

    fn point(model: &GroupModel, y: &[f64]) -> PhasePoint {
        PhasePoint::new(model.identity(), DVector::from_column_slice(y))
    }

    /// Tangent frame from the explicit vector-field formula, built with Taylor
    /// exponentials and series at the removable singularity.
    fn oracle_frame(model: &GroupModel, c: &Complexifier, p: &PhasePoint, tau: Tau) -> (CMatrix, CMatrix) {
        let (t1, t2) = (tau.tau1, tau.tau2);
        let tb = Complex64::new(t1, -t2);
        let u = c.grad_u(&p.y);
        let a = to_complex(&model.ad_matrix(&u).unwrap());
        let h_inv = to_complex(&c.hessian(&p.y).unwrap().try_inverse().unwrap());
        let (mu, v) = hermitian_eigen(&a.map(|z| z * I));
        let apply = |f: &dyn Fn(Complex64) -> Complex64| {
            let d = CMatrix::from_diagonal(&DVector::from_iterator(mu.len(), mu.iter().map(|&m| f(Complex64::new(0.0, -m)))));
            &v * d * v.adjoint()
        };
        let g = |z: Complex64| {
            if z.norm() < 1e-6 {
                Complex64::new(0.5, t1 / (2.0 * t2)) + z * I * (t1 * t1 + t2 * t2) / (4.0 * t2)
            } else {
                (I * t2 * z).exp() * (1.0 - (tb * z).exp()) / (2.0 * I * (t2 * z).sin())
            }
        };
        let k = |z: Complex64| {
            if z.norm() < 1e-6 {
                Complex64::new(0.0, -1.0 / (2.0 * t2)) + z * 0.5
            } else {
                z * (I * t2 * z).exp() / (2.0 * I * (t2 * z).sin())
            }
        };
        let zx = apply(&g).transpose();
        let zy = (apply(&k) * h_inv).transpose();
        (zx, zy)
    }

    #[test]
    fn frame_matches_vector_field_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for (model, c) in pairs() {
            for _ in 0..40 {
                let p = PhasePoint::random(&model, &mut rng, 1.2);
                let tau = random_tau(&mut rng);
                let f = build_frame(&model, &c, &p, tau).unwrap();
                let (zx, zy) = oracle_frame(&model, &c, &p, tau);
                let scale = zx.norm().max(zy.norm()).max(1.0);
                assert!(max_abs_diff(&f.zx, &zx) < 1e-10 * scale, "{}", model.name());
                assert!(max_abs_diff(&f.zy, &zy) < 1e-10 * scale);
            }
        }
    }

    #[test]
    fn abelian_coframe_is_shifted_by_tau_hessian() {
        let t2 = GroupModel::torus(2);
        let c = Complexifier::quartic(&t2);
        let p = point(&t2, &[0.3, -0.8]);
        let tau = Tau::new(0.4, 1.1).unwrap();
        let f = build_frame(&t2, &c, &p, tau).unwrap();
        assert!(max_abs_diff(&f.ww, &CMatrix::identity(2, 2)) < 1e-15);
        let expected = to_complex(&c.hessian(&p.y).unwrap()).map(|z| z * tau.as_complex());
        assert!(max_abs_diff(&f.wy, &expected) < 1e-14);
    }

    #[test]
    fn quadratic_su2_coframe_at_tau_i() {
        let su2 = GroupModel::su2();
        let c = Complexifier::quadratic(&su2);
        let p = point(&su2, &[0.4, -0.2, 0.9]);
        let f = build_frame(&su2, &c, &p, Tau::imaginary(1.0)).unwrap();
        let ad = to_complex(&su2.ad_matrix(&p.y).unwrap());
        let oracle = expm_taylor(&ad.map(|z| -I * z));
        assert!(max_abs_diff(&f.ww, &oracle) < 1e-13);
        assert!(f.duality_residual() < 1e-13);
    }

    #[test]
    fn rejects_non_kahler_tau() {
        let s1 = GroupModel::circle();
        let c = Complexifier::quadratic(&s1);
        let p = point(&s1, &[0.5]);
        assert!(matches!(build_frame(&s1, &c, &p, Tau::new(1.0, 0.0).unwrap()), Err(Error::NotKahler(_))));
    }

    #[test]
    fn type11_and_theta_examples() {
        let s1 = GroupModel::circle();
        let c = Complexifier::quadratic(&s1);
        let f = build_frame(&s1, &c, &point(&s1, &[1.3]), Tau::imaginary(0.7)).unwrap();
        assert!(f.type11_residual() < 1e-15);
        let theta = (f.zx[(0, 0)] * 1.3 - Complex64::new(0.65, 0.0)).norm();
        assert!(theta < 1e-15);
        let zero = build_frame(&s1, &c, &point(&s1, &[0.0]), Tau::new(0.3, 0.7).unwrap()).unwrap();
        assert_eq!(zero.theta_residual(), 0.0);
    }

    #[test]
    fn positivity_examples() {
        let s1 = GroupModel::circle();
        let q = Complexifier::quadratic(&s1);
        let f = build_frame(&s1, &q, &point(&s1, &[0.8]), Tau::imaginary(1.0)).unwrap();
        assert!((f.positivity_matrix()[(0, 0)] - Complex64::new(0.5, 0.0)).norm() < 1e-15);

        let quartic = Complexifier::quartic(&s1);
        let (w, t2) = (0.6, 0.9);
        let f = build_frame(&s1, &quartic, &point(&s1, &[w]), Tau::new(-0.4, t2).unwrap()).unwrap();
        let expected = 1.0 / (2.0 * t2 * (1.0 + 3.0 * w * w));
        assert!((f.positivity_matrix()[(0, 0)] - Complex64::new(expected, 0.0)).norm() < 1e-14);

        // Cartan point: ad_u eigenvalues 0, ±i|u|; β from H⁻¹
        let su2 = GroupModel::su2();
        let radial = Complexifier::quartic(&su2);
        let r = 0.7;
        let t2 = 0.8;
        let f = build_frame(&su2, &radial, &point(&su2, &[0.0, 0.0, r]), Tau::new(0.2, t2).unwrap()).unwrap();
        let (ev, _) = hermitian_eigen(&f.positivity_matrix());
        let q = r * r;
        let u = r * (1.0 + q);
        let beta_perp = 1.0 / (1.0 + q);
        let beta_par = 1.0 / (1.0 + 3.0 * q);
        let closed = |l: f64, b: f64| l * b * (-l * t2).exp() / (2.0 * (l * t2).sinh());
        let mut expected = vec![closed(u, beta_perp), closed(-u, beta_perp), beta_par / (2.0 * t2)];
        expected.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{ev:?} vs {expected:?}");
        }
    }

    #[test]
    fn pointwise_checks_at_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for (model, c) in pairs() {
            for _ in 0..50 {
                let p = PhasePoint::random(&model, &mut rng, 1.2);
                let row = GeometryRow::compute(&model, &c, &p, random_tau(&mut rng)).unwrap();
                assert!(row.passes(), "{} {:?}", model.name(), row);
            }
        }
    }

    #[test]
    fn halfform_examples() {
        let s1 = GroupModel::circle();
        let q = Complexifier::quadratic(&s1);
        let y = DVector::from_vec(vec![0.9]);
        let v = halfform_norm(&s1, &q, &y, Tau::imaginary(0.49)).unwrap();
        assert!((v - 0.7).abs() < 1e-15);
        let quartic = Complexifier::quartic(&s1);
        let w = 0.5;
        let v = halfform_norm(&s1, &quartic, &DVector::from_vec(vec![w]), Tau::imaginary(0.36)).unwrap();
        assert!((v - 0.6 * (1.0f64 + 3.0 * w * w).sqrt()).abs() < 1e-14);
        let su2 = GroupModel::su2();
        let y = DVector::from_vec(vec![0.3, 0.4, 1.2]);
        let t2 = 0.7;
        let v = halfform_norm(&su2, &Complexifier::quadratic(&su2), &y, Tau::imaginary(t2)).unwrap();
        let r = y.norm();
        let expected = t2.powf(1.5) * (t2 * r).sinh() / (t2 * r);
        assert!((v - expected).abs() < 1e-14);
    }

    #[test]
    fn halfform_is_independent_of_tau1() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for (model, c) in pairs() {
            let p = PhasePoint::random(&model, &mut rng, 1.0);
            let base = build_frame(&model, &c, &p, Tau::new(0.0, 0.6).unwrap()).unwrap().halfform_det();
            for t1 in [-1.5, 0.4, 2.0] {
                let v = build_frame(&model, &c, &p, Tau::new(t1, 0.6).unwrap()).unwrap().halfform_det();
                assert!((v - base).norm() < 1e-10);
            }
        }
    }

    /// RK4 integration of `dW/ds = τ(−ad_u W + [0 | H])` from the vertical
    /// coframe `[1 | 0]`.
    fn transported_coframe(model: &GroupModel, c: &Complexifier, y: &DVector<f64>, tau: Tau, steps: usize) -> CMatrix {
        let n = model.dim();
        let t = tau.as_complex();
        let a = to_complex(&model.ad_matrix(&c.grad_u(y)).unwrap());
        let mut src = CMatrix::zeros(n, 2 * n);
        src.view_mut((0, n), (n, n)).copy_from(&to_complex(&c.hessian(y).unwrap()));
        let rhs = |w: &CMatrix| (-(&a * w) + &src).map(|z| z * t);
        let mut w = CMatrix::zeros(n, 2 * n);
        w.view_mut((0, 0), (n, n)).fill_with_identity();
        let h = 1.0 / steps as f64;
        for _ in 0..steps {
            let k1 = rhs(&w);
            let k2 = rhs(&(&w + &k1 * Complex64::new(h / 2.0, 0.0)));
            let k3 = rhs(&(&w + &k2 * Complex64::new(h / 2.0, 0.0)));
            let k4 = rhs(&(&w + &k3 * Complex64::new(h, 0.0)));
            let two = Complex64::new(2.0, 0.0);
            w += (k1 + k2 * two + k3 * two + k4).map(|z| z * (h / 6.0));
        }
        w
    }

    #[test]
    fn coframe_matches_transport_along_the_flow() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for (model, c) in pairs() {
            for _ in 0..10 {
                let p = PhasePoint::random(&model, &mut rng, 1.0);
                let tau = random_tau(&mut rng);
                let f = build_frame(&model, &c, &p, tau).unwrap();
                let w = transported_coframe(&model, &c, &p.y, tau, 400);
                let n = model.dim();
                assert!(max_abs_diff(&w.columns(0, n).into_owned(), &f.ww) < 1e-6);
                assert!(max_abs_diff(&w.columns(n, n).into_owned(), &f.wy) < 1e-6);
            }
        }
    }

    #[test]
    fn symplectic_block_is_antisymmetric() {
        let su2 = GroupModel::su2();
        let s = SymplecticData::at(&su2, &DVector::from_vec(vec![0.2, -1.0, 0.5])).unwrap();
        assert_eq!(s.block.transpose(), -&s.block);
    }
}
