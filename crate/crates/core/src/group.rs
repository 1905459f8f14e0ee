//! Lie-theoretic data for the shipped compact groups: the circle, tori and
//! SU(2).
//!
//! Conventions: the Lie algebra carries a fixed orthonormal basis `{T_j}`.
//! For SU(2), `T_j = -(i/2)σ_j`, so `[T_k, T_l] = ε_{klm} T_m` and the
//! structure constants are `C^j_{kl} = ε_{jkl}`. For tori `T_j = ∂/∂θ_j`.
//! Integrals over the group always use the Haar probability measure.

use std::f64::consts::PI;
use std::fmt;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{log_sum_exp, sinhc, ln_sinhc, tree_sum_complex, CMatrix, I};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ModelKind {
    Circle,
    Torus(usize),
    Su2,
}

/// A compact group `K` together with the Lie data used throughout the crate.
///
/// Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupModel {
    kind: ModelKind,
    /// `C^j_{kl}` stored at `j*n*n + k*n + l`.
    structure: Vec<f64>,
    positive_roots: Vec<DVector<f64>>,
}

/// A point of `K`.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupElement {
    /// Angle vector in `[0, 2π)^n` for the circle and tori.
    Angles(DVector<f64>),
    /// Unitary unimodular 2×2 matrix.
    Su2(Matrix2<Complex64>),
}

/// Label of an irreducible representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrrepLabel {
    /// Character `θ ↦ e^{i k·θ}` of a torus (length-1 vector for the circle).
    Charges(Vec<i64>),
    /// Spin `j = twice_j / 2` representation of SU(2).
    Spin { twice_j: u32 },
}

impl IrrepLabel {
    pub fn circle(n: i64) -> Self {
        IrrepLabel::Charges(vec![n])
    }

    pub fn spin_half_units(twice_j: u32) -> Self {
        IrrepLabel::Spin { twice_j }
    }

    pub fn dim(&self) -> usize {
        match self {
            IrrepLabel::Charges(_) => 1,
            IrrepLabel::Spin { twice_j } => *twice_j as usize + 1,
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            IrrepLabel::Charges(k) => k.iter().all(|&c| c == 0),
            IrrepLabel::Spin { twice_j } => *twice_j == 0,
        }
    }

    /// JSON form used in section files: integer (circle), integer array
    /// (torus) or spin string such as `"3/2"` (SU(2)).
    pub fn to_json(&self) -> Value {
        match self {
            IrrepLabel::Charges(k) if k.len() == 1 => Value::from(k[0]),
            IrrepLabel::Charges(k) => Value::from(k.clone()),
            IrrepLabel::Spin { .. } => Value::from(self.to_string()),
        }
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepLabel::Charges(k) => {
                let parts: Vec<String> = k.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(";"))
            }
            IrrepLabel::Spin { twice_j } if twice_j % 2 == 0 => write!(f, "{}", twice_j / 2),
            IrrepLabel::Spin { twice_j } => write!(f, "{}/2", twice_j),
        }
    }
}

/// Result of a Haar-measure quadrature with a convergence flag obtained by
/// comparing two successive orders.
#[derive(Clone, Copy, Debug)]
pub struct HaarEstimate {
    pub value: Complex64,
    pub discrepancy: f64,
    pub converged: bool,
}

const HAAR_TOL: f64 = 1e-10;

impl GroupModel {
    pub fn circle() -> Self {
        Self::torus(1)
    }

    pub fn torus(n: usize) -> Self {
        assert!(n > 0, "torus dimension must be positive");
        let kind = if n == 1 { ModelKind::Circle } else { ModelKind::Torus(n) };
        GroupModel {
            kind,
            structure: vec![0.0; n * n * n],
            positive_roots: Vec::new(),
        }
    }

    pub fn su2() -> Self {
        let n = 3;
        let mut structure = vec![0.0; n * n * n];
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    structure[j * 9 + k * 3 + l] = levi_civita(j, k, l);
                }
            }
        }
        GroupModel {
            kind: ModelKind::Su2,
            structure,
            // α(y T_3) = y: ad_{yT_3} has eigenvalues ±iy
            positive_roots: vec![DVector::from_vec(vec![0.0, 0.0, 1.0])],
        }
    }

    /// Parses `"s1"`, `"torus:<n>"` or `"su2"`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim() {
            "s1" => Ok(Self::circle()),
            "su2" => Ok(Self::su2()),
            other => {
                let n = other
                    .strip_prefix("torus:")
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::InvalidConfig(format!("unknown model name {other:?}")))?;
                Ok(Self::torus(n))
            }
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            ModelKind::Circle => "s1".to_string(),
            ModelKind::Torus(n) => format!("torus:{n}"),
            ModelKind::Su2 => "su2".to_string(),
        }
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            ModelKind::Circle => 1,
            ModelKind::Torus(n) => n,
            ModelKind::Su2 => 3,
        }
    }

    pub fn is_abelian(&self) -> bool {
        !matches!(self.kind, ModelKind::Su2)
    }

    /// `C^j_{kl}`.
    pub fn structure_constant(&self, j: usize, k: usize, l: usize) -> f64 {
        let n = self.dim();
        self.structure[j * n * n + k * n + l]
    }

    pub fn positive_roots(&self) -> &[DVector<f64>] {
        &self.positive_roots
    }

    fn check_len(&self, v: &DVector<f64>) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(())
    }

    /// `(ad_Y)^j_k = Σ_i y^i C^j_{ik}`.
    pub fn ad_matrix(&self, y: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.check_len(y)?;
        let n = self.dim();
        Ok(DMatrix::from_fn(n, n, |j, k| {
            (0..n).map(|i| y[i] * self.structure_constant(j, i, k)).sum()
        }))
    }

    /// Lie bracket in orthonormal coordinates.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(self.ad_matrix(x)? * y)
    }

    /// Matrix of `Ad_x` on the Lie algebra in the orthonormal basis.
    pub fn adjoint_action(&self, x: &GroupElement) -> DMatrix<f64> {
        match (self.kind, x) {
            (ModelKind::Su2, GroupElement::Su2(u)) => {
                let s = pauli();
                let ud = u.adjoint();
                DMatrix::from_fn(3, 3, |j, k| 0.5 * (s[j] * u * s[k] * ud).trace().re)
            }
            (_, GroupElement::Angles(_)) => DMatrix::identity(self.dim(), self.dim()),
            _ => panic!("group element does not belong to model {}", self.name()),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self.kind {
            ModelKind::Su2 => GroupElement::Su2(Matrix2::identity()),
            _ => GroupElement::Angles(DVector::zeros(self.dim())),
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (a, b) {
            (GroupElement::Angles(x), GroupElement::Angles(y)) => {
                GroupElement::Angles((x + y).map(wrap_angle))
            }
            (GroupElement::Su2(x), GroupElement::Su2(y)) => GroupElement::Su2(x * y),
            _ => panic!("cannot multiply elements of different groups"),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        match a {
            GroupElement::Angles(x) => GroupElement::Angles(x.map(|t| wrap_angle(-t))),
            GroupElement::Su2(u) => GroupElement::Su2(u.adjoint()),
        }
    }

    /// Exponential of a Lie-algebra element, `exp(Σ X^j T_j)`.
    pub fn exp(&self, x: &DVector<f64>) -> Result<GroupElement> {
        self.check_len(x)?;
        Ok(match self.kind {
            ModelKind::Su2 => GroupElement::Su2(su2_exp(x)),
            _ => GroupElement::Angles(x.map(wrap_angle)),
        })
    }

    /// Checks that the element belongs to this model.
    pub fn check_element(&self, x: &GroupElement) -> Result<()> {
        match (self.kind, x) {
            (ModelKind::Su2, GroupElement::Su2(u)) => {
                let dev = (u.adjoint() * u - Matrix2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max);
                let det = (u.determinant() - Complex64::new(1.0, 0.0)).norm();
                if dev > 1e-12 || det > 1e-12 {
                    return Err(Error::InvalidConfig(format!(
                        "matrix is not in SU(2): unitarity defect {dev:e}, det defect {det:e}"
                    )));
                }
                Ok(())
            }
            (ModelKind::Su2, _) => Err(Error::InvalidConfig("expected an SU(2) matrix".into())),
            (_, GroupElement::Angles(a)) if a.len() == self.dim() => Ok(()),
            (_, GroupElement::Angles(a)) => Err(Error::DimensionMismatch { expected: self.dim(), got: a.len() }),
            _ => Err(Error::InvalidConfig("expected an angle vector".into())),
        }
    }

    /// Haar-distributed random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        match self.kind {
            ModelKind::Su2 => {
                let c: f64 = rng.random();
                let xi1 = rng.random::<f64>() * 2.0 * PI;
                let xi2 = rng.random::<f64>() * 2.0 * PI;
                GroupElement::Su2(hopf_element(c, xi1, xi2))
            }
            _ => GroupElement::Angles(DVector::from_fn(self.dim(), |_, _| rng.random::<f64>() * 2.0 * PI)),
        }
    }

    /// Irreps with highest weight bounded by `cutoff`: `|k_i| ≤ ⌊cutoff⌋` for
    /// tori, `j ≤ cutoff` for SU(2). Sorted by label.
    pub fn catalog(&self, cutoff: f64) -> Vec<IrrepLabel> {
        match self.kind {
            ModelKind::Su2 => (0..=(2.0 * cutoff + 1e-9).floor() as u32)
                .map(|twice_j| IrrepLabel::Spin { twice_j })
                .collect(),
            _ => {
                let n_max = (cutoff + 1e-9).floor() as i64;
                let mut out = vec![Vec::new()];
                for _ in 0..self.dim() {
                    out = out
                        .into_iter()
                        .flat_map(|prefix: Vec<i64>| {
                            (-n_max..=n_max).map(move |c| {
                                let mut v = prefix.clone();
                                v.push(c);
                                v
                            })
                        })
                        .collect();
                }
                let mut labels: Vec<IrrepLabel> = out.into_iter().map(IrrepLabel::Charges).collect();
                labels.sort();
                labels
            }
        }
    }

    pub fn validate_irrep(&self, rho: &IrrepLabel) -> Result<()> {
        match (self.kind, rho) {
            (ModelKind::Su2, IrrepLabel::Spin { .. }) => Ok(()),
            (ModelKind::Su2, _) => Err(Error::UnknownIrrep(rho.to_string())),
            (_, IrrepLabel::Charges(k)) if k.len() == self.dim() => Ok(()),
            _ => Err(Error::UnknownIrrep(rho.to_string())),
        }
    }

    /// Parses an irrep label from its text form (`"3"`, `"1;-2"`, `"3/2"`).
    pub fn parse_irrep(&self, text: &str) -> Result<IrrepLabel> {
        let bad = || Error::UnknownIrrep(text.to_string());
        let label = match self.kind {
            ModelKind::Su2 => {
                let t = text.trim();
                let twice_j = if let Some(num) = t.strip_suffix("/2") {
                    let v: u32 = num.trim().parse().map_err(|_| bad())?;
                    if v % 2 == 0 {
                        return Err(bad());
                    }
                    v
                } else {
                    let v: f64 = t.parse().map_err(|_| bad())?;
                    let tj = 2.0 * v;
                    if v < 0.0 || (tj - tj.round()).abs() > 1e-12 {
                        return Err(bad());
                    }
                    tj.round() as u32
                };
                IrrepLabel::Spin { twice_j }
            }
            _ => {
                let charges: std::result::Result<Vec<i64>, _> =
                    text.split(';').map(|s| s.trim().parse::<i64>()).collect();
                IrrepLabel::Charges(charges.map_err(|_| bad())?)
            }
        };
        self.validate_irrep(&label)?;
        Ok(label)
    }

    /// Interprets the JSON form written by [`IrrepLabel::to_json`]; spins may
    /// also be given as numbers such as `0.5`.
    pub fn irrep_from_json(&self, value: &Value) -> Result<IrrepLabel> {
        let label = match value {
            Value::String(s) => return self.parse_irrep(s),
            Value::Number(num) => match self.kind {
                ModelKind::Su2 => return self.parse_irrep(&num.to_string()),
                _ => IrrepLabel::Charges(vec![num
                    .as_i64()
                    .ok_or_else(|| Error::UnknownIrrep(num.to_string()))?]),
            },
            Value::Array(items) => {
                let charges: Option<Vec<i64>> = items.iter().map(|v| v.as_i64()).collect();
                IrrepLabel::Charges(charges.ok_or_else(|| Error::UnknownIrrep(value.to_string()))?)
            }
            _ => return Err(Error::UnknownIrrep(value.to_string())),
        };
        self.validate_irrep(&label)?;
        Ok(label)
    }

    /// Anti-Hermitian generator image `dρ(T_j)`.
    pub fn generator(&self, rho: &IrrepLabel, j: usize) -> CMatrix {
        match rho {
            IrrepLabel::Charges(k) => CMatrix::from_element(1, 1, I * k[j] as f64),
            IrrepLabel::Spin { twice_j } => spin_operators(*twice_j)[j].map(|z| -I * z),
        }
    }

    /// `dρ(X) = Σ X^j dρ(T_j)`.
    pub fn generator_image(&self, rho: &IrrepLabel, x: &DVector<f64>) -> CMatrix {
        let d = rho.dim();
        let mut out = CMatrix::zeros(d, d);
        for j in 0..self.dim() {
            out += self.generator(rho, j).map(|z| z * x[j]);
        }
        out
    }

    /// `ρ(x)` for `x ∈ K`.
    pub fn irrep_matrix(&self, rho: &IrrepLabel, x: &GroupElement) -> CMatrix {
        match (rho, x) {
            (IrrepLabel::Charges(k), GroupElement::Angles(theta)) => {
                let phase: f64 = k.iter().zip(theta.iter()).map(|(&c, t)| c as f64 * t).sum();
                CMatrix::from_element(1, 1, Complex64::from_polar(1.0, phase))
            }
            (IrrepLabel::Spin { twice_j }, GroupElement::Su2(u)) => spin_matrix(*twice_j, u),
            _ => panic!("irrep {rho} does not match the group element"),
        }
    }

    /// `ρ(x)·exp(z·dρ(X))`, the holomorphic extension of `ρ` evaluated at
    /// `x e^{zX} ∈ K_ℂ`.
    pub fn irrep_complexified(&self, rho: &IrrepLabel, x: &GroupElement, z: Complex64, xv: &DVector<f64>) -> CMatrix {
        let base = self.irrep_matrix(rho, x);
        match rho {
            IrrepLabel::Charges(k) => {
                let kx: f64 = k.iter().zip(xv.iter()).map(|(&c, v)| c as f64 * v).sum();
                base.map(|b| b * (z * I * kx).exp())
            }
            IrrepLabel::Spin { twice_j } => {
                let r = xv.norm();
                if r == 0.0 || z == Complex64::new(0.0, 0.0) {
                    return base;
                }
                // dρ(X) = -i (X·J) with X·J Hermitian
                let ops = spin_operators(*twice_j);
                let d = rho.dim();
                let mut h = CMatrix::zeros(d, d);
                for (j, op) in ops.iter().enumerate() {
                    h += op.map(|v| v * xv[j]);
                }
                let (mu, v) = crate::linalg::hermitian_eigen(&h);
                let diag = CMatrix::from_diagonal(&DVector::from_iterator(
                    d,
                    mu.iter().map(|&m| (-I * z * m).exp()),
                ));
                base * (&v * diag * v.adjoint())
            }
        }
    }

    /// `χ_ρ(e^{zX})`.
    pub fn character(&self, rho: &IrrepLabel, z: Complex64, xv: &DVector<f64>) -> Complex64 {
        match rho {
            IrrepLabel::Charges(k) => {
                let kx: f64 = k.iter().zip(xv.iter()).map(|(&c, v)| c as f64 * v).sum();
                (z * I * kx).exp()
            }
            IrrepLabel::Spin { twice_j } => {
                let r = xv.norm();
                (0..=*twice_j)
                    .map(|i| {
                        let m = *twice_j as f64 / 2.0 - i as f64;
                        (-I * z * m * r).exp()
                    })
                    .sum()
            }
        }
    }

    /// `ln χ_ρ(e^{isX})` for real `s`. The character is real and positive on
    /// this line, which lets norm integrands be evaluated in log space.
    pub fn ln_character_imaginary(&self, rho: &IrrepLabel, s: f64, xv: &DVector<f64>) -> f64 {
        match rho {
            IrrepLabel::Charges(k) => {
                let kx: f64 = k.iter().zip(xv.iter()).map(|(&c, v)| c as f64 * v).sum();
                -s * kx
            }
            IrrepLabel::Spin { twice_j } => {
                let r = xv.norm();
                log_sum_exp((0..=*twice_j).map(|i| {
                    let m = *twice_j as f64 / 2.0 - i as f64;
                    s * m * r
                }))
            }
        }
    }

    /// The point `|Y|·T_3` of the Cartan line conjugate to `Y` (SU(2)); the
    /// identity map for abelian models.
    fn to_cartan(&self, y: &DVector<f64>) -> DVector<f64> {
        match self.kind {
            ModelKind::Su2 => DVector::from_vec(vec![0.0, 0.0, y.norm()]),
            _ => y.clone(),
        }
    }

    /// `η(Y) = Π_{α>0} sinh α(Y) / α(Y)`.
    pub fn eta(&self, y: &DVector<f64>) -> f64 {
        let yc = self.to_cartan(y);
        self.positive_roots.iter().map(|a| sinhc(a.dot(&yc))).product()
    }

    pub fn ln_eta(&self, y: &DVector<f64>) -> f64 {
        let yc = self.to_cartan(y);
        self.positive_roots.iter().map(|a| ln_sinhc(a.dot(&yc))).sum()
    }

    /// Quadrature nodes for the Haar probability measure.
    ///
    /// Tori: `2·order` trapezoid points per angle, exact for trigonometric
    /// polynomials of degree `< 2·order`. SU(2): Hopf coordinates
    /// `(cos²η, ξ₁, ξ₂)` with Gauss–Legendre in `cos²η` and trapezoid in the
    /// angles, exact for matrix-entry polynomials of degree `< 2·order`.
    pub fn haar_nodes(&self, order: usize) -> Vec<(GroupElement, f64)> {
        let order = order.max(1);
        let m = 2 * order;
        let angles: Vec<f64> = (0..m).map(|k| 2.0 * PI * k as f64 / m as f64).collect();
        match self.kind {
            ModelKind::Su2 => {
                let gl = GaussLegendre::new(NonZeroUsize::new(order).expect("order > 0"));
                let mut nodes = Vec::with_capacity(order * m * m);
                for &(t, w) in gl.as_node_weight_pairs() {
                    let c = 0.5 * (t + 1.0);
                    for &xi1 in &angles {
                        for &xi2 in &angles {
                            nodes.push((
                                GroupElement::Su2(hopf_element(c, xi1, xi2)),
                                0.5 * w / (m * m) as f64,
                            ));
                        }
                    }
                }
                nodes
            }
            _ => {
                let n = self.dim();
                let total = m.pow(n as u32);
                let w = 1.0 / total as f64;
                (0..total)
                    .map(|mut idx| {
                        let mut theta = DVector::zeros(n);
                        for axis in 0..n {
                            theta[axis] = angles[idx % m];
                            idx /= m;
                        }
                        (GroupElement::Angles(theta), w)
                    })
                    .collect()
            }
        }
    }

    /// `∫_K f dx` for the Haar probability measure, compared across orders
    /// `order` and `order + 1`.
    pub fn haar_expectation<F>(&self, f: F, order: usize) -> HaarEstimate
    where
        F: Fn(&GroupElement) -> Complex64,
    {
        let eval = |ord: usize| {
            let terms: Vec<Complex64> = self.haar_nodes(ord).iter().map(|(x, w)| f(x) * *w).collect();
            tree_sum_complex(&terms)
        };
        let low = eval(order);
        let high = eval(order + 1);
        let discrepancy = (high - low).norm();
        HaarEstimate {
            value: high,
            discrepancy,
            converged: discrepancy <= HAAR_TOL * high.norm().max(1.0),
        }
    }
}

fn levi_civita(j: usize, k: usize, l: usize) -> f64 {
    match (j, k, l) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn wrap_angle(t: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI { 0.0 } else { r }
}

fn pauli() -> [Matrix2<Complex64>; 3] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    [
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -I, I, o),
        Matrix2::new(l, o, o, -l),
    ]
}

fn su2_exp(x: &DVector<f64>) -> Matrix2<Complex64> {
    let r = x.norm();
    let s = pauli();
    let half = 0.5 * r;
    // sin(r/2)/r, with the r → 0 limit 1/2
    let sr = if r < 1e-8 { 0.5 - r * r / 48.0 } else { half.sin() / r };
    let mut gen = Matrix2::zeros();
    for j in 0..3 {
        gen += s[j] * Complex64::new(x[j], 0.0);
    }
    Matrix2::identity() * Complex64::new(half.cos(), 0.0) - gen * (I * sr)
}

fn hopf_element(c: f64, xi1: f64, xi2: f64) -> Matrix2<Complex64> {
    let a = Complex64::from_polar(c.sqrt(), xi1);
    let b = Complex64::from_polar((1.0 - c).max(0.0).sqrt(), xi2);
    Matrix2::new(a, b, -b.conj(), a.conj())
}

/// Hermitian spin operators `(J_x, J_y, J_z)` in the basis `|j, m⟩`,
/// `m = j, j-1, …, -j` (Condon–Shortley phases).
pub(crate) fn spin_operators(twice_j: u32) -> [CMatrix; 3] {
    let d = twice_j as usize + 1;
    let j = twice_j as f64 / 2.0;
    let mut jp = CMatrix::zeros(d, d);
    for i in 1..d {
        // J_+ |m⟩ = sqrt((j-m)(j+m+1)) |m+1⟩ with m = j - i
        let v = (i as f64 * (twice_j as f64 - i as f64 + 1.0)).sqrt();
        jp[(i - 1, i)] = Complex64::new(v, 0.0);
    }
    let jm = jp.transpose();
    let jx = (&jp + &jm).map(|z| z * 0.5);
    let jy = (&jp - &jm).map(|z| z / (2.0 * I));
    let jz = CMatrix::from_diagonal(&DVector::from_fn(d, |i, _| Complex64::new(j - i as f64, 0.0)));
    [jx, jy, jz]
}

/// Spin-`j` representation of an arbitrary complex 2×2 matrix via its action
/// on homogeneous polynomials of degree `2j`; holomorphic in the entries, so
/// it is also the representation of `SL(2, ℂ)`.
pub(crate) fn spin_matrix(twice_j: u32, u: &Matrix2<Complex64>) -> CMatrix {
    let tj = twice_j as usize;
    let d = tj + 1;
    let (a, b, c, dd) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let fact: Vec<f64> = (0..=tj).scan(1.0, |acc, k| {
        if k > 0 {
            *acc *= k as f64;
        }
        Some(*acc)
    }).collect();
    let binom = |n: usize, k: usize| fact[n] / (fact[k] * fact[n - k]);
    CMatrix::from_fn(d, d, |row, col| {
        // column |m⟩ ↔ x^p y^q, row |m'⟩ ↔ x^{p'} y^{2j-p'}
        let p = tj - col;
        let q = col;
        let pp = tj - row;
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..=p.min(pp) {
            let l = pp - k;
            if l > q {
                continue;
            }
            sum += a.powu(k as u32)
                * c.powu((p - k) as u32)
                * b.powu(l as u32)
                * dd.powu((q - l) as u32)
                * (binom(p, k) * binom(q, l));
        }
        sum * (fact[pp] * fact[tj - pp] / (fact[p] * fact[q])).sqrt()
    })
}
