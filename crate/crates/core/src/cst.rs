//! Peter–Weyl sections and the operators between the vertically polarized
//! and τ-polarized Hilbert spaces.
//!
//! A section is stored as its coefficient matrices `A_ρ` together with the
//! polarization parameter of its basis. At `τ = 0` it is the function
//! `Σ Tr(A_ρ ρ(x))`; for `τ₂ > 0` it is `Σ Tr(A_ρ ρ(x e^{τu})) β_τ(Y)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::complexifier::{Complexifier, PhasePoint, Tau};
use crate::error::{Error, Result};
use crate::group::{GroupModel, IrrepLabel};
use crate::linalg::{CMatrix, I};
use crate::measure::NormTable;

#[derive(Clone, Debug, PartialEq)]
pub struct PeterWeylSection {
    pub entries: BTreeMap<IrrepLabel, CMatrix>,
    pub basis_tau: Tau,
}

impl PeterWeylSection {
    pub fn new(basis_tau: Tau) -> Self {
        PeterWeylSection { entries: BTreeMap::new(), basis_tau }
    }

    /// Section with coefficient blocks checked against `model`.
    pub fn from_entries(model: &GroupModel, entries: BTreeMap<IrrepLabel, CMatrix>, basis_tau: Tau) -> Result<Self> {
        for (rho, a) in &entries {
            model.validate_irrep(rho)?;
            let d = rho.dim();
            if a.nrows() != d || a.ncols() != d {
                return Err(Error::MalformedSection(format!(
                    "block for {rho} is {}x{}, expected {d}x{d}",
                    a.nrows(),
                    a.ncols()
                )));
            }
        }
        Ok(PeterWeylSection { entries, basis_tau })
    }

    /// `√d_ρ ρ_{ab}`, the unit-norm vertical basis vector.
    pub fn basis_vector(rho: &IrrepLabel, a: usize, b: usize) -> Self {
        let d = rho.dim();
        let mut m = CMatrix::zeros(d, d);
        // Tr(A ρ) = Σ A_{ba} ρ_{ab}
        m[(b, a)] = Complex64::new((d as f64).sqrt(), 0.0);
        let mut s = Self::new(Tau::zero());
        s.entries.insert(rho.clone(), m);
        s
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `‖s‖² = Σ_ρ a_ρ(τ₂)² ‖A_ρ‖_F²`.
    pub fn norm(&self, table: &NormTable) -> Result<f64> {
        let mut total = 0.0;
        for (rho, a) in &self.entries {
            let e = table.require(rho, self.basis_tau.tau2)?;
            total += e.a * e.a * a.norm_squared();
        }
        Ok(total.sqrt())
    }

    /// Norm together with its relative error bound from the table.
    pub fn norm_with_error(&self, table: &NormTable) -> Result<(f64, f64)> {
        let mut total = 0.0;
        let mut err = 0.0;
        for (rho, a) in &self.entries {
            let e = table.require(rho, self.basis_tau.tau2)?;
            let term = e.a * e.a * a.norm_squared();
            total += term;
            err += 2.0 * e.err * term;
        }
        if total == 0.0 {
            return Ok((0.0, 0.0));
        }
        Ok((total.sqrt(), 0.5 * err / total))
    }
}

/// `β_τ(Y) = π^{−n/4} e^{iτ(⟨u,Y⟩ − h)}`.
pub fn beta(model: &GroupModel, c: &Complexifier, y: &nalgebra::DVector<f64>, tau: Tau) -> Complex64 {
    let n = model.dim() as f64;
    let phase = c.grad_u(y).dot(y) - c.value(y);
    PI.powf(-n / 4.0) * (I * tau.as_complex() * phase).exp()
}

/// Value of the section at `(x, Y)`, without the half-form factor.
pub fn evaluate_section(model: &GroupModel, c: &Complexifier, s: &PeterWeylSection, p: &PhasePoint) -> Complex64 {
    let tau = s.basis_tau;
    if tau.is_zero() {
        return s.entries.iter().map(|(rho, a)| (a * model.irrep_matrix(rho, &p.x)).trace()).sum();
    }
    let u = c.grad_u(&p.y);
    let t = tau.as_complex();
    let holo: Complex64 =
        s.entries.iter().map(|(rho, a)| (a * model.irrep_complexified(rho, &p.x, t, &u)).trace()).sum();
    holo * beta(model, c, &p.y, tau)
}

/// `e^{−iτĥ}`: the coefficients are kept and the basis moves to `τ`.
pub fn evolve(s: &PeterWeylSection, tau: Tau) -> Result<PeterWeylSection> {
    if !s.basis_tau.is_zero() {
        return Err(Error::BasisMismatch(format!("evolution starts from tau = 0, section is at {}", s.basis_tau)));
    }
    Ok(PeterWeylSection { entries: s.entries.clone(), basis_tau: tau })
}

/// Difference between the truncated exponential series
/// `Σ_{k≤order} τ^k/k! Tr(A ρ(x) dρ(u)^k)` and the closed-form continuation.
pub fn series_continuation_check(
    model: &GroupModel,
    c: &Complexifier,
    s: &PeterWeylSection,
    tau: Tau,
    p: &PhasePoint,
    order: usize,
) -> f64 {
    let u = c.grad_u(&p.y);
    let t = tau.as_complex();
    let mut series = Complex64::new(0.0, 0.0);
    let mut closed = Complex64::new(0.0, 0.0);
    for (rho, a) in &s.entries {
        let base = model.irrep_matrix(rho, &p.x);
        let gen = model.generator_image(rho, &u);
        let d = rho.dim();
        let mut term = CMatrix::identity(d, d);
        let mut sum = CMatrix::identity(d, d);
        for k in 1..=order {
            term = &term * &gen * (t / k as f64);
            sum += &term;
        }
        series += (a * &base * sum).trace();
        closed += (a * model.irrep_complexified(rho, &p.x, t, &u)).trace();
    }
    (series - closed).norm()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Anti-Hermitian generators `dρ(T_j)` of the `K × K` action on block `ρ`.
pub fn k_action_generators(model: &GroupModel, rho: &IrrepLabel) -> Vec<CMatrix> {
    (0..model.dim()).map(|j| model.generator(rho, j)).collect()
}

/// Infinitesimal action of `T_j` on coefficients. Right translation
/// `x ↦ x e^{tT_j}` sends `A_ρ` to `dρ(T_j) A_ρ`, left translation to
/// `A_ρ dρ(T_j)`.
pub fn apply_generator(model: &GroupModel, s: &PeterWeylSection, j: usize, side: Side) -> PeterWeylSection {
    let entries = s
        .entries
        .iter()
        .map(|(rho, a)| {
            let g = model.generator(rho, j);
            let out = match side {
                Side::Right => &g * a,
                Side::Left => a * &g,
            };
            (rho.clone(), out)
        })
        .collect();
    PeterWeylSection { entries, basis_tau: s.basis_tau }
}

/// `E(τ, h)`: the scalars `λ_ρ = a_ρ(0)/a_ρ(τ₂)` acting blockwise, with
/// phases set to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitarizer {
    pub tau2: f64,
    pub lambdas: BTreeMap<IrrepLabel, f64>,
}

pub fn build_unitarizer(table: &NormTable, irreps: &[IrrepLabel], tau2: f64) -> Result<Unitarizer> {
    let mut lambdas = BTreeMap::new();
    for rho in irreps {
        let at_zero = table.require(rho, 0.0)?;
        let at_tau = table.require(rho, tau2)?;
        lambdas.insert(rho.clone(), at_zero.a / at_tau.a);
    }
    Ok(Unitarizer { tau2, lambdas })
}

impl Unitarizer {
    pub fn lambda(&self, rho: &IrrepLabel) -> Result<f64> {
        self.lambdas.get(rho).copied().ok_or_else(|| Error::MissingNorm { rho: rho.to_string(), tau2: self.tau2 })
    }

    pub fn apply(&self, s: &PeterWeylSection) -> Result<PeterWeylSection> {
        let mut entries = BTreeMap::new();
        for (rho, a) in &s.entries {
            let l = self.lambda(rho)?;
            entries.insert(rho.clone(), a.map(|z| z * l));
        }
        Ok(PeterWeylSection { entries, basis_tau: s.basis_tau })
    }
}

/// `U_τ = e^{−iτĥ} ∘ E(τ, h)`.
pub fn cst(s: &PeterWeylSection, tau: Tau, e: &Unitarizer) -> Result<PeterWeylSection> {
    if !s.basis_tau.is_zero() {
        return Err(Error::BasisMismatch(format!("transform starts from tau = 0, section is at {}", s.basis_tau)));
    }
    if (e.tau2 - tau.tau2).abs() > 1e-12 * tau.tau2.max(1.0) {
        return Err(Error::BasisMismatch(format!("unitarizer is for tau2 = {}, transform at {}", e.tau2, tau.tau2)));
    }
    evolve(&e.apply(s)?, tau)
}

/// Deviation from additivity of `ln λ_ρ` in `τ₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemigroupDefect {
    pub defect: f64,
    /// Sum of the relative norm errors of the three entries.
    pub err_bound: f64,
}

pub fn semigroup_defect(table: &NormTable, rho: &IrrepLabel, tau2: f64, tau2p: f64) -> Result<SemigroupDefect> {
    let zero = table.require(rho, 0.0)?;
    let a = table.require(rho, tau2)?;
    let b = table.require(rho, tau2p)?;
    let ab = table.require(rho, tau2 + tau2p)?;
    let ln_lambda = |e: crate::measure::NormEntry| zero.a.ln() - e.a.ln();
    let defect = (ln_lambda(ab) - ln_lambda(a) - ln_lambda(b)).abs();
    Ok(SemigroupDefect { defect, err_bound: a.err + b.err + ab.err })
}
