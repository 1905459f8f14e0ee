//! Fibre measure of the τ-polarized Hilbert space and the Peter–Weyl norms
//! `a_ρ(τ₂)`.
//!
//! Two routes compute the norms. The reduced route integrates the character
//! `χ_ρ(e^{2iτ₂u})` against the fibre density, with the group integral
//! already carried out by Weyl orthogonality. The joint route integrates the
//! matrix elements `ρ(x e^{τu})_{ab}` over `K × 𝔨` with the group integral done
//! by Haar quadrature, and is used to cross-check the reduction, its
//! independence of `τ₁` and orthogonality of the basis.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::complexifier::{Complexifier, Tau};
use crate::error::{Error, Result};
use crate::group::{GroupModel, IrrepLabel};
use crate::linalg::CMatrix;
use crate::quadrature::{integrate_log, Domain, QuadratureSpec};

/// `ln` of the fibre density of `dμ_τ` against `dY`:
/// `−κ(Y) + (n/2) ln τ₂ + ln η(τ₂u) + ½ ln det H − (n/2) ln π`.
pub fn ln_measure_density(model: &GroupModel, c: &Complexifier, y: &DVector<f64>, tau2: f64) -> Result<f64> {
    if !(tau2 > 0.0) {
        return Err(Error::NotKahler(tau2));
    }
    let n = model.dim() as f64;
    let u = c.grad_u(y);
    let det = c.hessian(y)?.determinant();
    Ok(-c.kahler_potential(y, tau2) + 0.5 * n * tau2.ln() + model.ln_eta(&(u * tau2)) + 0.5 * det.ln()
        - 0.5 * n * PI.ln())
}

pub fn measure_density(model: &GroupModel, c: &Complexifier, y: &DVector<f64>, tau: Tau) -> Result<f64> {
    Ok(ln_measure_density(model, c, y, tau.tau2)?.exp())
}

/// Norm of the basis sections of one irrep block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate {
    pub a: f64,
    pub ln_a: f64,
    /// Estimated relative error of `a`.
    pub err: f64,
    pub radius: f64,
}

/// `a_ρ(τ₂)` from the reduced fibre integral
/// `a_ρ² = d_ρ^{-2} ∫ χ_ρ(e^{2iτ₂u(Y)}) dμ_τ(Y)`; by definition
/// `a_ρ(0) = d_ρ^{-1/2}`.
pub fn norm_a(
    model: &GroupModel,
    c: &Complexifier,
    rho: &IrrepLabel,
    tau2: f64,
    spec: &QuadratureSpec,
) -> Result<NormEstimate> {
    model.validate_irrep(rho)?;
    if !(tau2 >= 0.0) || !tau2.is_finite() {
        return Err(Error::InvalidConfig(format!("tau2 must be finite and nonnegative, got {tau2}")));
    }
    let d = rho.dim() as f64;
    if tau2 == 0.0 {
        let ln_a = -0.5 * d.ln();
        return Ok(NormEstimate { a: 1.0 / d.sqrt(), ln_a, err: 0.0, radius: 0.0 });
    }
    let n = model.dim();
    let integrand = |point: &[f64]| -> f64 {
        let y = DVector::from_column_slice(point);
        let u = c.grad_u(&y);
        let chi = model.ln_character_imaginary(rho, 2.0 * tau2, &u);
        ln_measure_density(model, c, &y, tau2).map(|ld| chi + ld).unwrap_or(f64::NAN)
    };
    let estimate = if model.is_abelian() {
        integrate_log(spec, Domain::Box(n), integrand)?
    } else {
        // class-function integrand: ∫_{ℝ³} F dY = 4π ∫₀^∞ r² F(r e₃) dr
        integrate_log(spec, Domain::HalfLine, |r: &[f64]| {
            let radial = [0.0, 0.0, r[0]];
            (4.0 * PI).ln() + 2.0 * r[0].ln() + integrand(&radial)
        })?
    };
    let ln_a = 0.5 * (estimate.ln_value - 2.0 * d.ln());
    let err = 0.5 * estimate.rel_err;
    if err > spec.tolerance {
        return Err(Error::QuadratureNotConverged { value: ln_a.exp(), err, tol: spec.tolerance });
    }
    Ok(NormEstimate { a: ln_a.exp(), ln_a, err, radius: estimate.radius })
}

/// `√d_ρ · a_ρ(τ₂)` along a grid of `τ₂`, tending to 1 at the boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryRow {
    pub tau2: f64,
    pub value: f64,
    pub err: f64,
}

pub fn boundary_limit_scan(
    model: &GroupModel,
    c: &Complexifier,
    rho: &IrrepLabel,
    tau2_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<BoundaryRow>> {
    let sqrt_d = (rho.dim() as f64).sqrt();
    tau2_grid
        .iter()
        .map(|&tau2| {
            let e = norm_a(model, c, rho, tau2, spec)?;
            Ok(BoundaryRow { tau2, value: sqrt_d * e.a, err: e.err })
        })
        .collect()
}

/// Node layout for the joint `K × 𝔨` path.
#[derive(Clone, Debug, PartialEq)]
pub struct JointSpec {
    /// Radial (SU(2)) or per-axis (tori) fibre rule.
    pub fiber: QuadratureSpec,
    /// Truncation radius of the fibre; required.
    pub radius: f64,
    /// Gauss–Legendre order in `cos ϑ`; `2·angular` trapezoid points in `φ`.
    pub angular: usize,
    /// Order of the Haar quadrature for the group integral.
    pub haar_order: usize,
}

/// Gram matrix of the basis sections `ρ(x e^{τu})_{ab} β_τ ⊗ √Ω_τ`.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub labels: Vec<(IrrepLabel, usize, usize)>,
    pub matrix: CMatrix,
}

impl GramMatrix {
    /// `Σ_{i≠k} |G_ik| / Σ_i |G_ii|`.
    pub fn off_diagonal_mass(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut off = 0.0;
        let mut diag = 0.0;
        for i in 0..n {
            for k in 0..n {
                if i == k {
                    diag += self.matrix[(i, i)].norm();
                } else {
                    off += self.matrix[(i, k)].norm();
                }
            }
        }
        off / diag
    }

    /// Largest `|G_ik| / sqrt(G_ii G_kk)` over `i ≠ k`.
    pub fn max_normalized_off_diagonal(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for k in 0..n {
                if i != k {
                    let scale = (self.matrix[(i, i)].re * self.matrix[(k, k)].re).sqrt();
                    worst = worst.max(self.matrix[(i, k)].norm() / scale);
                }
            }
        }
        worst
    }

    /// Diagonal entry of `(ρ, a, b)`.
    pub fn diagonal(&self, rho: &IrrepLabel, a: usize, b: usize) -> Option<f64> {
        self.labels
            .iter()
            .position(|(r, i, j)| r == rho && *i == a && *j == b)
            .map(|k| self.matrix[(k, k)].re)
    }
}

fn fiber_nodes(model: &GroupModel, spec: &JointSpec) -> Vec<(DVector<f64>, f64)> {
    let n = model.dim();
    let r = spec.radius;
    if model.is_abelian() {
        let rule = spec.fiber.rule(-r, r, 0);
        let m = rule.len();
        (0..m.pow(n as u32))
            .map(|mut idx| {
                let mut y = DVector::zeros(n);
                let mut w = 1.0;
                for axis in 0..n {
                    let (x, wx) = rule[idx % m];
                    idx /= m;
                    y[axis] = x;
                    w *= wx;
                }
                (y, w)
            })
            .collect()
    } else {
        let radial = spec.fiber.rule(0.0, r, 0);
        let gl = GaussLegendre::new(NonZeroUsize::new(spec.angular.max(1)).expect("order > 0"));
        let nphi = 2 * spec.angular.max(1);
        let mut out = Vec::with_capacity(radial.len() * spec.angular * nphi);
        for &(rr, wr) in &radial {
            for &(ct, wt) in gl.as_node_weight_pairs() {
                let st = (1.0 - ct * ct).max(0.0).sqrt();
                for k in 0..nphi {
                    let phi = 2.0 * PI * k as f64 / nphi as f64;
                    let y = DVector::from_vec(vec![rr * st * phi.cos(), rr * st * phi.sin(), rr * ct]);
                    out.push((y, wr * rr * rr * wt * 2.0 * PI / nphi as f64));
                }
            }
        }
        out
    }
}

/// Gram matrix of all basis sections of `irreps` at `τ`, by quadrature over
/// `K × 𝔨` without the character reduction.
pub fn joint_gram(
    model: &GroupModel,
    c: &Complexifier,
    irreps: &[IrrepLabel],
    tau: Tau,
    spec: &JointSpec,
) -> Result<GramMatrix> {
    if !tau.is_kahler() {
        return Err(Error::NotKahler(tau.tau2));
    }
    for rho in irreps {
        model.validate_irrep(rho)?;
    }
    let mut labels = Vec::new();
    let mut offsets = Vec::new();
    for rho in irreps {
        offsets.push(labels.len());
        for a in 0..rho.dim() {
            for b in 0..rho.dim() {
                labels.push((rho.clone(), a, b));
            }
        }
    }
    let size = labels.len();

    // group factor W[(ρ,a,e),(ρ',c,f)] = ∫ conj(ρ_ae(x)) ρ'_cf(x) dx
    let haar = model.haar_nodes(spec.haar_order);
    let per_node: Vec<CMatrix> = haar
        .par_iter()
        .map(|(x, w)| {
            let mut v = DVector::<Complex64>::zeros(size);
            for (k, (rho, a, e)) in labels.iter().enumerate() {
                v[k] = model.irrep_matrix(rho, x)[(*a, *e)];
            }
            v.map(|z| z.conj()) * v.transpose() * Complex64::new(*w, 0.0)
        })
        .collect();
    let group = tree_sum_matrices(&per_node, size);

    let t = tau.as_complex();
    let nodes = fiber_nodes(model, spec);
    let identity = model.identity();
    let contributions: Vec<CMatrix> = nodes
        .par_iter()
        .map(|(y, w)| -> Result<CMatrix> {
            let density = ln_measure_density(model, c, y, tau.tau2)?.exp() * w;
            let u = c.grad_u(y);
            // block-diagonal Q with Q[(ρ,a,e),(ρ,a,b)] = ρ(e^{τu})_{eb}
            let mut q = CMatrix::zeros(size, size);
            for (rho, &off) in irreps.iter().zip(&offsets) {
                let m = model.irrep_complexified(rho, &identity, t, &u);
                let d = rho.dim();
                for a in 0..d {
                    for e in 0..d {
                        for b in 0..d {
                            q[(off + a * d + e, off + a * d + b)] = m[(e, b)];
                        }
                    }
                }
            }
            Ok((q.adjoint() * &group * &q) * Complex64::new(density, 0.0))
        })
        .collect::<Result<_>>()?;
    Ok(GramMatrix { labels, matrix: tree_sum_matrices(&contributions, size) })
}

fn tree_sum_matrices(items: &[CMatrix], size: usize) -> CMatrix {
    match items.len() {
        0 => CMatrix::zeros(size, size),
        1 => items[0].clone(),
        n => {
            let mid = n / 2;
            tree_sum_matrices(&items[..mid], size) + tree_sum_matrices(&items[mid..], size)
        }
    }
}

/// Joint-route norms of `ρ` at several `τ₁` with `τ₂` fixed.
#[derive(Clone, Debug)]
pub struct Tau1Spread {
    pub values: Vec<(f64, f64)>,
    /// `(max − min) / mean` of the computed `a_ρ`.
    pub spread: f64,
}

pub fn tau1_independence_check(
    model: &GroupModel,
    c: &Complexifier,
    rho: &IrrepLabel,
    tau2: f64,
    tau1s: &[f64],
    spec: &JointSpec,
) -> Result<Tau1Spread> {
    let mut values = Vec::with_capacity(tau1s.len());
    for &t1 in tau1s {
        let g = joint_gram(model, c, std::slice::from_ref(rho), Tau::new(t1, tau2)?, spec)?;
        let d = rho.dim();
        let mean = (0..d * d).map(|k| g.matrix[(k, k)].re).sum::<f64>() / (d * d) as f64;
        values.push((t1, mean.sqrt()));
    }
    let max = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let mean = values.iter().map(|v| v.1).sum::<f64>() / values.len() as f64;
    Ok(Tau1Spread { values, spread: (max - min) / mean })
}

/// Computed norms keyed by irrep and `τ₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormTable {
    model: String,
    fingerprint: String,
    entries: BTreeMap<(IrrepLabel, u64), NormEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEntry {
    pub a: f64,
    pub err: f64,
}

pub const NORM_CSV_HEADER: &str = "model,h_fingerprint,rho,tau2,a,err";
const TAU2_MATCH: f64 = 1e-12;

fn tau2_key(tau2: f64) -> u64 {
    // nonnegative floats order like their bit patterns
    (tau2 + 0.0).to_bits()
}

impl NormTable {
    pub fn new(model: &GroupModel, c: &Complexifier) -> Self {
        NormTable { model: model.name(), fingerprint: c.fingerprint(), entries: BTreeMap::new() }
    }

    pub fn model(&self) -> &str {
        &self.model
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, rho: IrrepLabel, tau2: f64, entry: NormEntry) {
        self.entries.insert((rho, tau2_key(tau2)), entry);
    }

    pub fn get(&self, rho: &IrrepLabel, tau2: f64) -> Option<NormEntry> {
        if let Some(e) = self.entries.get(&(rho.clone(), tau2_key(tau2))) {
            return Some(*e);
        }
        let tol = TAU2_MATCH * tau2.abs().max(1.0);
        let lo = tau2_key((tau2 - tol).max(0.0));
        let hi = tau2_key(tau2 + tol);
        self.entries.range((rho.clone(), lo)..=(rho.clone(), hi)).next().map(|(_, e)| *e)
    }

    pub fn require(&self, rho: &IrrepLabel, tau2: f64) -> Result<NormEntry> {
        self.get(rho, tau2).ok_or_else(|| Error::MissingNorm { rho: rho.to_string(), tau2 })
    }

    /// Returns the stored entry or computes and stores it.
    pub fn ensure(
        &mut self,
        model: &GroupModel,
        c: &Complexifier,
        rho: &IrrepLabel,
        tau2: f64,
        spec: &QuadratureSpec,
    ) -> Result<NormEntry> {
        if model.name() != self.model || c.fingerprint() != self.fingerprint {
            return Err(Error::MalformedTable("table belongs to a different model or complexifier".into()));
        }
        if let Some(e) = self.get(rho, tau2) {
            return Ok(e);
        }
        let est = norm_a(model, c, rho, tau2, spec)?;
        let entry = NormEntry { a: est.a, err: est.err };
        self.insert(rho.clone(), tau2, entry);
        Ok(entry)
    }

    /// Table of `irreps × ({0} ∪ tau2s)`.
    pub fn compute(
        model: &GroupModel,
        c: &Complexifier,
        irreps: &[IrrepLabel],
        tau2s: &[f64],
        spec: &QuadratureSpec,
    ) -> Result<Self> {
        let mut table = Self::new(model, c);
        for rho in irreps {
            table.ensure(model, c, rho, 0.0, spec)?;
            for &t in tau2s {
                table.ensure(model, c, rho, t, spec)?;
            }
        }
        Ok(table)
    }

    /// Rows in label order, then increasing `τ₂`.
    pub fn rows(&self) -> impl Iterator<Item = (&IrrepLabel, f64, NormEntry)> {
        self.entries.iter().map(|((rho, key), e)| (rho, f64::from_bits(*key), *e))
    }

    pub fn csv_row(&self, rho: &IrrepLabel, tau2: f64, e: &NormEntry) -> String {
        format!("{},{},{},{:.16e},{:.16e},{:.16e}", self.model, self.fingerprint, rho, tau2, e.a, e.err)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(NORM_CSV_HEADER);
        out.push('\n');
        for (rho, tau2, e) in self.rows() {
            writeln!(out, "{}", self.csv_row(rho, tau2, &e)).expect("write to string");
        }
        out
    }

    /// Parses rows belonging to this model and complexifier. Rows of other
    /// tables are returned verbatim so a shared cache file can be rewritten
    /// without losing them.
    pub fn from_csv(text: &str, model: &GroupModel, c: &Complexifier) -> Result<(Self, Vec<String>)> {
        let mut table = Self::new(model, c);
        let mut foreign = Vec::new();
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim_end() == NORM_CSV_HEADER => {}
            None => return Ok((table, foreign)),
            Some(h) => return Err(Error::MalformedTable(format!("unexpected header {h:?}"))),
        }
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(Error::MalformedTable(format!("expected 6 fields in {line:?}")));
            }
            if fields[0] != table.model || fields[1] != table.fingerprint {
                foreign.push(line.to_string());
                continue;
            }
            let parse = |s: &str| s.parse::<f64>().map_err(|_| Error::MalformedTable(format!("bad number {s:?}")));
            let rho = model.parse_irrep(fields[2])?;
            let tau2 = parse(fields[3])?;
            let entry = NormEntry { a: parse(fields[4])?, err: parse(fields[5])? };
            if !(entry.a > 0.0) || tau2 < 0.0 {
                return Err(Error::MalformedTable(format!("invalid row {line:?}")));
            }
            table.insert(rho, tau2, entry);
        }
        Ok((table, foreign))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexifier::PhasePoint;
    use crate::quadrature::Scheme;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn density_examples() {
        let s1 = GroupModel::circle();
        let q = Complexifier::quadratic(&s1);
        let (y, t2) = (0.7, 0.8);
        let v = measure_density(&s1, &q, &DVector::from_vec(vec![y]), Tau::imaginary(t2)).unwrap();
        assert!((v - (t2 / PI).sqrt() * (-t2 * y * y).exp()).abs() < 1e-15);

        let su2 = GroupModel::su2();
        let radial = Complexifier::quartic(&su2);
        let v = measure_density(&su2, &radial, &DVector::zeros(3), Tau::new(0.3, 0.5).unwrap()).unwrap();
        assert!((v - (0.5f64 / PI).powf(1.5)).abs() < 1e-15);
        assert!(measure_density(&su2, &radial, &DVector::zeros(3), Tau::zero()).is_err());
    }

    #[test]
    fn density_is_ad_invariant() {
        let su2 = GroupModel::su2();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for c in [Complexifier::quadratic(&su2), Complexifier::quartic(&su2)] {
            for _ in 0..50 {
                let p = PhasePoint::random(&su2, &mut rng, 1.5);
                let moved = su2.adjoint_action(&p.x) * &p.y;
                let a = measure_density(&su2, &c, &p.y, Tau::imaginary(0.7)).unwrap();
                let b = measure_density(&su2, &c, &moved, Tau::imaginary(0.7)).unwrap();
                assert!((a - b).abs() < 1e-12 * a.max(1.0));
            }
        }
    }

    #[test]
    fn circle_quadratic_norms_match_gaussian_integral() {
        let s1 = GroupModel::circle();
        let q = Complexifier::quadratic(&s1);
        for n in [-3i64, 0, 1, 4] {
            for t2 in [0.25, 1.0] {
                let e = norm_a(&s1, &q, &IrrepLabel::circle(n), t2, &spec()).unwrap();
                let exact = t2 * (n * n) as f64 / 2.0;
                assert!((e.ln_a - exact).abs() < 1e-10, "n={n} {e:?}");
                assert!(e.err < 1e-9);
            }
        }
    }

    #[test]
    fn norms_at_real_tau_are_defined() {
        let su2 = GroupModel::su2();
        let c = Complexifier::quartic(&su2);
        let e = norm_a(&su2, &c, &IrrepLabel::Spin { twice_j: 1 }, 0.0, &spec()).unwrap();
        assert_eq!(e.a, 1.0 / 2f64.sqrt());
        assert_eq!(e.err, 0.0);
    }

    #[test]
    fn su2_quadratic_norms_from_radial_quadrature() {
        // a_j² = d^{-1} e^{τ₂(j+1/2)²}, from the Gaussian integral of
        // sinh(2τ₂ m r)-type terms against r² e^{-τ₂ r²} sinh(τ₂ r)/(τ₂ r)
        let su2 = GroupModel::su2();
        let q = Complexifier::quadratic(&su2);
        for tj in 0..4u32 {
            let rho = IrrepLabel::Spin { twice_j: tj };
            let d = rho.dim() as f64;
            for t2 in [0.3, 1.0] {
                let e = norm_a(&su2, &q, &rho, t2, &spec()).unwrap();
                let j = tj as f64 / 2.0;
                let exact = 0.5 * (t2 * (j + 0.5).powi(2) - d.ln());
                assert!((e.ln_a - exact).abs() < 1e-10, "j={j} τ₂={t2}");
            }
        }
    }

    #[test]
    fn schemes_agree() {
        let s1 = GroupModel::circle();
        let c = Complexifier::quartic(&s1);
        let ts = QuadratureSpec { scheme: Scheme::TanhSinh, ..spec() };
        for n in [0i64, 1, 2] {
            let a = norm_a(&s1, &c, &IrrepLabel::circle(n), 0.5, &spec()).unwrap();
            let b = norm_a(&s1, &c, &IrrepLabel::circle(n), 0.5, &ts).unwrap();
            assert!((a.a - b.a).abs() < 1e-10 * a.a);
        }
    }

    #[test]
    fn doubling_nodes_stays_within_reported_error() {
        let su2 = GroupModel::su2();
        let c = Complexifier::quartic(&su2);
        let coarse = QuadratureSpec { nodes: 12, panels: 8, ..spec() };
        let fine = QuadratureSpec { nodes: 24, panels: 8, ..spec() };
        for tj in 0..3 {
            let rho = IrrepLabel::Spin { twice_j: tj };
            let a = norm_a(&su2, &c, &rho, 0.4, &coarse).unwrap();
            let b = norm_a(&su2, &c, &rho, 0.4, &fine).unwrap();
            assert!((a.a - b.a).abs() / b.a <= a.err.max(1e-15) + b.err);
        }
    }

    #[test]
    fn quartic_circle_norms_match_independent_values() {
        // mpmath values of a_n(τ₂) for h = w²/2 + w⁴/4
        let s1 = GroupModel::circle();
        let c = Complexifier::quartic(&s1);
        let cases = [(1i64, 1.0, 2.13884), (1, 0.5, 1.46107), (0, 1.0, 0.9522), (0, 0.1, 0.9061)];
        for (n, t2, expected) in cases {
            let e = norm_a(&s1, &c, &IrrepLabel::circle(n), t2, &spec()).unwrap();
            let digits = if expected > 1.5 { 5e-6 } else { 5e-5 };
            assert!((e.a - expected).abs() < digits * expected.max(1.0), "n={n} τ₂={t2}: {}", e.a);
        }
    }

    #[test]
    fn norms_increase_with_highest_weight() {
        for model in [GroupModel::circle(), GroupModel::su2()] {
            for c in [Complexifier::quadratic(&model), Complexifier::quartic(&model)] {
                let labels: Vec<IrrepLabel> = if model.is_abelian() {
                    (0..4).map(IrrepLabel::circle).collect()
                } else {
                    (0..4).map(|tj| IrrepLabel::Spin { twice_j: tj }).collect()
                };
                let values: Vec<f64> = labels
                    .iter()
                    .map(|r| (r.dim() as f64).sqrt() * norm_a(&model, &c, r, 0.5, &spec()).unwrap().a)
                    .collect();
                assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
            }
        }
    }

    fn joint_spec(model: &GroupModel, radius: f64) -> JointSpec {
        let fiber = if model.is_abelian() {
            QuadratureSpec { nodes: 16, panels: 24, ..spec() }
        } else {
            QuadratureSpec { nodes: 16, panels: 12, ..spec() }
        };
        JointSpec { fiber, radius, angular: 6, haar_order: 4 }
    }

    #[test]
    fn joint_route_agrees_with_reduction() {
        for model in [GroupModel::circle(), GroupModel::torus(2), GroupModel::su2()] {
            for c in [Complexifier::quadratic(&model), Complexifier::quartic(&model)] {
                let irreps = model.catalog(1.0);
                let irreps: Vec<IrrepLabel> = irreps.into_iter().take(3).collect();
                let reduced: Vec<NormEstimate> =
                    irreps.iter().map(|r| norm_a(&model, &c, r, 0.6, &spec()).unwrap()).collect();
                let radius = reduced.iter().map(|e| e.radius).fold(0.0, f64::max);
                let g = joint_gram(&model, &c, &irreps, Tau::new(0.9, 0.6).unwrap(), &joint_spec(&model, radius)).unwrap();
                for (rho, e) in irreps.iter().zip(&reduced) {
                    for a in 0..rho.dim() {
                        for b in 0..rho.dim() {
                            let diag = g.diagonal(rho, a, b).unwrap();
                            assert!((diag - e.a * e.a).abs() < 1e-8 * e.a * e.a, "{} {rho}", model.name());
                        }
                    }
                }
                assert!(g.off_diagonal_mass() < 1e-10, "{}", g.off_diagonal_mass());
            }
        }
    }

    #[test]
    fn joint_route_is_independent_of_tau1() {
        let s1 = GroupModel::circle();
        let q = Complexifier::quadratic(&s1);
        let rho = IrrepLabel::circle(1);
        let radius = norm_a(&s1, &q, &rho, 1.0, &spec()).unwrap().radius;
        let spread = tau1_independence_check(&s1, &q, &rho, 1.0, &[0.0, 0.7, -2.0], &joint_spec(&s1, radius)).unwrap();
        assert!(spread.spread <= 1e-8);
        assert!((spread.values[0].1 - 0.5f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn norm_table_round_trip_and_lookup() {
        let s1 = GroupModel::circle();
        let q = Complexifier::quadratic(&s1);
        let irreps: Vec<IrrepLabel> = (-2..=2).map(IrrepLabel::circle).collect();
        let table = NormTable::compute(&s1, &q, &irreps, &[0.5, 1.0], &spec()).unwrap();
        assert_eq!(table.len(), 15);
        assert_eq!(table.require(&IrrepLabel::circle(1), 0.0).unwrap().a, 1.0);
        assert!(table.get(&IrrepLabel::circle(1), 0.5 + 1e-14).is_some());
        assert!(matches!(table.require(&IrrepLabel::circle(3), 0.5), Err(Error::MissingNorm { .. })));
        let csv = table.to_csv();
        assert!(csv.starts_with(NORM_CSV_HEADER));
        let (back, foreign) = NormTable::from_csv(&csv, &s1, &q).unwrap();
        assert!(foreign.is_empty());
        assert_eq!(back, table);
        assert_eq!(back.to_csv(), csv);

        let other = Complexifier::quartic(&s1);
        let (empty, foreign) = NormTable::from_csv(&csv, &s1, &other).unwrap();
        assert!(empty.is_empty());
        assert_eq!(foreign.len(), 15);
        assert!(NormTable::from_csv("nonsense\n", &s1, &q).is_err());
    }
}
