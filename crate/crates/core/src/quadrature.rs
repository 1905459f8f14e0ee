//! Deterministic fibre quadrature for positive integrands given by their
//! logarithm.
//!
//! Integrands are summed as `e^{m} Σ w_i e^{l_i − m}` with `m` the largest log
//! term, and every sum is taken in a fixed pairwise order so results do not
//! depend on the number of worker threads.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::tree_sum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Composite Gauss–Legendre on the truncated domain.
    GaussLegendre,
    /// Double-exponential rule on the truncated domain.
    TanhSinh,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    /// Nodes per panel (Gauss–Legendre) or per unit of the half-range
    /// (tanh-sinh).
    pub nodes: usize,
    pub panels: usize,
    /// Fixed truncation radius; chosen adaptively when absent.
    pub radius: Option<f64>,
    /// Target relative error.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { scheme: Scheme::GaussLegendre, nodes: 16, panels: 24, radius: None, tolerance: 1e-9 }
    }
}

/// Log-integrand gap between the interior maximum and the truncation
/// boundary, `e^{-40} < 1e-17`.
pub const TAIL_LOG_GAP: f64 = 40.0;
const INITIAL_RADIUS: f64 = 4.0;
const RADIUS_GROWTH: f64 = 1.5;
const MAX_RADIUS_STEPS: usize = 40;
const TANH_SINH_RANGE: f64 = 3.2;
/// Refinement stops at this level or when the next level would exceed
/// the evaluation budget.
const MAX_LEVEL: u32 = 8;
const EVALUATION_BUDGET: usize = 1 << 24;

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 8 {
            return Err(Error::InvalidConfig(format!("quadrature needs at least 8 nodes, got {}", self.nodes)));
        }
        if self.panels == 0 {
            return Err(Error::InvalidConfig("quadrature needs at least one panel".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig("quadrature tolerance must be positive".into()));
        }
        if let Some(r) = self.radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidConfig(format!("truncation radius must be positive, got {r}")));
            }
        }
        Ok(())
    }

    /// One-dimensional rule on `[a, b]`; each level doubles the node count.
    pub fn rule(&self, a: f64, b: f64, level: u32) -> Vec<(f64, f64)> {
        match self.scheme {
            Scheme::GaussLegendre => composite_gauss_legendre(self.nodes, self.panels << level, a, b),
            Scheme::TanhSinh => tanh_sinh((self.nodes * self.panels / 2) << level, a, b),
        }
    }
}

fn composite_gauss_legendre(nodes: usize, panels: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::new(NonZeroUsize::new(nodes).expect("nodes > 0"));
    let width = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(nodes * panels);
    for p in 0..panels {
        let lo = a + width * p as f64;
        for &(t, w) in gl.as_node_weight_pairs() {
            out.push((lo + 0.5 * width * (t + 1.0), 0.5 * width * w));
        }
    }
    out
}

fn tanh_sinh(half: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let h = TANH_SINH_RANGE / half as f64;
    let mid = 0.5 * (a + b);
    let scale = 0.5 * (b - a);
    let half_pi = std::f64::consts::FRAC_PI_2;
    (0..=2 * half)
        .map(|k| {
            let t = h * (k as f64 - half as f64);
            let s = half_pi * t.sinh();
            let c = s.cosh();
            (mid + scale * s.tanh(), scale * h * half_pi * t.cosh() / (c * c))
        })
        .filter(|&(_, w)| w > 0.0)
        .collect()
}

/// Integration domain, truncated at the current radius `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `[-R, R]^dim`.
    Box(usize),
    /// `[0, R]`.
    HalfLine,
}

impl Domain {
    fn dim(&self) -> usize {
        match self {
            Domain::Box(d) => *d,
            Domain::HalfLine => 1,
        }
    }

    fn lower(&self, r: f64) -> f64 {
        match self {
            Domain::Box(_) => -r,
            Domain::HalfLine => 0.0,
        }
    }
}

/// `ln ∫ e^{f}` with a relative error estimate from two nested levels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub ln_value: f64,
    pub rel_err: f64,
    pub radius: f64,
    pub evaluations: usize,
}

struct LevelSum {
    ln_value: f64,
    max_log: f64,
    evaluations: usize,
}

fn log_sum_level<F>(ln_f: &F, domain: Domain, rule: &[(f64, f64)]) -> Result<LevelSum>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = domain.dim();
    let m = rule.len();
    let total = m.pow(dim as u32);
    let logs: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut point = [0.0f64; 8];
            let mut ln_w = 0.0;
            let mut rest = idx;
            for slot in point.iter_mut().take(dim) {
                let (x, w) = rule[rest % m];
                rest /= m;
                *slot = x;
                ln_w += w.ln();
            }
            ln_f(&point[..dim]) + ln_w
        })
        .collect();
    if logs.iter().any(|l| l.is_nan() || *l == f64::INFINITY) {
        return Err(Error::PropertyViolation("integrand is not finite on the quadrature grid".into()));
    }
    let max_log = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max_log == f64::NEG_INFINITY {
        return Ok(LevelSum { ln_value: f64::NEG_INFINITY, max_log, evaluations: total });
    }
    let terms: Vec<f64> = logs.iter().map(|l| (l - max_log).exp()).collect();
    Ok(LevelSum { ln_value: max_log + tree_sum(&terms).ln(), max_log, evaluations: total })
}

/// Largest log-integrand on the outer boundary of the truncated domain,
/// sampled on the rule's nodes along the other axes.
fn boundary_max<F>(ln_f: &F, domain: Domain, rule: &[(f64, f64)], r: f64) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = domain.dim();
    let faces: Vec<f64> = match domain {
        Domain::HalfLine => vec![r],
        Domain::Box(_) => vec![-r, r],
    };
    let m = rule.len();
    let per_face = m.pow(dim as u32 - 1);
    let mut jobs = Vec::with_capacity(dim * faces.len() * per_face);
    for axis in 0..dim {
        for &face in &faces {
            for idx in 0..per_face {
                jobs.push((axis, face, idx));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(axis, face, idx)| {
            let mut point = [0.0f64; 8];
            let mut rest = idx;
            for (k, slot) in point.iter_mut().enumerate().take(dim) {
                if k == axis {
                    *slot = face;
                } else {
                    *slot = rule[rest % m].0;
                    rest /= m;
                }
            }
            ln_f(&point[..dim])
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

/// Integrates `e^{ln_f}` over the truncated domain. The radius grows until
/// the boundary log-integrand sits [`TAIL_LOG_GAP`] below the interior
/// maximum. The rule is then refined until two successive levels agree to
/// the spec's tolerance; the error compares the last two levels and is
/// floored at the accumulated rounding level.
pub fn integrate_log<F>(spec: &QuadratureSpec, domain: Domain, ln_f: F) -> Result<Estimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    spec.validate()?;
    assert!(domain.dim() <= 8, "at most 8 fibre dimensions are supported");
    let mut r = spec.radius.unwrap_or(INITIAL_RADIUS);
    let mut steps = 0;
    let coarse = loop {
        let rule0 = spec.rule(domain.lower(r), r, 0);
        let coarse = log_sum_level(&ln_f, domain, &rule0)?;
        if spec.radius.is_some() || coarse.max_log == f64::NEG_INFINITY {
            break coarse;
        }
        let interior = coarse_interior_max(&ln_f, domain, &rule0);
        if boundary_max(&ln_f, domain, &rule0, r) < interior - TAIL_LOG_GAP {
            break coarse;
        }
        steps += 1;
        if steps > MAX_RADIUS_STEPS {
            return Err(Error::PropertyViolation(format!("integrand tail does not decay up to radius {r}")));
        }
        r *= RADIUS_GROWTH;
    };
    let mut coarse = coarse;
    let mut evaluations = coarse.evaluations;
    let mut level = 1;
    loop {
        let fine = log_sum_level(&ln_f, domain, &spec.rule(domain.lower(r), r, level))?;
        evaluations += fine.evaluations;
        let floor = fine.evaluations as f64 * f64::EPSILON;
        let rel_err = if fine.ln_value == f64::NEG_INFINITY {
            floor
        } else {
            ((coarse.ln_value - fine.ln_value).exp() - 1.0).abs() + floor
        };
        let next = fine.evaluations.saturating_mul(1 << domain.dim());
        if rel_err <= spec.tolerance || level >= MAX_LEVEL || next > EVALUATION_BUDGET {
            return Ok(Estimate { ln_value: fine.ln_value, rel_err, radius: r, evaluations });
        }
        coarse = fine;
        level += 1;
    }
}

/// Largest raw log-integrand over the grid nodes.
fn coarse_interior_max<F>(ln_f: &F, domain: Domain, rule: &[(f64, f64)]) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = domain.dim();
    let m = rule.len();
    (0..m.pow(dim as u32))
        .into_par_iter()
        .map(|idx| {
            let mut point = [0.0f64; 8];
            let mut rest = idx;
            for slot in point.iter_mut().take(dim) {
                *slot = rule[rest % m].0;
                rest /= m;
            }
            ln_f(&point[..dim])
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}
