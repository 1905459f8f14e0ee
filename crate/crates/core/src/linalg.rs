//! Small dense linear-algebra helpers shared by the geometry and group code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_real(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues ascending, columns of
/// the returned matrix are the matching orthonormal eigenvectors.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    // symmetrize against round-off before handing to the solver
    let herm = (m + m.adjoint()).map(|z| z * 0.5);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Applies a scalar function to a real antisymmetric matrix `a`.
///
/// `i·a` is Hermitian, so `a = V diag(-iμ) V†` with real `μ`; the result is
/// `V diag(f(-iμ)) V†`.
pub fn antisymmetric_function<F>(a: &DMatrix<f64>, f: F) -> CMatrix
where
    F: Fn(Complex64) -> Complex64,
{
    let n = a.nrows();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let ia = to_complex(a).map(|z| z * I);
    let (mu, v) = hermitian_eigen(&ia);
    let diag = CMatrix::from_diagonal(&DVector::from_iterator(
        n,
        mu.iter().map(|&m| f(Complex64::new(0.0, -m))),
    ));
    &v * diag * v.adjoint()
}

/// `sinh(x)/x` with the removable singularity filled in.
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    }
}

/// `ln(sinh(x)/x)` for `x >= 0`, stable for large arguments.
pub fn ln_sinhc(x: f64) -> f64 {
    let x = x.abs();
    if x < 1e-4 {
        sinhc(x).ln()
    } else if x < 20.0 {
        (x.sinh() / x).ln()
    } else {
        // sinh x = e^x (1 - e^{-2x}) / 2
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p() - x.ln()
    }
}

/// Numerically stable `ln Σ exp(v_i)`.
pub fn log_sum_exp(values: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.into_iter().collect();
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Sums in a fixed pairwise tree order, independent of how the inputs were
/// produced.
pub fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            tree_sum(&values[..mid]) + tree_sum(&values[mid..])
        }
    }
}

pub fn tree_sum_complex(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        n => {
            let mid = n / 2;
            tree_sum_complex(&values[..mid]) + tree_sum_complex(&values[mid..])
        }
    }
}

/// Matrix exponential by truncated Taylor series with scaling and squaring.
/// Only used as an independent oracle in tests and consistency checks.
pub fn expm_taylor(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let norm = m.iter().map(|z| z.norm()).sum::<f64>();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = m.map(|z| z * scale);
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..30 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
