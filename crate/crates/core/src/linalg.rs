//! Thin helpers over `faer` dense complex matrices.

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense complex matrix used for operators and superoperators.
pub type CMat = Mat<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn identity(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

pub fn zeros(n: usize, m: usize) -> CMat {
    CMat::from_fn(n, m, |_, _| ZERO)
}

pub fn adjoint(m: &CMat) -> CMat {
    CMat::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

pub fn conj(m: &CMat) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].conj())
}

pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    a * b
}

pub fn scale(m: &CMat, s: C64) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s)
}

/// `a ⊗ b` with the row index `i_a * rows(b) + i_b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = (a.nrows(), a.ncols());
    let (rb, cb) = (b.nrows(), b.ncols());
    CMat::from_fn(ra * rb, ca * cb, |i, j| {
        a[(i / rb, j / cb)] * b[(i % rb, j % cb)]
    })
}

pub fn trace(m: &CMat) -> C64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

pub fn frobenius_norm(m: &CMat) -> f64 {
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            acc += m[(i, j)].norm_sqr();
        }
    }
    acc.sqrt()
}

/// Largest entrywise modulus of `a - b`. Shapes must agree.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut worst = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

/// Max entrywise deviation of `m` from its conjugate transpose.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Max entrywise deviation of `u† u` from the identity.
pub fn unitarity_defect(u: &CMat) -> f64 {
    let prod = adjoint(u) * u;
    max_abs_diff(&prod, &identity(u.ncols()))
}

/// `(m + m†) / 2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

/// Eigenvalues of a Hermitian matrix in ascending order. Only the lower
/// triangle is read.
pub fn hermitian_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::EigenSolver)
}

/// Eigenvalues of a general square complex matrix, unordered.
pub fn eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    m.eigenvalues().map_err(|_| Error::EigenSolver)
}

/// Row-major vectorization: `v[i * n + j] = m[(i, j)]`.
pub fn vec_row_major(m: &CMat) -> Vec<C64> {
    let (r, c) = (m.nrows(), m.ncols());
    let mut v = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            v.push(m[(i, j)]);
        }
    }
    v
}

pub fn unvec_row_major(v: &[C64], n: usize) -> CMat {
    assert_eq!(v.len(), n * n);
    CMat::from_fn(n, n, |i, j| v[i * n + j])
}

/// Dense matrix-vector product.
pub fn matvec(m: &CMat, v: &[C64]) -> Vec<C64> {
    assert_eq!(m.ncols(), v.len());
    let mut out = vec![ZERO; m.nrows()];
    for (j, &x) in v.iter().enumerate() {
        if x == ZERO {
            continue;
        }
        let col = m.col_as_slice(j);
        for (o, &a) in out.iter_mut().zip(col) {
            *o += a * x;
        }
    }
    out
}

/// `exp(i * 2π * k / m)` with the integer numerator reduced first, so
/// roots of unity are exact to rounding.
pub fn root_of_unity(k: i64, m: i64) -> C64 {
    let r = k.rem_euclid(m);
    let angle = 2.0 * std::f64::consts::PI * r as f64 / m as f64;
    C64::from_polar(1.0, angle)
}
