//! Cyclic Jacobi eigensolver for small Hermitian matrices, and the derived
//! real-symmetric and singular-value routines.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use super::real::{frobenius_sq, mat_mul, transpose, Mat3, Vec3, ZERO33};
use crate::error::{Error, Result};

/// Maximum entrywise asymmetry accepted by [`hermitian_eigen`], relative to
/// `max(1, max |h_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;
const JACOBI_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `V diag(values) V^dagger`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.vectors;
        let n = v.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * self.values[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// the classical real Jacobi rotation, so the combined unitary on `(p, q)` is
/// `[[c, s], [-s e^{-i phi}, c e^{-i phi}]]`. Sweeps stop once the off-diagonal
/// Frobenius norm falls to `1e-13`, or to round-off level
/// `eps * ||H||_F` for large inputs, or after 100 sweeps.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    h.check_finite()?;
    let asym = h.hermiticity_defect();
    if asym > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(asym));
    }
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let floor = JACOBI_TOL.max(f64::EPSILON * a.frobenius_norm());

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= floor {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = (apq / r).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = phase * -s;
    let u_qq = phase * c;

    let n = a.dim();
    // A <- A U, V <- V U
    for k in 0..n {
        let (x, y) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = x * u_pp + y * u_qp;
        a[(k, q)] = x * u_pq + y * u_qq;
        let (x, y) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = x * u_pp + y * u_qp;
        v[(k, q)] = x * u_pq + y * u_qq;
    }
    // A <- U^dagger A
    for k in 0..n {
        let (x, y) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = u_pp.conj() * x + u_qp.conj() * y;
        a[(q, k)] = u_pq.conj() * x + u_qq.conj() * y;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}

/// Eigen-decomposition of a real symmetric 3x3 matrix: ascending eigenvalues
/// and eigenvectors as columns (`vectors[i][k]` is component `i` of vector `k`).
pub fn symmetric_eigen3(m: &Mat3) -> Result<(Vec3, Mat3)> {
    let lifted = ComplexMatrix::from_fn(3, |i, j| Complex64::new(m[i][j], 0.0));
    let eig = hermitian_eigen(&lifted)?;
    // Real pivots only ever produce phases of +-1, so the vectors stay real.
    let mut vectors = ZERO33;
    for (i, row) in vectors.iter_mut().enumerate() {
        for (k, x) in row.iter_mut().enumerate() {
            *x = eig.vectors[(i, k)].re;
        }
    }
    Ok(([eig.values[0], eig.values[1], eig.values[2]], vectors))
}

/// Three nonnegative reals in decreasing order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectrumTriple {
    pub values: [f64; 3],
}

impl SpectrumTriple {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum()
    }

    pub fn largest(&self) -> f64 {
        self.values[0]
    }
}

/// Singular values of a real 3x3 matrix, computed as square roots of the
/// eigenvalues of `E^T E` (tiny negative rounding is clamped to zero).
pub fn singular_values_3x3(e: &Mat3) -> Result<SpectrumTriple> {
    if e.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if frobenius_sq(e) == 0.0 {
        return Ok(SpectrumTriple { values: [0.0; 3] });
    }
    let ete = mat_mul(&transpose(e), e);
    let (vals, _) = symmetric_eigen3(&ete)?;
    let sv = |x: f64| x.max(0.0).sqrt();
    Ok(SpectrumTriple {
        values: [sv(vals[2]), sv(vals[1]), sv(vals[0])],
    })
}
