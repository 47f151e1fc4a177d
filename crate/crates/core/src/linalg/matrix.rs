use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_DIM: usize = 4;

/// Small dense complex matrix (2x2, 3x3 or 4x4), stored row-major inline.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

fn check_dim(dim: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

impl ComplexMatrix {
    /// Zero matrix. Panics if `dim` is not 2, 3 or 4.
    pub fn zeros(dim: usize) -> Self {
        assert!(
            (2..=MAX_DIM).contains(&dim),
            "unsupported matrix dimension {dim}"
        );
        Self {
            dim,
            data: [Complex64::new(0.0, 0.0); MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        check_dim(diag.len())?;
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m.check_finite()?;
        Ok(m)
    }

    /// Builds a matrix from rows; rejects ragged or non-finite input.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        check_dim(dim)?;
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    row: i,
                    len: row.len(),
                });
            }
            for (j, &z) in row.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m.check_finite()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)]).collect())
            .collect()
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.entries().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = &Complex64> + '_ {
        self.data[..self.dim * self.dim].iter()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut out = *self;
        for z in out.data.iter_mut() {
            *z *= k;
        }
        out
    }

    pub fn scale_complex(&self, k: Complex64) -> Self {
        let mut out = *self;
        for z in out.data.iter_mut() {
            *z *= k;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(0.5)
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i * self.dim + j]
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Self::from_fn(self.dim, |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Self::from_fn(self.dim, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| self[(i, k)] * rhs[(k, j)]).sum())
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        Mul::mul(&self, &rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// The Pauli matrices together with the 2x2 identity, in the standard
/// convention `sigma_y = ((0, -i), (i, 0))`.
#[derive(Debug, Clone, Copy)]
pub struct PauliBasis {
    pub identity2: ComplexMatrix,
    pub sigma: [ComplexMatrix; 3],
}

impl PauliBasis {
    pub fn standard() -> Self {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let m = |a, b, c, d| ComplexMatrix::from_fn(2, |r, s| [[a, b], [c, d]][r][s]);
        Self {
            identity2: ComplexMatrix::identity(2),
            sigma: [m(z, one, one, z), m(z, -i, i, z), m(one, z, z, -one)],
        }
    }

    /// `n . sigma` for a real 3-vector `n`.
    pub fn dot(&self, n: &[f64; 3]) -> ComplexMatrix {
        self.sigma[0].scale(n[0]) + self.sigma[1].scale(n[1]) + self.sigma[2].scale(n[2])
    }
}

/// Which qubit of a two-qubit register to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product of two 2x2 matrices in basis order |00>, |01>, |10>, |11>
/// with the first factor acting on qubit A.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    for m in [a, b] {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: m.dim(),
            });
        }
    }
    Ok(ComplexMatrix::from_fn(4, |r, c| {
        a[(r >> 1, c >> 1)] * b[(r & 1, c & 1)]
    }))
}

fn require_two_qubit(m: &ComplexMatrix) -> Result<()> {
    if m.dim() == 4 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: 4,
            found: m.dim(),
        })
    }
}

/// Reduced operator on `keep` obtained by tracing out the other qubit.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    require_two_qubit(rho)?;
    let idx = |a: usize, b: usize| (a << 1) | b;
    Ok(ComplexMatrix::from_fn(2, |i, j| match keep {
        Subsystem::A => (0..2).map(|k| rho[(idx(i, k), idx(j, k))]).sum(),
        Subsystem::B => (0..2).map(|k| rho[(idx(k, i), idx(k, j))]).sum(),
    }))
}

/// Transpose on qubit B: `<a b| T |a' b'> = <a b'| rho |a' b>`.
pub fn partial_transpose_b(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_two_qubit(rho)?;
    Ok(ComplexMatrix::from_fn(4, |r, c| {
        let (a, b) = (r >> 1, r & 1);
        let (a2, b2) = (c >> 1, c & 1);
        rho[((a << 1) | b2, (a2 << 1) | b)]
    }))
}
