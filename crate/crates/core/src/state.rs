//! Density matrices, the Pauli (Bloch / correlation-matrix) decomposition of
//! two-qubit states, and the state factories.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::real::{self, Mat3, Vec3, ZERO3, ZERO33};
use crate::linalg::{
    hermitian_eigen, partial_trace, tensor_product, ComplexMatrix, PauliBasis, Subsystem,
};

/// Entrywise Hermiticity tolerance for a density matrix.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Tolerance on `|tr rho - 1|`.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-9;
/// Largest imaginary residue tolerated in a Pauli expectation value.
pub const PAULI_RESIDUE_TOL: f64 = 1e-10;

/// Diagnostics for a candidate density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub valid: bool,
}

impl ValidityReport {
    /// The first violated invariant, if any.
    pub fn violation(&self) -> Option<Error> {
        if !self.hermiticity_defect.is_finite() || !self.min_eigenvalue.is_finite() {
            Some(Error::NonFinite)
        } else if self.hermiticity_defect > HERMITICITY_TOL {
            Some(Error::NotHermitian(self.hermiticity_defect))
        } else if self.trace_defect > TRACE_TOL {
            Some(Error::InvalidTrace(1.0 + self.trace_defect))
        } else if self.min_eigenvalue < PSD_TOL {
            Some(Error::NotPositive(self.min_eigenvalue))
        } else {
            None
        }
    }
}

/// Checks Hermiticity, unit trace and positivity of an arbitrary square matrix.
/// The spectrum is taken from the Hermitian part.
pub fn validate(m: &ComplexMatrix) -> ValidityReport {
    if m.check_finite().is_err() {
        return ValidityReport {
            hermiticity_defect: f64::NAN,
            trace_defect: f64::NAN,
            min_eigenvalue: f64::NAN,
            valid: false,
        };
    }
    let hermiticity_defect = m.hermiticity_defect();
    let trace_defect = (m.trace() - Complex64::new(1.0, 0.0)).norm();
    let min_eigenvalue = hermitian_eigen(&m.hermitian_part())
        .map(|e| e.values[0])
        .unwrap_or(f64::NAN);
    let mut report = ValidityReport {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        valid: false,
    };
    report.valid = report.violation().is_none();
    report
}

/// A validated density matrix of one qubit (2x2) or two qubits (4x4).
///
/// Construction symmetrizes the input to `(M + M^dagger)/2`; the spectrum is
/// never altered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matches!(matrix.dim(), 2 | 4) {
            return Err(Error::UnsupportedDimension(matrix.dim()));
        }
        if let Some(err) = validate(&matrix).violation() {
            return Err(err);
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if !matches!(dim, 2 | 4) {
            return Err(Error::UnsupportedDimension(dim));
        }
        Self::new(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let dim = amplitudes.len();
        if !matches!(dim, 2 | 4) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() {
            return Err(Error::NonFinite);
        }
        if norm_sq == 0.0 {
            return Err(Error::ZeroVector);
        }
        Self::new(ComplexMatrix::from_fn(dim, |i, j| {
            amplitudes[i] * amplitudes[j].conj() / norm_sq
        }))
    }

    /// Single-qubit state `(I + r . sigma)/2`.
    pub fn qubit(bloch: Vec3) -> Result<Self> {
        let p = PauliBasis::standard();
        let m = (p.identity2 + p.dot(&bloch)).scale(0.5);
        m.check_finite()?;
        Self::new(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix)
            .expect("density matrices are Hermitian by construction")
            .values
    }

    pub fn require_two_qubit(&self) -> Result<()> {
        if self.dim() == 4 {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: 4,
                found: self.dim(),
            })
        }
    }

    /// Reduced state of one qubit of a two-qubit state.
    pub fn reduced(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let m = partial_trace(&self.matrix, keep)?;
        Ok(Self {
            matrix: m.hermitian_part(),
        })
    }

    /// Pauli decomposition of a two-qubit state.
    pub fn bloch(&self) -> Result<BlochDecomposition> {
        pauli_decompose(&self.matrix)
    }

    /// Bloch vector `tr(rho sigma_i)` of a single-qubit state.
    pub fn qubit_bloch_vector(&self) -> Result<Vec3> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        let p = PauliBasis::standard();
        Ok([0, 1, 2].map(|i| self.matrix.trace_product(&p.sigma[i]).re))
    }

    /// `U rho U^dagger`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        Self::new(*u * self.matrix * u.adjoint())
    }
}

/// Local Bloch vectors `a`, `b` and correlation matrix `E` of a two-qubit
/// state `rho = (I + a.sigma x I + I x b.sigma + sum E_ij sigma_i x sigma_j)/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochDecomposition {
    pub a: Vec3,
    pub b: Vec3,
    pub e: Mat3,
}

impl BlochDecomposition {
    pub fn new(a: Vec3, b: Vec3, e: Mat3) -> Self {
        Self { a, b, e }
    }

    /// `sum_ij E_ij^2`
    pub fn correlation_norm_sq(&self) -> f64 {
        real::frobenius_sq(&self.e)
    }

    /// `E^T E`
    pub fn ete(&self) -> Mat3 {
        real::mat_mul(&real::transpose(&self.e), &self.e)
    }

    /// The operator sum evaluated literally; Hermitian with unit trace but not
    /// necessarily positive.
    pub fn reconstruct_matrix(&self) -> ComplexMatrix {
        let p = PauliBasis::standard();
        let id = p.identity2;
        let kron = |x: &ComplexMatrix, y: &ComplexMatrix| {
            tensor_product(x, y).expect("Pauli operators are 2x2")
        };
        let mut m = ComplexMatrix::identity(4);
        for i in 0..3 {
            m = m + kron(&p.sigma[i], &id).scale(self.a[i]);
            m = m + kron(&id, &p.sigma[i]).scale(self.b[i]);
            for j in 0..3 {
                m = m + kron(&p.sigma[i], &p.sigma[j]).scale(self.e[i][j]);
            }
        }
        m.scale(0.25)
    }

    /// Density matrix with these Bloch parameters, or an error when they lie
    /// outside the physical set.
    pub fn reconstruct(&self) -> Result<DensityMatrix> {
        let finite = self
            .a
            .iter()
            .chain(self.b.iter())
            .chain(self.e.iter().flatten())
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::NonFinite);
        }
        let m = self.reconstruct_matrix();
        let report = validate(&m);
        if report.min_eigenvalue < PSD_TOL {
            return Err(Error::UnphysicalDecomposition(report.min_eigenvalue));
        }
        DensityMatrix::new(m)
    }

    /// Drops `E` and shrinks `a`, `b` by a common factor until
    /// `|a| + |b| <= 1`, which keeps the uncorrelated state positive
    /// (its eigenvalues are `(1 +- |a| +- |b|)/4`).
    pub fn without_correlations(&self) -> Self {
        let total = real::norm(&self.a) + real::norm(&self.b);
        let k = if total > 1.0 { 1.0 / total } else { 1.0 };
        Self::new(real::scale(&self.a, k), real::scale(&self.b, k), real::ZERO33)
    }
}

/// `a_i = tr[rho (sigma_i x I)]`, `b_j = tr[rho (I x sigma_j)]`,
/// `E_ij = tr[rho (sigma_i x sigma_j)]`.
///
/// Rejects input whose expectation values carry an imaginary residue above
/// [`PAULI_RESIDUE_TOL`].
pub fn pauli_decompose(rho: &ComplexMatrix) -> Result<BlochDecomposition> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    rho.check_finite()?;
    let p = PauliBasis::standard();
    let expect = |x: &ComplexMatrix, y: &ComplexMatrix| -> Result<f64> {
        let op = tensor_product(x, y)?;
        let z = rho.trace_product(&op);
        if z.im.abs() > PAULI_RESIDUE_TOL {
            return Err(Error::NotHermitian(z.im.abs()));
        }
        Ok(z.re)
    };
    let mut a = ZERO3;
    let mut b = ZERO3;
    let mut e = ZERO33;
    for i in 0..3 {
        a[i] = expect(&p.sigma[i], &p.identity2)?;
        b[i] = expect(&p.identity2, &p.sigma[i])?;
        for (j, sj) in p.sigma.iter().enumerate() {
            e[i][j] = expect(&p.sigma[i], sj)?;
        }
    }
    Ok(BlochDecomposition { a, b, e })
}

/// The four maximally entangled Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

pub fn make_bell(which: BellState) -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| Complex64::new(x, 0.0);
    let amps = match which {
        BellState::PhiPlus => [c(h), c(0.0), c(0.0), c(h)],
        BellState::PhiMinus => [c(h), c(0.0), c(0.0), c(-h)],
        BellState::PsiPlus => [c(0.0), c(h), c(h), c(0.0)],
        BellState::PsiMinus => [c(0.0), c(h), c(-h), c(0.0)],
    };
    DensityMatrix::pure(&amps).expect("Bell amplitudes are normalized")
}

/// `p |Phi+><Phi+| + (1 - p) I/4`.
pub fn make_werner(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            range: "[0, 1]",
        });
    }
    let bell = *make_bell(BellState::PhiPlus).matrix();
    let mixed = ComplexMatrix::identity(4).scale(0.25);
    DensityMatrix::new(bell.scale(p) + mixed.scale(1.0 - p))
}

/// State with `a = b = 0` and `E = diag(c1, c2, c3)`.
pub fn make_bell_diagonal(c1: f64, c2: f64, c3: f64) -> Result<DensityMatrix> {
    BlochDecomposition::new(ZERO3, ZERO3, real::diag3(&[c1, c2, c3])).reconstruct()
}

/// `rho_A x rho_B`.
pub fn make_product(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(tensor_product(rho_a.matrix(), rho_b.matrix())?)
}

/// Deterministic generator used by every seeded sampler in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Ginibre-ensemble density matrix `G G^dagger / tr(G G^dagger)` with `G` of
/// shape `dim x rank` and i.i.d. standard complex normal entries. Full rank
/// induces the Hilbert-Schmidt measure.
pub fn sample_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    if !matches!(dim, 2 | 4) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if rank == 0 || rank > dim {
        return Err(Error::InvalidRank { rank, dim });
    }
    let g: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..rank).map(|_| complex_normal(rng)).collect())
        .collect();
    let ggh = ComplexMatrix::from_fn(dim, |i, j| {
        (0..rank).map(|k| g[i][k] * g[j][k].conj()).sum()
    });
    let tr = ggh.trace().re;
    DensityMatrix::new(ggh.scale(1.0 / tr))
}

/// Seeded [`sample_density`]; identical seeds give identical matrices.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    sample_density(dim, rank, &mut seeded_rng(seed))
}

/// Haar-random unitary via Gram-Schmidt on a complex Gaussian matrix.
pub fn sample_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    sample_unitary(dim, &mut seeded_rng(seed))
}

/// `diag(0.9, 0.1) x diag(0.8, 0.2)`: uncorrelated in every entropic sense,
/// yet with a nonzero correlation matrix.
pub fn paper_product_state() -> DensityMatrix {
    let a = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.9, 0.1]).unwrap()).unwrap();
    let b = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.8, 0.2]).unwrap()).unwrap();
    make_product(&a, &b).expect("valid qubit factors")
}

/// Reference teleportation channel: diagonal `1/4`, off-diagonal magnitude
/// `1/16`. The upper triangle is taken verbatim and the lower triangle is its
/// conjugate.
pub fn paper_channel_state() -> DensityMatrix {
    let q = 1.0 / 16.0;
    let one = Complex64::new(q, 0.0);
    let mi = Complex64::new(0.0, -q);
    let upper = [[None, Some(mi), Some(one), Some(mi)],
        [None, None, Some(mi), Some(one)],
        [None, None, None, Some(mi)],
        [None, None, None, None]];
    let m = ComplexMatrix::from_fn(4, |i, j| {
        if i == j {
            Complex64::new(0.25, 0.0)
        } else if i < j {
            upper[i][j].unwrap()
        } else {
            upper[j][i].unwrap().conj()
        }
    });
    DensityMatrix::new(m).expect("channel fixture is a valid state")
}
