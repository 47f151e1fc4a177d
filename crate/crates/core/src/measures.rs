//! Scalar coherence, discord and entanglement measures.
//!
//! Entropies are in bits. Discord measures always measure qubit A.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::real::{self, Vec3};
use crate::linalg::{
    partial_transpose_b, symmetric_eigen3, tensor_product, ComplexMatrix, PauliBasis, Subsystem,
    UnitVector,
};
use crate::state::{BlochDecomposition, DensityMatrix};

/// Eigenvalues below this are exact zeros inside entropies.
pub const ENTROPY_ZERO_TOL: f64 = 1e-12;
/// Geometric discord values in `[-GEOMETRIC_CLAMP_TOL, 0)` are reported as 0.
pub const GEOMETRIC_CLAMP_TOL: f64 = 1e-9;
/// Entropic discord values in `[-ENTROPIC_CLAMP_TOL, 0)` are reported as 0.
pub const ENTROPIC_CLAMP_TOL: f64 = 1e-7;
/// Measurement outcomes less likely than this carry no conditional entropy.
pub const OUTCOME_PROB_TOL: f64 = 1e-12;

const GRID_THETA: usize = 64;
const GRID_PHI: usize = 128;
const REFINE_MIN_STEP: f64 = 1e-10;
const REFINE_MAX_ITERS: usize = 100_000;

/// All scalar measures of one two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureReport {
    pub purity: f64,
    pub c2: f64,
    pub c_l2: f64,
    pub correlated_coherence: f64,
    pub l1_coherence: f64,
    pub rel_entropy_coherence: f64,
    pub geometric_discord_normalized: f64,
    pub geometric_discord_renormalized: f64,
    pub entropic_discord: f64,
    pub negativity: f64,
}

impl MeasureReport {
    pub fn compute(rho: &DensityMatrix) -> Result<Self> {
        let d = rho.bloch()?;
        let geo = geometric_discord_from(&d);
        let purity = purity(rho);
        Ok(Self {
            purity,
            c2: c2_coherence(rho),
            c_l2: c_l2_coherence(rho),
            correlated_coherence: correlated_coherence(rho)?,
            l1_coherence: l1_coherence(rho),
            rel_entropy_coherence: rel_entropy_coherence(rho),
            geometric_discord_normalized: geo.normalized,
            geometric_discord_renormalized: geo.renormalized,
            entropic_discord: entropic_discord(rho)?.discord,
            negativity: negativity(rho)?,
        })
    }
}

/// `tr rho^2`
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().trace_product(rho.matrix()).re
}

/// `d tr rho^2 - 1`, coherence relative to the maximally mixed state.
pub fn c2_coherence(rho: &DensityMatrix) -> f64 {
    rho.dim() as f64 * purity(rho) - 1.0
}

/// `tr rho^2 - 1/d`
pub fn c_l2_coherence(rho: &DensityMatrix) -> f64 {
    purity(rho) - 1.0 / rho.dim() as f64
}

/// `C2(rho) - C2(rho_A) - C2(rho_B)`.
pub fn correlated_coherence(rho: &DensityMatrix) -> Result<f64> {
    let rho_a = rho.reduced(Subsystem::A)?;
    let rho_b = rho.reduced(Subsystem::B)?;
    Ok(c2_coherence(rho) - c2_coherence(&rho_a) - c2_coherence(&rho_b))
}

/// Sum of moduli of the off-diagonal entries in the computational basis.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let n = m.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm();
            }
        }
    }
    acc
}

/// Shannon entropy (bits) of a spectrum; entries below [`ENTROPY_ZERO_TOL`]
/// count as zero.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&p| p > ENTROPY_ZERO_TOL)
        .fold(0.0, |acc, &p| acc - p * p.log2())
}

/// Entropy of a qubit whose Bloch vector has length `r`.
pub fn qubit_entropy(r: f64) -> f64 {
    let r = r.clamp(0.0, 1.0);
    entropy_of_spectrum(&[(1.0 + r) / 2.0, (1.0 - r) / 2.0])
}

/// `-tr(rho log2 rho)`
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

/// `S(diag rho) - S(rho)` in bits.
pub fn rel_entropy_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let diag: Vec<f64> = (0..m.dim()).map(|i| m[(i, i)].re).collect();
    entropy_of_spectrum(&diag) - von_neumann_entropy(rho)
}

/// Geometric discord (measured on A) in both normalizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricDiscord {
    /// `(|a|^2 + ||E||^2 - k_max) / 2`, equal to 1 on Bell states.
    pub normalized: f64,
    /// `(|a|^2 + ||E||^2 - k_max) / 3`.
    pub renormalized: f64,
    /// Largest eigenvalue of `K = a a^T + E E^T`.
    pub k_max: f64,
    /// `normalized` before clamping.
    pub raw: f64,
}

pub fn geometric_discord(rho: &DensityMatrix) -> Result<GeometricDiscord> {
    Ok(geometric_discord_from(&rho.bloch()?))
}

pub fn geometric_discord_from(d: &BlochDecomposition) -> GeometricDiscord {
    let k = real::mat_add(
        &real::outer(&d.a, &d.a),
        &real::mat_mul(&d.e, &real::transpose(&d.e)),
    );
    let (vals, _) = symmetric_eigen3(&k).expect("K is symmetric");
    let k_max = vals[2];
    let total = real::dot(&d.a, &d.a) + d.correlation_norm_sq() - k_max;
    let raw = 0.5 * total;
    let normalized = clamp_small_negative(raw, GEOMETRIC_CLAMP_TOL);
    GeometricDiscord {
        normalized,
        renormalized: normalized * 2.0 / 3.0,
        k_max,
        raw,
    }
}

fn clamp_small_negative(x: f64, tol: f64) -> f64 {
    if x < 0.0 && x >= -tol {
        0.0
    } else {
        x
    }
}

/// Projective measurement of qubit A along `direction`: the pair
/// `(I + n.sigma)/2`, `(I - n.sigma)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementProjector {
    pub direction: UnitVector,
}

impl MeasurementProjector {
    pub fn new(direction: UnitVector) -> Self {
        Self { direction }
    }

    /// Qubit projector for outcome `sign` (+1 or -1).
    pub fn projector(&self, sign: f64) -> ComplexMatrix {
        let p = PauliBasis::standard();
        (p.identity2 + p.dot(&self.direction).scale(sign)).scale(0.5)
    }

    /// `Pi_k x I_B` on the two-qubit space.
    pub fn lifted(&self, sign: f64) -> ComplexMatrix {
        tensor_product(&self.projector(sign), &ComplexMatrix::identity(2))
            .expect("projector factors are 2x2")
    }
}

/// `sum_k p_k S(rho_B|k)` after measuring A along `n`, in Bloch form:
/// `p_k = (1 + k n.a)/2`, `b_k = (b + k E^T n)/(1 + k n.a)`.
pub fn measured_conditional_entropy(d: &BlochDecomposition, n: &Vec3) -> f64 {
    let etn = real::mat_t_vec(&d.e, n);
    let na = real::dot(n, &d.a);
    [1.0, -1.0]
        .iter()
        .map(|&k| {
            let p = 0.5 * (1.0 + k * na);
            if p < OUTCOME_PROB_TOL {
                return 0.0;
            }
            let bk = real::scale(&real::add(&d.b, &real::scale(&etn, k)), 0.5 / p);
            p * qubit_entropy(real::norm(&bk))
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropicDiscord {
    /// Clamped discord in bits.
    pub discord: f64,
    /// Unclamped value.
    pub raw: f64,
    /// Measurement direction on A attaining the minimum.
    pub direction: UnitVector,
    /// Minimal averaged conditional entropy of B.
    pub conditional_entropy: f64,
}

/// Minimizes [`measured_conditional_entropy`] over unit directions: a
/// 64x128 grid over the upper hemisphere (antipodal directions give the same
/// measurement) seeds a coordinate descent in the tangent plane whose step
/// halves whenever no move improves, down to `1e-10` rad.
pub fn minimize_conditional_entropy(d: &BlochDecomposition) -> (UnitVector, f64) {
    let f = |n: &UnitVector| measured_conditional_entropy(d, n);

    let dtheta = std::f64::consts::FRAC_PI_2 / (GRID_THETA - 1) as f64;
    let dphi = 2.0 * std::f64::consts::PI / GRID_PHI as f64;
    let mut best = UnitVector::Z;
    let mut best_val = f(&best);
    for i in 0..GRID_THETA {
        for j in 0..GRID_PHI {
            let n = UnitVector::from_angles(i as f64 * dtheta, j as f64 * dphi);
            let v = f(&n);
            if v < best_val {
                best = n;
                best_val = v;
            }
        }
    }

    let mut step = dtheta;
    let mut iters = 0;
    while step > REFINE_MIN_STEP && iters < REFINE_MAX_ITERS {
        iters += 1;
        let (u, v) = best.orthonormal_frame();
        let mut moved = false;
        for dir in [*u, real::scale(&u, -1.0), *v, real::scale(&v, -1.0)] {
            let cand = UnitVector::new(real::add(&best, &real::scale(&dir, step)))
                .expect("step is small relative to a unit vector");
            let val = f(&cand);
            if val < best_val {
                best = cand;
                best_val = val;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (best, best_val)
}

/// `S(rho_A) - S(rho_AB) + min_n sum_k p_k S(rho_B|k)`.
pub fn entropic_discord(rho: &DensityMatrix) -> Result<EntropicDiscord> {
    let d = rho.bloch()?;
    let s_a = von_neumann_entropy(&rho.reduced(Subsystem::A)?);
    let s_ab = von_neumann_entropy(rho);
    let (direction, conditional_entropy) = minimize_conditional_entropy(&d);
    let raw = s_a - s_ab + conditional_entropy;
    Ok(EntropicDiscord {
        discord: clamp_small_negative(raw, ENTROPIC_CLAMP_TOL),
        raw,
        direction,
        conditional_entropy,
    })
}

/// Sum of the moduli of the negative eigenvalues of the B-partial transpose.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    rho.require_two_qubit()?;
    let pt = partial_transpose_b(rho.matrix())?;
    let eig = crate::linalg::hermitian_eigen(&pt)?;
    // fold from +0 so a PPT state reports +0, not the -0 of an empty f64 sum
    Ok(eig.values.iter().filter(|&&x| x < 0.0).fold(0.0, |acc, x| acc - x))
}
