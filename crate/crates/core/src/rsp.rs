//! Remote state preparation over a shared two-qubit state.
//!
//! Alice measures her qubit along `alpha`, announces the outcome, and Bob
//! flips his Bloch vector (`R_pi = -1`) on the minus outcome. Averaged over
//! outcomes Bob holds `r = E^T alpha`, so the fidelity with a target `s` is
//! `(1 + alpha.E s)/2` and the payoff is `(alpha.E s)^2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::real::{self, Vec3, ZERO3};
use crate::linalg::{symmetric_eigen3, UnitVector};
use crate::measures::correlated_coherence;
use crate::quadrature::gauss_legendre;
use crate::state::{BlochDecomposition, DensityMatrix};

/// Outcomes less likely than this are treated as impossible.
pub const ZERO_PROB_TOL: f64 = 1e-12;
/// `|E s|` at or below this makes the optimal direction degenerate.
pub const DEGENERATE_TOL: f64 = 1e-12;
/// Shots per independently seeded simulation chunk.
pub const SHOT_CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// Bob's Bloch vector after Alice obtains one outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalState {
    pub bloch: Vec3,
    pub probability: f64,
}

/// Probability `(1 + k alpha.a)/2` of outcome `k` and Bob's conditional Bloch
/// vector `(b + k E^T alpha)/(1 + k alpha.a)`.
pub fn conditional_state(
    d: &BlochDecomposition,
    alpha: &UnitVector,
    outcome: Outcome,
) -> Result<ConditionalState> {
    let k = outcome.sign();
    let denom = 1.0 + k * real::dot(alpha, &d.a);
    let probability = (0.5 * denom).clamp(0.0, 1.0);
    if probability <= ZERO_PROB_TOL {
        return Err(Error::ZeroProbability);
    }
    let numer = real::add(&d.b, &real::scale(&real::mat_t_vec(&d.e, alpha), k));
    Ok(ConditionalState {
        bloch: real::scale(&numer, 1.0 / denom),
        probability,
    })
}

/// `P(+) b_+ + P(-) R_pi b_-` with `R_pi = -1`.
pub fn corrected_state(d: &BlochDecomposition, alpha: &UnitVector) -> Vec3 {
    let mut r = ZERO3;
    for outcome in [Outcome::Plus, Outcome::Minus] {
        if let Ok(c) = conditional_state(d, alpha, outcome) {
            r = real::add(&r, &real::scale(&c.bloch, c.probability * outcome.sign()));
        }
    }
    r
}

/// `(1 + r.s)/2`
pub fn rsp_fidelity(d: &BlochDecomposition, alpha: &UnitVector, s: &UnitVector) -> f64 {
    0.5 * (1.0 + real::dot(&corrected_state(d, alpha), s))
}

/// `(2F - 1)^2`
pub fn payoff(d: &BlochDecomposition, alpha: &UnitVector, s: &UnitVector) -> f64 {
    let x = 2.0 * rsp_fidelity(d, alpha, s) - 1.0;
    x * x
}

/// Target, pre-announced axis and measurement direction of one protocol run.
/// Only the circular averages constrain the target to be perpendicular to
/// the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RspTask {
    pub target: UnitVector,
    pub axis: UnitVector,
    pub alpha: UnitVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RspResult {
    pub prob_plus: f64,
    pub prob_minus: f64,
    /// `None` when the outcome cannot occur.
    pub b_plus: Option<Vec3>,
    pub b_minus: Option<Vec3>,
    pub r: Vec3,
    pub fidelity: f64,
    pub payoff: f64,
}

impl RspTask {
    pub fn run(&self, d: &BlochDecomposition) -> RspResult {
        let plus = conditional_state(d, &self.alpha, Outcome::Plus).ok();
        let minus = conditional_state(d, &self.alpha, Outcome::Minus).ok();
        let prob_plus = plus.map_or(0.0, |c| c.probability);
        let r = corrected_state(d, &self.alpha);
        let fidelity = 0.5 * (1.0 + real::dot(&r, &self.target));
        RspResult {
            prob_plus,
            prob_minus: 1.0 - prob_plus,
            b_plus: plus.map(|c| c.bloch),
            b_minus: minus.map(|c| c.bloch),
            r,
            fidelity,
            payoff: (2.0 * fidelity - 1.0).powi(2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalAlpha {
    pub alpha: UnitVector,
    /// `E s` vanished: every direction is optimal, `alpha` is the convention `z`.
    pub degenerate: bool,
}

/// `alpha = E s / |E s|`, or `z` with the degeneracy flag when `E s = 0`.
pub fn optimal_alpha(d: &BlochDecomposition, s: &UnitVector) -> OptimalAlpha {
    let es = real::mat_vec(&d.e, s);
    if real::norm(&es) <= DEGENERATE_TOL {
        OptimalAlpha {
            alpha: UnitVector::Z,
            degenerate: true,
        }
    } else {
        OptimalAlpha {
            alpha: UnitVector::new(es).expect("nonzero vector"),
            degenerate: false,
        }
    }
}

/// `|E s|^2 = sum_i (sum_j E_ij s_j)^2`
pub fn optimal_payoff(d: &BlochDecomposition, s: &UnitVector) -> f64 {
    let es = real::mat_vec(&d.e, s);
    real::dot(&es, &es)
}

/// Average optimal payoff over targets on the great circle perpendicular to
/// `beta`: `(||E||^2 - beta^T E^T E beta)/2`.
pub fn circular_average_payoff(d: &BlochDecomposition, beta: &UnitVector) -> f64 {
    let e_beta = real::mat_vec(&d.e, beta);
    0.5 * (d.correlation_norm_sq() - real::dot(&e_beta, &e_beta))
}

/// Trapezoid average of [`optimal_payoff`] over `n_phi` equally spaced targets
/// on the circle perpendicular to `beta`.
pub fn quadrature_circular_average(d: &BlochDecomposition, beta: &UnitVector, n_phi: usize) -> f64 {
    assert!(n_phi >= 3, "need at least three nodes on the circle");
    let (u, v) = beta.orthonormal_frame();
    let sum: f64 = (0..n_phi)
        .map(|j| {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
            let (sp, cp) = phi.sin_cos();
            let s = UnitVector::new(real::add(&real::scale(&u, cp), &real::scale(&v, sp)))
                .expect("circle point is nonzero");
            optimal_payoff(d, &s)
        })
        .sum();
    sum / n_phi as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinAveragePayoff {
    pub p_min: f64,
    /// Worst-case axis: eigenvector of the largest eigenvalue of `E^T E`.
    pub beta_star: UnitVector,
    /// Eigenvalues of `E^T E`, decreasing.
    pub ete_eigenvalues: [f64; 3],
}

/// Worst case over axes of the circular average: `(lambda_2 + lambda_3)/2`.
pub fn min_average_payoff(d: &BlochDecomposition) -> MinAveragePayoff {
    let (vals, vecs) = symmetric_eigen3(&d.ete()).expect("E^T E is symmetric");
    let beta_star = UnitVector::new([vecs[0][2], vecs[1][2], vecs[2][2]])
        .expect("eigenvectors are unit length");
    MinAveragePayoff {
        p_min: 0.5 * (vals[0] + vals[1]),
        beta_star,
        ete_eigenvalues: [vals[2], vals[1], vals[0]],
    }
}

/// Average of the optimal payoff over all targets on the Bloch sphere:
/// `||E||_F^2 / 3`.
pub fn spherical_average_payoff(d: &BlochDecomposition) -> f64 {
    d.correlation_norm_sq() / 3.0
}

/// Numerical sphere average of [`optimal_payoff`]: Gauss-Legendre in
/// `cos(theta)` composed with the trapezoid rule in `phi`.
pub fn quadrature_spherical_average(
    d: &BlochDecomposition,
    n_theta: usize,
    n_phi: usize,
) -> Result<f64> {
    for (name, n) in [("n_theta", n_theta), ("n_phi", n_phi)] {
        if n < 8 {
            return Err(Error::OutOfRange {
                name,
                value: n as f64,
                range: ">= 8",
            });
        }
    }
    let (nodes, weights) = gauss_legendre(n_theta);
    let mut total = 0.0;
    for (&x, &w) in nodes.iter().zip(&weights) {
        let theta = x.clamp(-1.0, 1.0).acos();
        let ring: f64 = (0..n_phi)
            .map(|j| {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
                optimal_payoff(d, &UnitVector::from_angles(theta, phi))
            })
            .sum();
        total += w * ring / n_phi as f64;
    }
    // weights integrate to 2 over cos(theta) in [-1, 1]
    Ok(0.5 * total)
}

/// Both sides of `P_sphere = C_c / 3` for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
}

pub fn payoff_coherence_identity(rho: &DensityMatrix) -> Result<IdentityCheck> {
    let lhs = spherical_average_payoff(&rho.bloch()?);
    let rhs = correlated_coherence(rho)? / 3.0;
    Ok(IdentityCheck {
        lhs,
        rhs,
        defect: (lhs - rhs).abs(),
    })
}

/// Finite-shot run of the protocol with the optimal measurement direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RspSimulation {
    pub target: UnitVector,
    pub alpha: UnitVector,
    pub degenerate: bool,
    pub shots: u64,
    pub plus_count: u64,
    pub prob_plus: f64,
    pub empirical_r: Vec3,
    pub empirical_fidelity: f64,
    pub empirical_payoff: f64,
    pub analytic_r: Vec3,
    pub analytic_fidelity: f64,
    pub analytic_payoff: f64,
    /// Binomial standard error of the empirical fidelity.
    pub fidelity_std_error: f64,
    /// Delta-method standard error of the empirical payoff.
    pub payoff_std_error: f64,
}

/// Samples Alice's outcome `shots` times, applies Bob's correction and
/// averages his Bloch vectors.
///
/// Shots are split into chunks of [`SHOT_CHUNK`]; chunk `i` draws from a
/// ChaCha8 stream `i` keyed by `seed`. Chunk sizes do not depend on the
/// thread count, so the result is bit-identical for a fixed seed.
pub fn simulate_rsp(rho: &DensityMatrix, s: &UnitVector, shots: u64, seed: u64) -> Result<RspSimulation> {
    if shots == 0 {
        return Err(Error::OutOfRange {
            name: "shots",
            value: 0.0,
            range: ">= 1",
        });
    }
    let d = rho.bloch()?;
    let opt = optimal_alpha(&d, s);
    let plus = conditional_state(&d, &opt.alpha, Outcome::Plus).ok();
    let minus = conditional_state(&d, &opt.alpha, Outcome::Minus).ok();
    let prob_plus = plus.map_or(0.0, |c| c.probability);
    // Bob's corrected vector for each outcome
    let v_plus = plus.map_or(ZERO3, |c| c.bloch);
    let v_minus = minus.map_or(ZERO3, |c| real::scale(&c.bloch, -1.0));

    let chunks = shots.div_ceil(SHOT_CHUNK);
    let plus_count: u64 = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let len = SHOT_CHUNK.min(shots - i * SHOT_CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            (0..len).filter(|_| rng.random::<f64>() < prob_plus).count() as u64
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    let minus_count = shots - plus_count;

    let n = shots as f64;
    let empirical_r = real::scale(
        &real::add(
            &real::scale(&v_plus, plus_count as f64),
            &real::scale(&v_minus, minus_count as f64),
        ),
        1.0 / n,
    );
    let empirical_fidelity = 0.5 * (1.0 + real::dot(&empirical_r, s));
    let analytic_r = real::mat_t_vec(&d.e, &opt.alpha);
    let analytic_fidelity = 0.5 * (1.0 + real::dot(&analytic_r, s));

    let spread = real::dot(&v_plus, s) - real::dot(&v_minus, s);
    let fidelity_std_error = 0.5 * (prob_plus * (1.0 - prob_plus) / n).sqrt() * spread.abs();
    let payoff_std_error = (4.0 * (2.0 * empirical_fidelity - 1.0)).abs() * fidelity_std_error;

    Ok(RspSimulation {
        target: *s,
        alpha: opt.alpha,
        degenerate: opt.degenerate,
        shots,
        plus_count,
        prob_plus,
        empirical_r,
        empirical_fidelity,
        empirical_payoff: (2.0 * empirical_fidelity - 1.0).powi(2),
        analytic_r,
        analytic_fidelity,
        analytic_payoff: (2.0 * analytic_fidelity - 1.0).powi(2),
        fidelity_std_error,
        payoff_std_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{
        make_bell, make_werner, paper_channel_state, paper_product_state, BellState,
    };

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn mixed() -> BlochDecomposition {
        DensityMatrix::maximally_mixed(4).unwrap().bloch().unwrap()
    }

    fn bell() -> BlochDecomposition {
        make_bell(BellState::PhiPlus).bloch().unwrap()
    }

    fn product() -> BlochDecomposition {
        paper_product_state().bloch().unwrap()
    }

    #[test]
    fn conditional_state_examples() {
        let alpha = UnitVector::new([0.2, -0.4, 0.7]).unwrap();
        let c = conditional_state(&mixed(), &alpha, Outcome::Plus).unwrap();
        assert_eq!((c.bloch, c.probability), (ZERO3, 0.5));

        let c = conditional_state(&bell(), &UnitVector::Z, Outcome::Plus).unwrap();
        close(c.probability, 0.5, 1e-15);
        assert!(real::max_abs_diff(&c.bloch, &[0.0, 0.0, 1.0]) < 1e-15);

        let c = conditional_state(&product(), &UnitVector::Z, Outcome::Plus).unwrap();
        close(c.probability, 0.9, 1e-15);
        assert!(real::max_abs_diff(&c.bloch, &[0.0, 0.0, 0.6]) < 1e-15);
    }

    #[test]
    fn zero_probability_outcome_is_signalled() {
        let z = [0.0, 0.0, 1.0];
        let d = BlochDecomposition::new(z, z, real::diag3(&z)); // |00>
        assert_eq!(
            conditional_state(&d, &UnitVector::Z, Outcome::Minus),
            Err(Error::ZeroProbability)
        );
        // the impossible outcome contributes nothing to Bob's average state
        assert!(real::max_abs_diff(&corrected_state(&d, &UnitVector::Z), &z) < 1e-15);
    }

    #[test]
    fn corrected_state_examples() {
        assert_eq!(corrected_state(&mixed(), &UnitVector::X), ZERO3);
        assert!(real::max_abs_diff(&corrected_state(&bell(), &UnitVector::X), &[1.0, 0.0, 0.0]) < 1e-15);
        // I/2 x rho_B has E = 0
        let d = BlochDecomposition::new(ZERO3, [0.3, 0.1, -0.2], real::ZERO33);
        let alpha = UnitVector::new([1.0, 2.0, 3.0]).unwrap();
        assert!(real::norm(&corrected_state(&d, &alpha)) < 1e-15);
    }

    #[test]
    fn fidelity_and_payoff_examples() {
        let s = UnitVector::new([0.1, 0.7, -0.3]).unwrap();
        close(rsp_fidelity(&mixed(), &UnitVector::Z, &s), 0.5, 0.0);
        close(payoff(&mixed(), &UnitVector::Z, &s), 0.0, 0.0);

        let opt = optimal_alpha(&bell(), &UnitVector::X);
        assert!(!opt.degenerate);
        assert!(real::max_abs_diff(&opt.alpha, &UnitVector::X) < 1e-15);
        close(rsp_fidelity(&bell(), &opt.alpha, &UnitVector::X), 1.0, 1e-15);
        close(payoff(&bell(), &opt.alpha, &UnitVector::X), 1.0, 1e-15);

        close(rsp_fidelity(&product(), &UnitVector::Z, &UnitVector::Z), 0.74, 1e-15);
        close(payoff(&product(), &UnitVector::Z, &UnitVector::Z), 0.2304, 1e-15);
    }

    #[test]
    fn task_result_invariants() {
        let d = paper_channel_state().bloch().unwrap();
        let task = RspTask {
            target: UnitVector::Y,
            axis: UnitVector::Z,
            alpha: UnitVector::new([0.3, 0.9, 0.1]).unwrap(),
        };
        let res = task.run(&d);
        close(res.prob_plus + res.prob_minus, 1.0, 1e-12);
        close(res.payoff, (2.0 * res.fidelity - 1.0).powi(2), 1e-12);
        close(res.fidelity, rsp_fidelity(&d, &task.alpha, &task.target), 1e-15);
    }

    #[test]
    fn degenerate_optimal_direction() {
        let opt = optimal_alpha(&product(), &UnitVector::X);
        assert!(opt.degenerate);
        assert_eq!(opt.alpha, UnitVector::Z);
        assert_eq!(optimal_payoff(&product(), &UnitVector::X), 0.0);
        assert_eq!(payoff(&product(), &opt.alpha, &UnitVector::X), 0.0);
    }

    #[test]
    fn optimal_payoff_matches_optimal_alpha() {
        let d = paper_channel_state().bloch().unwrap();
        let s = UnitVector::new([0.8, 0.1, 0.3]).unwrap();
        let opt = optimal_alpha(&d, &s);
        close(optimal_payoff(&d, &s), payoff(&d, &opt.alpha, &s), 1e-12);
    }

    #[test]
    fn circular_average_examples() {
        close(circular_average_payoff(&bell(), &UnitVector::Z), 1.0, 1e-15);
        let beta = UnitVector::new([1.0, 1.0, 0.0]).unwrap();
        assert_eq!(circular_average_payoff(&mixed(), &beta), 0.0);
        close(circular_average_payoff(&product(), &UnitVector::Z), 0.0, 1e-15);
        for beta in [UnitVector::X, UnitVector::Z, beta] {
            close(
                quadrature_circular_average(&product(), &beta, 16),
                circular_average_payoff(&product(), &beta),
                1e-15,
            );
        }
    }

    #[test]
    fn min_average_examples() {
        close(min_average_payoff(&bell()).p_min, 1.0, 1e-14);
        assert_eq!(min_average_payoff(&mixed()).p_min, 0.0);
        for p in [0.1, 0.5, 0.9] {
            let d = make_werner(p).unwrap().bloch().unwrap();
            close(min_average_payoff(&d).p_min, p * p, 1e-14);
        }
        let m = min_average_payoff(&product());
        close(m.p_min, 0.0, 1e-15);
        assert!(m.beta_star[2].abs() > 1.0 - 1e-12);
        close(circular_average_payoff(&product(), &m.beta_star), m.p_min, 1e-15);
    }

    #[test]
    fn spherical_average_examples() {
        close(spherical_average_payoff(&product()), 0.0768, 1e-15);
        close(spherical_average_payoff(&bell()), 1.0, 1e-15);
        let d = make_werner(0.5).unwrap().bloch().unwrap();
        close(spherical_average_payoff(&d), 0.25, 1e-15);
    }

    #[test]
    fn identity_examples() {
        let c = payoff_coherence_identity(&paper_product_state()).unwrap();
        close(c.lhs, 0.0768, 1e-14);
        close(c.rhs, 0.0768, 1e-14);
        let c = payoff_coherence_identity(&paper_channel_state()).unwrap();
        close(c.lhs, 1.0 / 48.0, 1e-15);
        assert!(c.defect <= 1e-15);
    }

    #[test]
    fn quadrature_examples() {
        close(quadrature_spherical_average(&bell(), 64, 128).unwrap(), 1.0, 1e-6);
        assert_eq!(quadrature_spherical_average(&mixed(), 8, 8).unwrap(), 0.0);
        close(quadrature_spherical_average(&product(), 128, 256).unwrap(), 0.0768, 1e-6);
        assert!(matches!(
            quadrature_spherical_average(&bell(), 4, 64),
            Err(Error::OutOfRange { name: "n_theta", .. })
        ));
    }

    #[test]
    fn simulation_examples() {
        let sim = simulate_rsp(&make_bell(BellState::PhiPlus), &UnitVector::X, 100_000, 3).unwrap();
        assert_eq!(sim.empirical_payoff, 1.0);
        assert_eq!(sim.empirical_fidelity, 1.0);

        let sim = simulate_rsp(&DensityMatrix::maximally_mixed(4).unwrap(), &UnitVector::X, 100_000, 5)
            .unwrap();
        assert!(sim.degenerate);
        assert!(real::norm(&sim.empirical_r) <= 0.02);

        let a = simulate_rsp(&paper_product_state(), &UnitVector::Z, 200_000, 9).unwrap();
        let b = simulate_rsp(&paper_product_state(), &UnitVector::Z, 200_000, 9).unwrap();
        assert_eq!(a, b);
        assert!(simulate_rsp(&paper_product_state(), &UnitVector::Z, 0, 9).is_err());
    }
}
