//! Bulk verification of the closed forms over seeded random states.
//!
//! Trial `t` uses the Ginibre state `random_density(4, 1 + t % 4, seed + t)`,
//! reproducible with `corrcoh make random --seed <seed + t> --rank <rank>`.
//! Trials run in parallel; defects are reduced in trial order, so the
//! summary does not depend on the worker count.

use std::f64::consts::PI;

use corrcoh::linalg::real::{self, Vec3};
use corrcoh::linalg::UnitVector;
use corrcoh::measures::{correlated_coherence, geometric_discord};
use corrcoh::rsp::{
    corrected_state, min_average_payoff, optimal_alpha, payoff, quadrature_spherical_average,
    rsp_fidelity, spherical_average_payoff,
};
use corrcoh::state::{make_werner, random_density, seeded_rng, DensityMatrix};
use corrcoh::teleport::teleport_fidelity;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{render as render_docs, Format};
use crate::report::digest;
use crate::CliError;

/// Werner parameters cycle through `k / 100` for `k = 0..=100`.
const WERNER_GRID: u64 = 101;
/// Separates the direction stream from the state stream of a trial.
const DIRECTION_SALT: u64 = 0x9e37_79b9_7f4a_7c15;
/// `C_c` above which the teleportation fidelity must beat 1/2.
const WITNESS_CC: f64 = 1e-8;
const WITNESS_MARGIN: f64 = 1e-12;

const SUITES: [&str; 4] = ["identity", "corrected_state", "zero_cc", "werner"];

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub max_defect: f64,
    pub passed: bool,
    pub worst_trial: u64,
    pub worst_seed: u64,
    pub worst_rank: usize,
    pub worst_digest: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

struct Trial {
    defects: [f64; 4],
    digests: [String; 4],
}

fn random_direction<R: Rng>(rng: &mut R) -> UnitVector {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    UnitVector::from_angles(z.acos(), phi)
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN is kept so a broken computation cannot pass
    values.into_iter().fold(0.0, |m, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) })
}

fn identity_defect(rho: &DensityMatrix) -> corrcoh::Result<f64> {
    let d = rho.bloch()?;
    let cc = correlated_coherence(rho)?;
    let sphere = spherical_average_payoff(&d);
    // the payoff is quadratic in s, so an 8 x 8 rule is exact
    let quad = quadrature_spherical_average(&d, 8, 8)?;
    Ok(max_of([
        (sphere - cc / 3.0).abs(),
        (cc - d.correlation_norm_sq()).abs(),
        (quad - cc / 3.0).abs(),
    ]))
}

fn corrected_state_defect(rho: &DensityMatrix, seed: u64) -> corrcoh::Result<f64> {
    let d = rho.bloch()?;
    let mut rng = seeded_rng(seed ^ DIRECTION_SALT);
    let alpha = random_direction(&mut rng);
    let s = random_direction(&mut rng);
    let r = corrected_state(&d, &alpha);
    let closed: Vec3 = real::mat_t_vec(&d.e, &alpha);
    let x = real::dot(&alpha, &real::mat_vec(&d.e, &s));
    Ok(max_of([
        real::max_abs_diff(&r, &closed),
        (rsp_fidelity(&d, &alpha, &s) - 0.5 * (1.0 + x)).abs(),
        (payoff(&d, &alpha, &s) - x * x).abs(),
    ]))
}

fn zero_cc_defect(rho: &DensityMatrix, seed: u64) -> corrcoh::Result<(f64, DensityMatrix)> {
    let d = rho.bloch()?;
    let witness = if d.correlation_norm_sq() > WITNESS_CC && teleport_fidelity(rho)? <= 0.5 + WITNESS_MARGIN {
        1.0
    } else {
        0.0
    };
    let projected = d.without_correlations().reconstruct()?;
    let p = projected.bloch()?;
    let mut rng = seeded_rng(seed ^ DIRECTION_SALT);
    let payoffs = [UnitVector::X, UnitVector::Y, UnitVector::Z, random_direction(&mut rng)]
        .map(|s| payoff(&p, &optimal_alpha(&p, &s).alpha, &s));
    Ok((
        max_of(
            [witness, (teleport_fidelity(&projected)? - 0.5).abs(), correlated_coherence(&projected)?]
                .into_iter()
                .chain(payoffs),
        ),
        projected,
    ))
}

fn werner_defect(p: f64) -> corrcoh::Result<(f64, DensityMatrix)> {
    let rho = make_werner(p)?;
    let d = rho.bloch()?;
    let p2 = p * p;
    Ok((
        max_of([
            (teleport_fidelity(&rho)? - 0.5 * (1.0 + p)).abs(),
            (spherical_average_payoff(&d) - p2).abs(),
            (min_average_payoff(&d).p_min - p2).abs(),
            (correlated_coherence(&rho)? - 3.0 * p2).abs(),
            (geometric_discord(&rho)?.normalized - p2).abs(),
        ]),
        rho,
    ))
}

fn run_trial(t: u64, seed: u64) -> corrcoh::Result<Trial> {
    let trial_seed = seed.wrapping_add(t);
    let rho = random_density(4, rank_of(t), trial_seed)?;
    let (zero_cc, projected) = zero_cc_defect(&rho, trial_seed)?;
    let p = (t % WERNER_GRID) as f64 / (WERNER_GRID - 1) as f64;
    let (werner, werner_state) = werner_defect(p)?;
    let base = digest(&rho);
    Ok(Trial {
        defects: [
            identity_defect(&rho)?,
            corrected_state_defect(&rho, trial_seed)?,
            zero_cc,
            werner,
        ],
        digests: [base.clone(), base, digest(&projected), digest(&werner_state)],
    })
}

fn rank_of(t: u64) -> usize {
    1 + (t % 4) as usize
}

pub fn run(trials: u64, seed: u64, tol: f64) -> Result<VerifySummary, CliError> {
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(t, seed))
        .collect::<corrcoh::Result<_>>()?;
    let suites: Vec<SuiteResult> = SUITES
        .iter()
        .enumerate()
        .map(|(k, &suite)| {
            let mut worst = 0usize;
            for (i, r) in results.iter().enumerate() {
                let d = r.defects[k];
                if d.is_nan() || d > results[worst].defects[k] {
                    worst = i;
                    if d.is_nan() {
                        break;
                    }
                }
            }
            let max_defect = results[worst].defects[k];
            SuiteResult {
                suite,
                max_defect,
                passed: max_defect <= tol,
                worst_trial: worst as u64,
                worst_seed: seed.wrapping_add(worst as u64),
                worst_rank: rank_of(worst as u64),
                worst_digest: results[worst].digests[k].clone(),
            }
        })
        .collect();
    Ok(VerifySummary {
        trials,
        seed,
        tol,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

pub fn render(summary: &VerifySummary, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => render_docs(std::slice::from_ref(summary), Format::Json),
        Format::Csv => render_docs(&summary.suites, Format::Csv),
        Format::Text => {
            let mut out = format!(
                "trials {}  seed {}  tol {:e}\n{:<16} {:>24}  {}\n",
                summary.trials, summary.seed, summary.tol, "suite", "max_defect", "status"
            );
            for s in &summary.suites {
                out.push_str(&format!(
                    "{:<16} {:>24e}  {}\n",
                    s.suite,
                    s.max_defect,
                    if s.passed { "pass" } else { "FAIL" }
                ));
            }
            for s in summary.suites.iter().filter(|s| !s.passed) {
                out.push_str(&format!(
                    "{} failed at trial {}: seed {} rank {} digest {}\n",
                    s.suite, s.worst_trial, s.worst_seed, s.worst_rank, s.worst_digest
                ));
            }
            out.push_str(if summary.passed { "all suites passed\n" } else { "verification FAILED\n" });
            Ok(out)
        }
    }
}
