//! The report document: every measure of one state in one serializable tree.

use corrcoh::io::canonical_bytes;
use corrcoh::linalg::UnitVector;
use corrcoh::measures::MeasureReport;
use corrcoh::rsp::{
    circular_average_payoff, min_average_payoff, optimal_alpha, optimal_payoff,
    spherical_average_payoff, MinAveragePayoff,
};
use corrcoh::state::DensityMatrix;
use corrcoh::teleport::{fidelity_discord_bounds, TeleportReport};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub label: String,
    pub input_digest: String,
    pub measures: MeasureReport,
    pub rsp: RspSection,
    pub teleport: TeleportReport,
    pub tool_version: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RspSection {
    pub spherical_average: f64,
    pub min_average: MinAveragePayoff,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circular_average: Option<CircularAverage>,
    pub targets: Vec<TargetPayoff>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CircularAverage {
    pub beta: UnitVector,
    pub payoff: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TargetPayoff {
    pub target: UnitVector,
    pub alpha: UnitVector,
    pub degenerate: bool,
    pub optimal_payoff: f64,
    pub fidelity: f64,
}

/// SHA-256 of the stored matrix entries, lowercase hex.
pub fn digest(rho: &DensityMatrix) -> String {
    format!("{:x}", Sha256::digest(canonical_bytes(rho)))
}

pub fn build(
    rho: &DensityMatrix,
    label: String,
    targets: &[UnitVector],
    beta: Option<&UnitVector>,
) -> Result<ReportDocument, CliError> {
    let d = rho.bloch()?;
    let targets = targets
        .iter()
        .map(|s| {
            let opt = optimal_alpha(&d, s);
            let payoff = optimal_payoff(&d, s);
            TargetPayoff {
                target: *s,
                alpha: opt.alpha,
                degenerate: opt.degenerate,
                optimal_payoff: payoff,
                fidelity: 0.5 * (1.0 + payoff.sqrt()),
            }
        })
        .collect();
    Ok(ReportDocument {
        label,
        input_digest: digest(rho),
        measures: MeasureReport::compute(rho)?,
        rsp: RspSection {
            spherical_average: spherical_average_payoff(&d),
            min_average: min_average_payoff(&d),
            circular_average: beta.map(|b| CircularAverage {
                beta: *b,
                payoff: circular_average_payoff(&d, b),
            }),
            targets,
        },
        teleport: fidelity_discord_bounds(rho)?,
        tool_version: env!("CARGO_PKG_VERSION").to_owned(),
    })
}
