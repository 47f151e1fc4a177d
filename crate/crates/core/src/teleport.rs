//! Standard teleportation through a two-qubit resource.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{singular_values_3x3, SpectrumTriple};
use crate::measures::geometric_discord;
use crate::state::DensityMatrix;

/// Slack on both sides of the fidelity/discord sandwich.
pub const BOUND_TOL: f64 = 1e-12;
/// Resources with `C_c` at or below this are certified useless.
pub const ZERO_CC_TOL: f64 = 1e-12;

/// Optimal average fidelity `(1 + (s_1 + s_2 + s_3)/3)/2` from the singular
/// values of the correlation matrix.
pub fn teleport_fidelity(rho: &DensityMatrix) -> Result<f64> {
    let sv = singular_values_3x3(&rho.bloch()?.e)?;
    Ok(fidelity_from_singular_values(&sv))
}

fn fidelity_from_singular_values(sv: &SpectrumTriple) -> f64 {
    0.5 * (1.0 + sv.sum() / 3.0)
}

/// Fidelity together with the renormalized geometric discord sandwich
/// `(1 + D)/2 <= F <= (2 + sqrt(D))/3`. A violated bound is reported, not
/// raised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TeleportReport {
    pub fidelity: f64,
    pub singular_values: SpectrumTriple,
    pub discord: f64,
    pub bound_lower: f64,
    pub bound_upper: f64,
    pub bounds_satisfied: bool,
    pub correlated_coherence: f64,
}

pub fn fidelity_discord_bounds(rho: &DensityMatrix) -> Result<TeleportReport> {
    let d = rho.bloch()?;
    let singular_values = singular_values_3x3(&d.e)?;
    let fidelity = fidelity_from_singular_values(&singular_values);
    let discord = geometric_discord(rho)?.renormalized;
    let bound_lower = 0.5 * (1.0 + discord);
    let bound_upper = (2.0 + discord.max(0.0).sqrt()) / 3.0;
    Ok(TeleportReport {
        fidelity,
        singular_values,
        discord,
        bound_lower,
        bound_upper,
        bounds_satisfied: bound_lower - BOUND_TOL <= fidelity && fidelity <= bound_upper + BOUND_TOL,
        correlated_coherence: d.correlation_norm_sq(),
    })
}

/// A state without correlated coherence has `E = 0` and so teleports at the
/// classical-guess fidelity `1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroCcCertificate {
    pub is_useless: bool,
    pub fidelity: f64,
    pub correlated_coherence: f64,
}

pub fn zero_cc_certificate(rho: &DensityMatrix) -> Result<ZeroCcCertificate> {
    let d = rho.bloch()?;
    let correlated_coherence = d.correlation_norm_sq();
    Ok(ZeroCcCertificate {
        is_useless: correlated_coherence <= ZERO_CC_TOL,
        fidelity: fidelity_from_singular_values(&singular_values_3x3(&d.e)?),
        correlated_coherence,
    })
}
