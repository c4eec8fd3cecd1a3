use serde::{Deserialize, Serialize};

use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::model::{alpha_opt_closed_form, effective_gain, PhaseVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Improves,
    Impairs,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnhancementReport {
    /// `E_k = (1 + α·x_k/σ_k²) / (1 + α·|h_k|²/σ_k²)`.
    pub e_factors: Vec<f64>,
    /// `E_1 / E_2`.
    pub eta: f64,
    /// Closed-form confidential power with and without the IRS.
    pub alpha_with: f64,
    pub alpha_without: f64,
    pub classification: Classification,
    /// `|2^{R_IRS} − η·2^{R_non}|` on the unclamped rates.
    pub identity_residual: f64,
}

fn require_two_users(ch: &ChannelSet) -> Result<()> {
    if ch.k() != 2 {
        return Err(Error::Domain(format!("two-user analysis needs K = 2, got {}", ch.k())));
    }
    Ok(())
}

/// Amplitudes `|m_kᴴ·diag(v*)·g + h_k|` for both users.
fn amplitudes(ch: &ChannelSet, v: &PhaseVector) -> [f64; 2] {
    [0, 1].map(|k| effective_gain(v, &ch.m[k], &ch.g, ch.h[k]).sqrt())
}

/// Sufficient conditions for the IRS design `v` to raise or lower the secrecy rate
/// relative to the direct links alone.
pub fn proposition3_classify(ch: &ChannelSet, v: &PhaseVector) -> Result<Classification> {
    require_two_users(ch)?;
    let (h1, h2) = (ch.h[0].norm(), ch.h[1].norm());
    if !(h1 * h1 / ch.sigma2[0] > h2 * h2 / ch.sigma2[1]) {
        return Err(Error::Precondition("direct links give no positive secrecy rate".into()));
    }
    let [a1, a2] = amplitudes(ch, v);
    Ok(if a2 > h2 && h2 * a1 > h1 * a2 {
        Classification::Improves
    } else if a2 < h2 && h2 * a1 < h1 * a2 {
        Classification::Impairs
    } else {
        Classification::Indeterminate
    })
}

/// Enhancement factors at a fixed confidential power `alpha`, plus the closed-form
/// power split with and without the IRS at floor `r_m`.
pub fn enhancement_analysis(ch: &ChannelSet, v: &PhaseVector, alpha: f64, p: f64, r_m: f64) -> Result<EnhancementReport> {
    require_two_users(ch)?;
    let amps = amplitudes(ch, v);
    let snr_irs: Vec<f64> = (0..2).map(|k| amps[k] * amps[k] / ch.sigma2[k]).collect();
    let snr_non: Vec<f64> = (0..2).map(|k| ch.h[k].norm_sqr() / ch.sigma2[k]).collect();
    let e: Vec<f64> = (0..2).map(|k| (1.0 + alpha * snr_irs[k]) / (1.0 + alpha * snr_non[k])).collect();
    let eta = e[0] / e[1];
    let ratio_irs = (1.0 + alpha * snr_irs[0]) / (1.0 + alpha * snr_irs[1]);
    let ratio_non = (1.0 + alpha * snr_non[0]) / (1.0 + alpha * snr_non[1]);
    let classification = match proposition3_classify(ch, v) {
        Ok(c) => c,
        Err(Error::Precondition(_)) => Classification::Indeterminate,
        Err(e) => return Err(e),
    };
    Ok(EnhancementReport {
        e_factors: e,
        eta,
        alpha_with: alpha_opt_closed_form(amps[1] * amps[1], ch.sigma2[1], p, r_m),
        alpha_without: alpha_opt_closed_form(ch.h[1].norm_sqr(), ch.sigma2[1], p, r_m),
        classification,
        identity_residual: (ratio_irs - eta * ratio_non).abs(),
    })
}
