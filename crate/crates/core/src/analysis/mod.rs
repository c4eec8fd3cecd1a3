//! Optimality-gap bounds, IRS benefit classification, complexity estimates, and the
//! brute-force reference oracle.

mod enhancement;
pub mod instances;
mod oracle;

pub use enhancement::{enhancement_analysis, proposition3_classify, Classification, EnhancementReport};
pub use oracle::{brute_force_oracle, brute_force_oracle_with_offset, OracleResult};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `log2(1 + P·(N+1)·Tr(T_1) / (σ_1²·(T_α − 1)))`: gap of the α line search when the
/// fixed-α relaxation is tight.
pub fn gap_bound_tight(p: f64, n: usize, tr_t1: f64, sigma1_sq: f64, t_alpha: usize) -> Result<f64> {
    if t_alpha < 2 {
        return Err(Error::Domain("t_alpha must be at least 2".into()));
    }
    Ok((1.0 + p * (n as f64 + 1.0) * tr_t1 / (sigma1_sq * (t_alpha as f64 - 1.0))).log2())
}

/// Tight bound plus the observed relaxation gap `Δ_c`.
pub fn gap_bound_general(p: f64, n: usize, tr_t1: f64, sigma1_sq: f64, t_alpha: usize, delta_c: f64) -> Result<f64> {
    if !(delta_c >= 0.0) {
        return Err(Error::Domain(format!("delta_c must be nonnegative, got {delta_c}")));
    }
    Ok(gap_bound_tight(p, n, tr_t1, sigma1_sq, t_alpha)? + delta_c)
}

/// `log2(4/π + 4·P·(N+1)·Tr(T_1) / (π·σ_1²·(T_α − 1)))`: gap guaranteed with the
/// worst-case randomization ratio `π/4`. Tends to `log2(4/π)` as `T_α` grows.
pub fn gap_bound_worst_case(p: f64, n: usize, tr_t1: f64, sigma1_sq: f64, t_alpha: usize) -> Result<f64> {
    if t_alpha < 2 {
        return Err(Error::Domain("t_alpha must be at least 2".into()));
    }
    let pi = std::f64::consts::PI;
    Ok((4.0 / pi + 4.0 * p * (n as f64 + 1.0) * tr_t1 / (pi * sigma1_sq * (t_alpha as f64 - 1.0))).log2())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapBoundReport {
    pub bound_tight: f64,
    pub bound_general: f64,
    pub bound_worst_case: f64,
    pub delta_c: f64,
    pub t_alpha: usize,
}

pub fn gap_bound_report(p: f64, n: usize, tr_t1: f64, sigma1_sq: f64, t_alpha: usize, delta_c: f64) -> Result<GapBoundReport> {
    Ok(GapBoundReport {
        bound_tight: gap_bound_tight(p, n, tr_t1, sigma1_sq, t_alpha)?,
        bound_general: gap_bound_general(p, n, tr_t1, sigma1_sq, t_alpha, delta_c)?,
        bound_worst_case: gap_bound_worst_case(p, n, tr_t1, sigma1_sq, t_alpha)?,
        delta_c,
        t_alpha,
    })
}

/// Per-boundary-point operation counts of both algorithms and their components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityEstimate {
    pub a1: f64,
    pub a2: f64,
    pub a1_multicast: f64,
    pub a1_fixed_alpha: f64,
    pub a2_secrecy: f64,
    pub grp: f64,
}

/// Interior-point cost `√ψ·[n·((N+1)³ + c) + n²·((N+1)² + c) + n³]` with `n = (N+1)² + 1`.
fn ipm_cost(n_elems: f64, psi: f64, extra: f64) -> f64 {
    let d = n_elems + 1.0;
    let n = d * d + 1.0;
    psi.sqrt() * (n * (d.powi(3) + extra) + n * n * (d * d + extra) + n.powi(3))
}

pub fn complexity_estimate(n: usize, k: usize, t_alpha: usize, t_lambda: usize, t_g: usize) -> Result<ComplexityEstimate> {
    if n == 0 || k == 0 || t_alpha == 0 || t_lambda == 0 || t_g == 0 {
        return Err(Error::Domain("complexity inputs must be positive".into()));
    }
    let (nf, kf) = (n as f64, k as f64);
    let d = nf + 1.0;
    let a11 = ipm_cost(nf, 2.0 * nf + kf + 1.0, kf + nf);
    let a12 = ipm_cost(nf, 2.0 * nf + 2.0 * kf + 1.0, 2.0 * kf + nf);
    let a22 = ipm_cost(nf, 2.0 * nf + kf + 4.0, kf + nf + 3.0);
    let grp = d.powi(3) + 8.0 * t_g as f64 * d * d;
    Ok(ComplexityEstimate {
        a1: a11 + t_alpha as f64 * (a12 + grp),
        a2: a11 + a22 + t_lambda as f64 * grp,
        a1_multicast: a11,
        a1_fixed_alpha: a12,
        a2_secrecy: a22,
        grp,
    })
}
