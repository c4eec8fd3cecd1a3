//! Rate expressions, lifted quadratic forms, feasibility tests, and the closed-form
//! power split.
//!
//! Rates are in bits. A user's effective gain under phase vector `v` is
//! `x_k = |m_kᴴ·diag(v*)·g + h_k|²`; lifting `z = [v; 1]` turns it into `zᴴ·T_k·z`.

use serde::{Deserialize, Serialize};

use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::linalg::{cis, outer, CMatrix, CVector, C64};

/// Tolerance on `|v_i| = 1`.
pub const UNIT_MODULUS_TOL: f64 = 1e-9;

/// Unit-modulus IRS reflection vector `v`; the reflection matrix is `diag(v*)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector(CVector);

impl PhaseVector {
    pub fn new(entries: CVector) -> Result<Self> {
        if let Some((i, z)) = entries.iter().enumerate().find(|(_, z)| (z.norm() - 1.0).abs() > UNIT_MODULUS_TOL) {
            return Err(Error::Domain(format!("entry {i} has modulus {} (must be 1)", z.norm())));
        }
        Ok(PhaseVector(entries))
    }

    /// Projects each entry onto the unit circle; zero entries map to phase 0.
    pub fn project(entries: &CVector) -> Self {
        PhaseVector(entries.map(|z| if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) }))
    }

    pub fn from_phases(phases: &[f64]) -> Self {
        PhaseVector(CVector::from_iterator(phases.len(), phases.iter().map(|&t| cis(t))))
    }

    pub fn ones(n: usize) -> Self {
        PhaseVector(CVector::from_element(n, C64::new(1.0, 0.0)))
    }

    pub fn phases(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.arg()).collect()
    }

    pub fn as_vector(&self) -> &CVector {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplies every entry by `exp(j·theta)`.
    pub fn rotated(&self, theta: f64) -> Self {
        PhaseVector(self.0.map(|z| z * cis(theta)))
    }

    /// Lifted vector `z = [v; 1]`.
    pub fn lifted(&self) -> CVector {
        let n = self.0.len();
        CVector::from_fn(n + 1, |i, _| if i < n { self.0[i] } else { C64::new(1.0, 0.0) })
    }
}

/// Rank-one Hermitian `T_k = u_k·u_kᴴ` with `u_k = [diag(m_k*)·g; h_k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    pub matrix: CMatrix,
    pub user_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    /// Confidential-message power (W).
    pub alpha: f64,
    /// Multicast-message power (W).
    pub beta: f64,
}

impl PowerSplit {
    pub fn new(alpha: f64, beta: f64, total: f64) -> Result<Self> {
        if alpha < 0.0 || beta < 0.0 || alpha + beta > total + 1e-9 {
            return Err(Error::Domain(format!("invalid split alpha={alpha}, beta={beta}, P={total}")));
        }
        Ok(PowerSplit { alpha, beta })
    }

    /// Full budget with `alpha` on the confidential message.
    pub fn tight(alpha: f64, total: f64) -> Self {
        let alpha = alpha.clamp(0.0, total);
        PowerSplit { alpha, beta: total - alpha }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r_m: f64,
    pub r_c: f64,
}

#[inline]
pub fn positive_part(x: f64) -> f64 {
    x.max(0.0)
}

/// The vector `u` with `T = u·uᴴ`.
pub fn lift_vector(m_k: &CVector, g: &CVector, h_k: C64) -> Result<CVector> {
    if m_k.len() != g.len() {
        return Err(Error::Dimension { expected: g.len(), got: m_k.len() });
    }
    let n = g.len();
    Ok(CVector::from_fn(n + 1, |i, _| if i < n { m_k[i].conj() * g[i] } else { h_k }))
}

pub fn build_tk(m_k: &CVector, g: &CVector, h_k: C64) -> Result<QuadraticForm> {
    Ok(QuadraticForm { matrix: outer(&lift_vector(m_k, g, h_k)?), user_index: 0 })
}

/// `T_k` for every user of `ch`, in user order.
pub fn lifted_forms(ch: &ChannelSet) -> Vec<QuadraticForm> {
    (0..ch.k())
        .map(|k| {
            let mut q = build_tk(&ch.m[k], &ch.g, ch.h[k]).expect("ChannelSet lengths are validated");
            q.user_index = k;
            q
        })
        .collect()
}

/// `|m_kᴴ·diag(v*)·g + h_k|²`.
pub fn effective_gain(v: &PhaseVector, m_k: &CVector, g: &CVector, h_k: C64) -> f64 {
    let reflected: C64 = v.0.iter().zip(m_k.iter()).zip(g.iter()).map(|((vi, mi), gi)| (mi * vi).conj() * gi).sum();
    (reflected + h_k).norm_sqr()
}

/// Effective gain of every user.
pub fn gains(ch: &ChannelSet, v: &PhaseVector) -> Vec<f64> {
    (0..ch.k()).map(|k| effective_gain(v, &ch.m[k], &ch.g, ch.h[k])).collect()
}

/// Effective SNR per unit transmit power, `x_k / σ_k²`.
pub fn normalized_gains(ch: &ChannelSet, v: &PhaseVector) -> Vec<f64> {
    gains(ch, v).iter().zip(&ch.sigma2).map(|(x, s)| x / s).collect()
}

/// Multicast rate from per-user normalized gains `ρ_k = x_k/σ_k²`.
pub fn multicast_rate_from_snr(rho: &[f64], split: PowerSplit) -> f64 {
    rho.iter()
        .map(|&r| (1.0 + split.beta * r / (1.0 + split.alpha * r)).log2())
        .fold(f64::INFINITY, f64::min)
}

/// Secrecy rate from normalized gains; `rho[0]` is the confidential user.
pub fn secrecy_rate_from_snr(rho: &[f64], alpha: f64) -> f64 {
    let legit = 1.0 + alpha * rho[0];
    let worst_eve = rho[1..].iter().fold(f64::NEG_INFINITY, |acc, &r| acc.max(r));
    positive_part((legit / (1.0 + alpha * worst_eve)).log2())
}

pub fn multicast_rate(ch: &ChannelSet, v: &PhaseVector, split: PowerSplit) -> f64 {
    multicast_rate_from_snr(&normalized_gains(ch, v), split)
}

pub fn secrecy_rate(ch: &ChannelSet, v: &PhaseVector, alpha: f64) -> f64 {
    secrecy_rate_from_snr(&normalized_gains(ch, v), alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Feasibility {
    Feasible,
    /// `user` is the (zero-based) eavesdropper that dominates user 0 for every `v`.
    Infeasible { user: usize },
    Undetermined,
}

/// Sum of reflected-path magnitudes `Σ_i |m_k(i)|·|g(i)|`.
fn aligned_reflection(ch: &ChannelSet, k: usize) -> f64 {
    ch.m[k].iter().zip(ch.g.iter()).map(|(m, g)| m.norm() * g.norm()).sum()
}

/// Certificate-based test of whether user 0 can out-gain every eavesdropper.
///
/// `Feasible` when phase-aligning to user 0 provably keeps its normalized gain at or
/// above every user's best case. `Infeasible` when user 0's best case cannot exceed
/// an eavesdropper's worst case, bounded below by `(|h_k| − Σ|m_k||g|)⁺²`. Otherwise
/// `Undetermined`.
pub fn feasibility_check(ch: &ChannelSet) -> Feasibility {
    let best = |k: usize| (aligned_reflection(ch, k) + ch.h[k].norm()).powi(2);
    let best_user0 = best(0);
    let s0 = ch.sigma2[0];
    let dominated = (0..ch.k()).map(|k| s0 / ch.sigma2[k] * best(k)).fold(0.0, f64::max);
    if best_user0 >= dominated {
        return Feasibility::Feasible;
    }
    for k in 1..ch.k() {
        let worst = positive_part(ch.h[k].norm() - aligned_reflection(ch, k)).powi(2);
        if best_user0 <= s0 * worst / ch.sigma2[k] {
            return Feasibility::Infeasible { user: k };
        }
    }
    Feasibility::Undetermined
}

/// `x_1/σ_1² > max_{k≥2} x_k/σ_k²`.
pub fn positive_secrecy_condition(ch: &ChannelSet, v: &PhaseVector) -> bool {
    let rho = normalized_gains(ch, v);
    rho[1..].iter().all(|&r| rho[0] > r)
}

/// Largest confidential power meeting the bottleneck user's multicast floor:
/// `⌈min{P, (P·x − (2^r − 1)·σ²)/(2^r·x)}⌉⁺`.
pub fn alpha_opt_closed_form(x_min: f64, sigma2_min: f64, p: f64, r_m: f64) -> f64 {
    if r_m <= 0.0 {
        return p;
    }
    if x_min <= 0.0 {
        return 0.0;
    }
    let two_r = r_m.exp2();
    positive_part(p.min((p * x_min - (two_r - 1.0) * sigma2_min) / (two_r * x_min)))
}

/// Index of the user with the smallest `x_k/σ_k²`.
pub fn bottleneck_user(rho: &[f64]) -> usize {
    rho.iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &r)| if r < bv { (i, r) } else { (bi, bv) })
        .0
}

/// Absolute slack allowed on the multicast floor when certifying a point.
pub const QOMS_TOL: f64 = 1e-9;

/// Optimal confidential power for fixed normalized gains under multicast floor `r_m`,
/// or `None` when even `β = P` misses the floor.
pub fn qoms_alpha(rho: &[f64], p: f64, r_m: f64) -> Option<f64> {
    let tau = bottleneck_user(rho);
    if (1.0 + p * rho[tau]).log2() < r_m - QOMS_TOL {
        return None;
    }
    Some(alpha_opt_closed_form(rho[tau], 1.0, p, r_m))
}
