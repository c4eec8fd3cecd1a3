//! Region characterization: the multicast upper bound, the CCT-based and WSCM-based
//! designs, baseline schemes, and the boundary sweep.

mod baselines;
mod bounds;
mod cct;
mod sweep;
mod wscm;

pub use baselines::{baseline_no_irs, baseline_random_irs, baseline_tdma, tdma_point};
pub use bounds::{max_min_gain, multicast_upper_bound, snr_forms, MulticastBound, RegionContext};
pub use cct::{algorithm1_cct, algorithm1_cct_with, cct_fixed_alpha, p10_feasible, upper_bound_at, CctSolution};
pub use sweep::{pareto_filter, rm_grid, sweep_region, sweep_targets};
pub use wscm::{algorithm2_wscm, algorithm2_wscm_with, secrecy_covariance};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::model::{multicast_rate, normalized_gains, qoms_alpha, secrecy_rate_from_snr, PhaseVector, PowerSplit, QOMS_TOL};
use crate::sdp::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Cct,
    Wscm,
    RandomIrs,
    NoIrs,
    Tdma,
    UpperBound,
    Oracle,
}

impl Scheme {
    pub const ALL: [Scheme; 7] =
        [Scheme::Cct, Scheme::Wscm, Scheme::RandomIrs, Scheme::NoIrs, Scheme::Tdma, Scheme::UpperBound, Scheme::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Cct => "cct",
            Scheme::Wscm => "wscm",
            Scheme::RandomIrs => "random-irs",
            Scheme::NoIrs => "no-irs",
            Scheme::Tdma => "tdma",
            Scheme::UpperBound => "upper-bound",
            Scheme::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme `{s}`")))
    }
}

/// Tuning knobs shared by all schemes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmParams {
    pub t_alpha: usize,
    pub t_lambda: usize,
    pub t_g: usize,
    pub solver: SolverConfig,
    pub oracle_phase_levels: usize,
    pub oracle_alpha_points: usize,
    /// Largest `phase_levels^N × alpha_points` the oracle will enumerate.
    pub oracle_cost_limit: u128,
}

impl Default for AlgorithmParams {
    fn default() -> Self {
        AlgorithmParams {
            t_alpha: 80,
            t_lambda: 80,
            t_g: 1000,
            solver: SolverConfig::default(),
            oracle_phase_levels: 64,
            oracle_alpha_points: 201,
            oracle_cost_limit: 1_000_000_000,
        }
    }
}

impl AlgorithmParams {
    pub fn validate(&self) -> Result<()> {
        if self.t_alpha < 2 {
            return Err(Error::Config("t_alpha must be at least 2".into()));
        }
        if self.t_lambda < 2 {
            return Err(Error::Config("t_lambda must be at least 2".into()));
        }
        if self.t_g == 0 {
            return Err(Error::Config("t_g must be positive".into()));
        }
        if self.oracle_phase_levels == 0 || self.oracle_alpha_points < 2 {
            return Err(Error::Config("oracle grids need at least one phase level and two alpha points".into()));
        }
        self.solver.validate()
    }
}

/// One point of an approximated region boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    pub r_m_target: f64,
    pub r_c_achieved: f64,
    pub alpha: f64,
    pub beta: f64,
    pub phase_vector: PhaseVector,
    /// `log2 C(r_m, α)` at the reported `α`, when available.
    pub upper_bound: Option<f64>,
    pub feasible: bool,
    pub scheme: Scheme,
    /// `max_t log2 C(r_m, α_t)` over the α grid (CCT only).
    pub grid_upper_bound: Option<f64>,
    /// Post-hoc relaxation gap `⌈grid_upper_bound − r_c⌉⁺` (CCT only).
    pub delta_c: Option<f64>,
    /// Best secrecy rate evaluated at grid power levels without the closed-form power update.
    pub unrepaired_r_c: Option<f64>,
}

impl BoundaryPoint {
    pub(crate) fn infeasible(r_m: f64, n: usize, p: f64, scheme: Scheme) -> Self {
        BoundaryPoint {
            r_m_target: r_m,
            r_c_achieved: 0.0,
            alpha: 0.0,
            beta: p,
            phase_vector: PhaseVector::ones(n),
            upper_bound: None,
            feasible: false,
            scheme,
            grid_upper_bound: None,
            delta_c: None,
            unrepaired_r_c: None,
        }
    }

    pub(crate) fn achieved(r_m: f64, cand: Candidate, p: f64, scheme: Scheme) -> Self {
        BoundaryPoint {
            r_m_target: r_m,
            r_c_achieved: cand.r_c,
            alpha: cand.alpha,
            beta: p - cand.alpha,
            phase_vector: cand.v,
            upper_bound: None,
            feasible: true,
            scheme,
            grid_upper_bound: None,
            delta_c: None,
            unrepaired_r_c: None,
        }
    }
}

/// A boundary approximation ordered by ascending `r_m_target`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionBoundary {
    pub points: Vec<BoundaryPoint>,
    pub pareto_filtered: bool,
    pub r_m_up: f64,
}

/// A QoMS-certified design.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Candidate {
    pub v: PhaseVector,
    pub alpha: f64,
    pub r_c: f64,
}

/// Largest secrecy rate of `v` subject to the multicast floor, with the closed-form
/// power split; `None` when `v` cannot meet the floor.
pub(crate) fn certify(ch: &ChannelSet, v: &PhaseVector, p: f64, r_m: f64) -> Option<Candidate> {
    let rho = normalized_gains(ch, v);
    let alpha = qoms_alpha(&rho, p, r_m)?;
    Some(Candidate { v: v.clone(), alpha, r_c: secrecy_rate_from_snr(&rho, alpha) })
}

/// GRP score: certified secrecy rate, or −1 when the floor is missed.
pub(crate) fn certified_score(ch: &ChannelSet, v: &PhaseVector, p: f64, r_m: f64) -> f64 {
    let rho = normalized_gains(ch, v);
    match qoms_alpha(&rho, p, r_m) {
        Some(alpha) => secrecy_rate_from_snr(&rho, alpha),
        None => -1.0,
    }
}

pub(crate) fn keep_best(best: &mut Option<Candidate>, cand: Option<Candidate>) {
    if let Some(c) = cand {
        if best.as_ref().is_none_or(|b| c.r_c > b.r_c) {
            *best = Some(c);
        }
    }
}

/// Re-checks that a reported point meets its multicast floor with its own `(v, α)`.
pub fn meets_qoms(ch: &ChannelSet, point: &BoundaryPoint, p: f64) -> bool {
    let split = PowerSplit::tight(point.alpha, p);
    multicast_rate(ch, &point.phase_vector, split) >= point.r_m_target - 10.0 * QOMS_TOL
}

pub(crate) fn require_eavesdropper(ch: &ChannelSet) -> Result<()> {
    if ch.k() < 2 {
        return Err(Error::Domain("at least two users are required".into()));
    }
    Ok(())
}
