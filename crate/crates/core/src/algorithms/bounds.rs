use std::sync::OnceLock;

use crate::channel::ChannelSet;
use crate::error::Result;
use crate::linalg::{c, real_trace, CMatrix};
use crate::model::{lifted_forms, normalized_gains, PhaseVector};
use crate::rng::substream;
use crate::sdp::{grp_round, solve_optimal, Relation, SdpProblem, SolverConfig};

use super::{require_eavesdropper, AlgorithmParams};

/// `T_k / σ_k²` for every user.
pub fn snr_forms(ch: &ChannelSet) -> Vec<CMatrix> {
    lifted_forms(ch).into_iter().zip(&ch.sigma2).map(|(q, s)| q.matrix.map(|z| z / *s)).collect()
}

fn unit_diagonal(problem: &mut SdpProblem, dim: usize) {
    for i in 0..dim {
        let mut e = CMatrix::zeros(dim, dim);
        e[(i, i)] = c(1.0, 0.0);
        problem.add(e, Relation::Eq, 1.0);
    }
}

/// `max_Z min_k Tr(Z·F_k)` over unit-diagonal PSD `Z`, returned with the optimal `Z`.
pub fn max_min_gain(forms: &[CMatrix], solver: &SolverConfig) -> Result<(f64, CMatrix)> {
    let dim = forms[0].nrows();
    let scale = forms.iter().map(real_trace).fold(0.0_f64, f64::max);
    if scale <= 0.0 {
        return Ok((0.0, CMatrix::identity(dim, dim)));
    }
    let mut problem = SdpProblem::new(CMatrix::zeros(dim, dim), true).with_scalars(vec![1.0]);
    for f in forms {
        problem.add_with_scalars(f.map(|z| z / scale), vec![(0, -1.0)], Relation::Ge, 0.0);
    }
    unit_diagonal(&mut problem, dim);
    let sol = solve_optimal(&problem, solver)?;
    Ok((sol.scalars[0].max(0.0) * scale, sol.matrix))
}

#[derive(Debug, Clone)]
pub struct MulticastBound {
    /// `log2(1 + P·u*)` with `u* = max_Z min_k Tr(Z·T_k/σ_k²)`.
    pub r_m_up: f64,
    pub z: CMatrix,
}

/// Multicast-rate upper bound of the relaxed problem and its optimal lifted covariance.
pub fn multicast_upper_bound(ch: &ChannelSet, p: f64, solver: &SolverConfig) -> Result<MulticastBound> {
    let (u, z) = max_min_gain(&snr_forms(ch), solver)?;
    Ok(MulticastBound { r_m_up: (1.0 + p * u).log2(), z })
}

/// Stream index reserved for context-level randomization.
const CONTEXT_STREAM: u64 = 1 << 40;

/// Per-channel quantities shared by every boundary point of a sweep.
#[derive(Debug)]
pub struct RegionContext {
    pub ch: ChannelSet,
    pub p: f64,
    pub forms: Vec<CMatrix>,
    pub multicast: MulticastBound,
    /// `max_Z min_{k≥1} Tr(Z·T_k/σ_k²)`: decides feasibility of the fixed-α CCT program.
    pub eve_max_min: f64,
    /// Best multicast design found by rounding the multicast covariance.
    pub v_multicast: PhaseVector,
    /// `log2(1 + P·min_k ρ_k)` of `v_multicast`: an achievable multicast rate.
    pub r_m_max: f64,
    pub params: AlgorithmParams,
    secrecy_cov: OnceLock<Result<CMatrix>>,
}

impl RegionContext {
    pub fn new(ch: &ChannelSet, p: f64, params: &AlgorithmParams, seed: u64) -> Result<Self> {
        require_eavesdropper(ch)?;
        params.validate()?;
        let forms = snr_forms(ch);
        let (u, z) = max_min_gain(&forms, &params.solver)?;
        let multicast = MulticastBound { r_m_up: (1.0 + p * u).log2(), z };
        let (eve_max_min, _) = max_min_gain(&forms[1..], &params.solver)?;
        let mut rng = substream(seed, CONTEXT_STREAM);
        let min_gain = |v: &PhaseVector| normalized_gains(ch, v).into_iter().fold(f64::INFINITY, f64::min);
        let (v_multicast, best) = grp_round(&multicast.z, params.t_g, min_gain, &mut rng)?;
        Ok(RegionContext {
            ch: ch.clone(),
            p,
            forms,
            r_m_max: (1.0 + p * best).log2(),
            multicast,
            eve_max_min,
            v_multicast,
            params: *params,
            secrecy_cov: OnceLock::new(),
        })
    }

    pub fn r_m_up(&self) -> f64 {
        self.multicast.r_m_up
    }

    /// Secrecy covariance `Z_c`, computed on first use.
    pub fn secrecy_covariance(&self) -> Result<CMatrix> {
        self.secrecy_cov.get_or_init(|| super::wscm::secrecy_covariance_from(self)).clone()
    }
}
