use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::rng::StreamRng;
use crate::sdp::grp_round;

use super::cct::{cct_fixed_alpha, upper_bound_at};
use super::{certified_score, certify, keep_best, AlgorithmParams, BoundaryPoint, Candidate, RegionContext, Scheme};

pub(crate) fn secrecy_covariance_from(ctx: &RegionContext) -> Result<CMatrix> {
    match cct_fixed_alpha(ctx, 0.0, ctx.p)? {
        Some(sol) => Ok(sol.z),
        None => Err(Error::Solver("secrecy covariance program reported infeasible".into())),
    }
}

/// Unit-diagonal covariance maximizing the relaxed secrecy rate with all power on the
/// confidential message.
pub fn secrecy_covariance(ch: &ChannelSet, p: f64, params: &AlgorithmParams, seed: u64) -> Result<CMatrix> {
    RegionContext::new(ch, p, params, seed)?.secrecy_covariance()
}

/// WSCM-based design: round blends `λ·Z_c + (1 − λ)·Z_m` over a uniform λ grid and
/// pick the best certified point.
pub fn algorithm2_wscm_with(ctx: &RegionContext, r_m: f64, rng: &mut StreamRng) -> Result<BoundaryPoint> {
    let ch = &ctx.ch;
    let p = ctx.p;
    let z_c = ctx.secrecy_covariance()?;
    let z_m = &ctx.multicast.z;
    let t = ctx.params.t_lambda;
    let mut best: Option<Candidate> = None;
    for i in 0..t {
        let lambda = i as f64 / (t - 1) as f64;
        let blend = z_c.map(|z| z * C64::new(lambda, 0.0)) + z_m.map(|z| z * C64::new(1.0 - lambda, 0.0));
        let (v, _) = grp_round(&blend, ctx.params.t_g, |v| certified_score(ch, v, p, r_m), rng)?;
        keep_best(&mut best, certify(ch, &v, p, r_m));
    }
    let Some(cand) = best else {
        return Ok(BoundaryPoint::infeasible(r_m, ch.n(), p, Scheme::Wscm));
    };
    let upper_bound = upper_bound_at(ctx, r_m, cand.alpha);
    let mut point = BoundaryPoint::achieved(r_m, cand, p, Scheme::Wscm);
    point.upper_bound = upper_bound;
    Ok(point)
}

pub fn algorithm2_wscm(
    ch: &ChannelSet,
    p: f64,
    r_m: f64,
    params: &AlgorithmParams,
    seed: u64,
    rng: &mut StreamRng,
) -> Result<BoundaryPoint> {
    let ctx = RegionContext::new(ch, p, params, seed)?;
    algorithm2_wscm_with(&ctx, r_m, rng)
}
