use crate::channel::ChannelSet;
use crate::error::Result;
use crate::model::PhaseVector;
use crate::rng::{uniform_phase, StreamRng};

use super::cct::algorithm1_cct_with;
use super::sweep::rm_grid;
use super::{certify, require_eavesdropper, BoundaryPoint, RegionBoundary, RegionContext, Scheme};

/// I.i.d. uniform phases with the closed-form power split.
pub fn baseline_random_irs(ch: &ChannelSet, p: f64, r_m: f64, rng: &mut StreamRng) -> Result<BoundaryPoint> {
    require_eavesdropper(ch)?;
    let phases: Vec<f64> = (0..ch.n()).map(|_| uniform_phase(rng)).collect();
    let v = PhaseVector::from_phases(&phases);
    Ok(match certify(ch, &v, p, r_m) {
        Some(c) => BoundaryPoint::achieved(r_m, c, p, Scheme::RandomIrs),
        None => BoundaryPoint::infeasible(r_m, ch.n(), p, Scheme::RandomIrs),
    })
}

/// Direct links only. The reported phase vector is irrelevant and set to all ones.
pub fn baseline_no_irs(ch: &ChannelSet, p: f64, r_m: f64) -> Result<BoundaryPoint> {
    require_eavesdropper(ch)?;
    let direct = ch.without_irs();
    let v = PhaseVector::ones(ch.n());
    Ok(match certify(&direct, &v, p, r_m) {
        Some(c) => BoundaryPoint::achieved(r_m, c, p, Scheme::NoIrs),
        None => BoundaryPoint::infeasible(r_m, ch.n(), p, Scheme::NoIrs),
    })
}

/// Time sharing between the secrecy-optimal point `(0, r_c_max)` and the multicast
/// point `(r_m_max, 0)`. The reported `(v, α)` are those of the secrecy point, with
/// `α` scaled by its time fraction.
pub fn tdma_point(r_m: f64, r_m_max: f64, secrecy: &BoundaryPoint, p: f64) -> BoundaryPoint {
    let n = secrecy.phase_vector.len();
    if r_m_max <= 0.0 || r_m > r_m_max * (1.0 + 1e-12) || !secrecy.feasible {
        return BoundaryPoint::infeasible(r_m, n, p, Scheme::Tdma);
    }
    let share = (1.0 - r_m / r_m_max).clamp(0.0, 1.0);
    let alpha = share * secrecy.alpha;
    BoundaryPoint {
        r_m_target: r_m,
        r_c_achieved: share * secrecy.r_c_achieved,
        alpha,
        beta: p - alpha,
        phase_vector: secrecy.phase_vector.clone(),
        upper_bound: None,
        feasible: true,
        scheme: Scheme::Tdma,
        grid_upper_bound: None,
        delta_c: None,
        unrepaired_r_c: None,
    }
}

/// TDMA region sampled on the uniform `r_m` grid over `[0, r_m_up]`.
pub fn baseline_tdma(ctx: &RegionContext, grid_points: usize, rng: &mut StreamRng) -> Result<RegionBoundary> {
    let secrecy = algorithm1_cct_with(ctx, 0.0, rng)?;
    let points = rm_grid(ctx.r_m_up(), grid_points)
        .into_iter()
        .map(|r| tdma_point(r, ctx.r_m_max, &secrecy, ctx.p))
        .collect();
    Ok(RegionBoundary { points, pareto_filtered: false, r_m_up: ctx.r_m_up() })
}
