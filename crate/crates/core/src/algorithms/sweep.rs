use rayon::prelude::*;

use crate::analysis::brute_force_oracle;
use crate::error::{Error, Result};
use crate::model::PhaseVector;
use crate::rng::substream;
use crate::sdp::principal_phase_vector;

use super::baselines::{baseline_no_irs, baseline_random_irs, tdma_point};
use super::cct::{algorithm1_cct_with, alpha_grid, cct_fixed_alpha};
use super::wscm::algorithm2_wscm_with;
use super::{BoundaryPoint, RegionBoundary, RegionContext, Scheme};

/// `grid_points` targets uniform on `[0, r_m_up]`, both endpoints included.
pub fn rm_grid(r_m_up: f64, grid_points: usize) -> Vec<f64> {
    let g = grid_points.max(2);
    (0..g).map(|i| if i + 1 == g { r_m_up } else { r_m_up * i as f64 / (g - 1) as f64 }).collect()
}

/// Replaces each point by the best feasible point at the same or a larger multicast
/// floor. A design meeting a larger floor meets every smaller one, so the result stays
/// certified and becomes non-increasing in `r_m`.
pub fn pareto_filter(points: &mut [BoundaryPoint]) {
    let mut best: Option<BoundaryPoint> = None;
    for point in points.iter_mut().rev() {
        if point.feasible && best.as_ref().is_none_or(|b| point.r_c_achieved >= b.r_c_achieved) {
            best = Some(point.clone());
        } else if let Some(b) = &best {
            let r_m = point.r_m_target;
            *point = BoundaryPoint { r_m_target: r_m, ..b.clone() };
        }
    }
}

/// Largest `α` at which the fixed-α relaxation is feasible with margin, or `None`.
fn largest_feasible_alpha(ctx: &RegionContext, r_m: f64) -> Option<f64> {
    if r_m <= 0.0 {
        return Some(ctx.p);
    }
    let two_r = r_m.exp2();
    if ctx.eve_max_min <= 0.0 {
        return None;
    }
    let hi = (ctx.p - (two_r - 1.0) * (1.0 + 2e-5) / ctx.eve_max_min) / two_r;
    (hi >= 0.0).then(|| hi.min(ctx.p))
}

/// Relaxation value maximized over `T_α` power levels spanning the feasible interval.
fn upper_bound_point(ctx: &RegionContext, r_m: f64) -> Result<BoundaryPoint> {
    let mut best: Option<(f64, f64, PhaseVector)> = None;
    let Some(alpha_hi) = largest_feasible_alpha(ctx, r_m) else {
        return Ok(BoundaryPoint::infeasible(r_m, ctx.ch.n(), ctx.p, Scheme::UpperBound));
    };
    for alpha in alpha_grid(alpha_hi, ctx.params.t_alpha) {
        if alpha == 0.0 {
            if best.is_none() {
                best = Some((0.0, 0.0, PhaseVector::ones(ctx.ch.n())));
            }
            continue;
        }
        let Some(sol) = cct_fixed_alpha(ctx, r_m, alpha)? else { continue };
        let ub = sol.c_value.log2();
        if best.as_ref().is_none_or(|b| ub > b.0) {
            let v = principal_phase_vector(&sol.z).unwrap_or_else(|| PhaseVector::ones(ctx.ch.n()));
            best = Some((ub, alpha, v));
        }
    }
    Ok(match best {
        Some((ub, alpha, v)) => BoundaryPoint {
            r_m_target: r_m,
            r_c_achieved: ub.max(0.0),
            alpha,
            beta: ctx.p - alpha,
            phase_vector: v,
            upper_bound: Some(ub),
            feasible: true,
            scheme: Scheme::UpperBound,
            grid_upper_bound: Some(ub),
            delta_c: None,
            unrepaired_r_c: None,
        },
        None => BoundaryPoint::infeasible(r_m, ctx.ch.n(), ctx.p, Scheme::UpperBound),
    })
}

fn oracle_point(ctx: &RegionContext, r_m: f64) -> Result<BoundaryPoint> {
    let prm = &ctx.params;
    let res = brute_force_oracle(&ctx.ch, ctx.p, r_m, prm.oracle_phase_levels, prm.oracle_alpha_points, prm.oracle_cost_limit)?;
    if !res.feasible {
        return Ok(BoundaryPoint::infeasible(r_m, ctx.ch.n(), ctx.p, Scheme::Oracle));
    }
    Ok(BoundaryPoint {
        r_m_target: r_m,
        r_c_achieved: res.r_c,
        alpha: res.alpha,
        beta: ctx.p - res.alpha,
        phase_vector: res.v,
        upper_bound: None,
        feasible: true,
        scheme: Scheme::Oracle,
        grid_upper_bound: None,
        delta_c: None,
        unrepaired_r_c: None,
    })
}

/// Evaluates `scheme` on `grid_points` multicast floors uniform on `[0, r_m_up]`.
pub fn sweep_region(
    ctx: &RegionContext,
    scheme: Scheme,
    grid_points: usize,
    pareto: bool,
    seed: u64,
) -> Result<RegionBoundary> {
    sweep_targets(ctx, scheme, &rm_grid(ctx.r_m_up(), grid_points), pareto, seed)
}

/// Evaluates `scheme` at the given multicast floors, which must be ascending.
///
/// Target `i` draws from the substream `(seed, i)`, so results do not depend on the
/// number of worker threads.
pub fn sweep_targets(
    ctx: &RegionContext,
    scheme: Scheme,
    targets: &[f64],
    pareto: bool,
    seed: u64,
) -> Result<RegionBoundary> {
    if targets.windows(2).any(|w| !(w[0] <= w[1])) || targets.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::Domain("multicast targets must be finite, non-negative and ascending".into()));
    }
    let points = if scheme == Scheme::Tdma {
        let secrecy = algorithm1_cct_with(ctx, 0.0, &mut substream(seed, 0))?;
        targets.iter().map(|&r| tdma_point(r, ctx.r_m_max, &secrecy, ctx.p)).collect()
    } else {
        targets
            .par_iter()
            .enumerate()
            .map(|(i, &r_m)| {
                let mut rng = substream(seed, i as u64);
                match scheme {
                    Scheme::Cct => algorithm1_cct_with(ctx, r_m, &mut rng),
                    Scheme::Wscm => algorithm2_wscm_with(ctx, r_m, &mut rng),
                    Scheme::RandomIrs => baseline_random_irs(&ctx.ch, ctx.p, r_m, &mut rng),
                    Scheme::NoIrs => baseline_no_irs(&ctx.ch, ctx.p, r_m),
                    Scheme::UpperBound => upper_bound_point(ctx, r_m),
                    Scheme::Oracle => oracle_point(ctx, r_m),
                    Scheme::Tdma => unreachable!("handled above"),
                }
            })
            .collect::<Result<Vec<_>>>()?
    };
    let mut boundary = RegionBoundary { points, pareto_filtered: false, r_m_up: ctx.r_m_up() };
    if pareto {
        pareto_filter(&mut boundary.points);
        boundary.pareto_filtered = true;
    }
    Ok(boundary)
}
