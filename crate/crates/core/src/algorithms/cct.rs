use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, C64};
use crate::model::{normalized_gains, secrecy_rate_from_snr};
use crate::rng::StreamRng;
use crate::sdp::{grp_round, solve, Relation, SdpProblem, SolveStatus};

use super::{certified_score, certify, keep_best, AlgorithmParams, BoundaryPoint, Candidate, RegionContext, Scheme};

/// Relative margin required before a fixed-α program is handed to the solver.
const FEASIBILITY_MARGIN: f64 = 1e-5;

/// Smallest admissible `ξ` (the common diagonal of `Y`).
const MIN_XI: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct CctSolution {
    /// Optimal value `C(r_m, α)`; `log2` of it bounds the secrecy rate at this `α`.
    pub c_value: f64,
    /// Optimal `Y` in noise-normalized units (`σ_1²` times the unnormalized variable).
    pub y: CMatrix,
    pub xi: f64,
    /// `Y / ξ`: unit-diagonal lifted covariance.
    pub z: CMatrix,
}

/// Whether the fixed-α program admits a solution: with `c = P − α·2^r`, some
/// unit-diagonal `Z` must satisfy `c·Tr(Z·T_k/σ_k²) ≥ 2^r − 1` for every eavesdropper.
pub fn p10_feasible(ctx: &RegionContext, r_m: f64, alpha: f64) -> bool {
    feasible_with_margin(ctx, r_m, alpha, FEASIBILITY_MARGIN)
}

fn feasible_with_margin(ctx: &RegionContext, r_m: f64, alpha: f64, margin: f64) -> bool {
    if r_m <= 0.0 {
        return alpha <= ctx.p;
    }
    let two_r = r_m.exp2();
    let slack = ctx.p - alpha * two_r;
    slack > 0.0 && slack * ctx.eve_max_min >= (two_r - 1.0) * (1.0 + margin)
}

fn scaled_identity(dim: usize, s: f64) -> CMatrix {
    CMatrix::identity(dim, dim).map(|z| z * s)
}

fn build_problem(ctx: &RegionContext, r_m: f64, alpha: f64) -> SdpProblem {
    let dim = ctx.forms[0].nrows();
    let base = scaled_identity(dim, 1.0 / dim as f64);
    let objective = &base + ctx.forms[0].map(|z| z * alpha);
    let mut problem = SdpProblem::new(objective, true);
    for f in &ctx.forms[1..] {
        problem.add(&base + f.map(|z| z * alpha), Relation::Le, 1.0);
    }
    if r_m > 0.0 {
        let two_r = r_m.exp2();
        let slack = ctx.p - alpha * two_r;
        for f in &ctx.forms[1..] {
            let m = f.map(|z| z * slack) - scaled_identity(dim, (two_r - 1.0) / dim as f64);
            problem.add(m, Relation::Ge, 0.0);
        }
    }
    for i in 0..dim - 1 {
        let mut tie = CMatrix::zeros(dim, dim);
        tie[(i, i)] = c(1.0, 0.0);
        tie[(dim - 1, dim - 1)] = c(-1.0, 0.0);
        problem.add(tie, Relation::Eq, 0.0);
    }
    problem
}

fn solve_fixed_alpha(ctx: &RegionContext, r_m: f64, alpha: f64) -> Result<Option<CctSolution>> {
    let problem = build_problem(ctx, r_m, alpha);
    let sol = solve(&problem, &ctx.params.solver)?;
    match sol.status {
        SolveStatus::Optimal => {}
        SolveStatus::Infeasible => return Ok(None),
        other => {
            return Err(Error::Solver(format!(
                "fixed-alpha CCT program at alpha={alpha}, r_m={r_m}: {other:?} (gap {:.2e}, residual {:.2e})",
                sol.duality_gap, sol.residuals
            )))
        }
    }
    let dim = problem.dim;
    let xi = sol.matrix[(dim - 1, dim - 1)].re;
    if xi <= MIN_XI {
        return Err(Error::Solver(format!("fixed-alpha CCT program returned xi = {xi:e}")));
    }
    let z = sol.matrix.map(|v| v / C64::new(xi, 0.0));
    Ok(Some(CctSolution { c_value: sol.objective_value, y: sol.matrix, xi, z }))
}

/// Solves the fixed-α Charnes-Cooper relaxation, or returns `None` when the multicast
/// floor cannot be met at this power level.
pub fn cct_fixed_alpha(ctx: &RegionContext, r_m: f64, alpha: f64) -> Result<Option<CctSolution>> {
    if !(0.0..=ctx.p).contains(&alpha) {
        return Err(Error::Domain(format!("alpha {alpha} outside [0, {}]", ctx.p)));
    }
    if !p10_feasible(ctx, r_m, alpha) {
        return Ok(None);
    }
    solve_fixed_alpha(ctx, r_m, alpha)
}

/// Valid upper bound on `log2 C(r_m, α)` at an arbitrary `α`.
///
/// A design meeting the floor exactly leaves the program without an interior, so when
/// the solve at `r_m` fails the floor is lowered in small steps. `C` can only grow as
/// the floor drops, so each relaxed value still bounds `C(r_m, α)`. `None` when no
/// attempt can be certified.
pub fn upper_bound_at(ctx: &RegionContext, r_m: f64, alpha: f64) -> Option<f64> {
    // `eve_max_min` carries solver error, so points exactly on the floor are retried.
    if !feasible_with_margin(ctx, r_m, alpha, -1e-6) {
        return None;
    }
    if feasible_with_margin(ctx, r_m, alpha, 0.0) {
        if let Ok(Some(s)) = solve_fixed_alpha(ctx, r_m, alpha) {
            return Some(s.c_value.log2());
        }
    }
    [1e-7, 1e-6, 1e-5, 1e-4, 1e-3].into_iter().filter(|_| r_m > 0.0).find_map(|delta| {
        let relaxed = (r_m - delta).max(0.0);
        if !p10_feasible(ctx, relaxed, alpha) {
            return None;
        }
        match solve_fixed_alpha(ctx, relaxed, alpha) {
            Ok(Some(s)) => Some(s.c_value.log2()),
            _ => None,
        }
    })
}

/// Grid power levels `α_t = P·(t − 1)/(T_α − 1)`.
pub(crate) fn alpha_grid(p: f64, t_alpha: usize) -> Vec<f64> {
    (0..t_alpha).map(|t| if t + 1 == t_alpha { p } else { p * t as f64 / (t_alpha - 1) as f64 }).collect()
}

/// Generalized CCT-based design at one multicast floor.
///
/// Each grid level with a feasible relaxation yields a covariance that is rounded by
/// GRP. Candidates are scored, and the final point reported, with the closed-form
/// optimal power split for the rounded phases, so the result always meets the floor.
pub fn algorithm1_cct_with(ctx: &RegionContext, r_m: f64, rng: &mut StreamRng) -> Result<BoundaryPoint> {
    let ch = &ctx.ch;
    let p = ctx.p;
    let mut best: Option<Candidate> = None;
    let mut grid_ub: Option<f64> = None;
    let mut unrepaired: Option<f64> = None;
    let mut cached: Vec<(f64, f64)> = Vec::new();

    for alpha in alpha_grid(p, ctx.params.t_alpha) {
        if alpha == 0.0 {
            // C(r_m, 0) = 1: zero secrecy regardless of the covariance.
            if p10_feasible(ctx, r_m, 0.0) {
                grid_ub = Some(grid_ub.map_or(0.0, |g: f64| g.max(0.0)));
                unrepaired = Some(unrepaired.unwrap_or(0.0));
            }
            continue;
        }
        let Some(sol) = cct_fixed_alpha(ctx, r_m, alpha)? else { continue };
        let log_c = sol.c_value.log2();
        cached.push((alpha, log_c));
        grid_ub = Some(grid_ub.map_or(log_c, |g| g.max(log_c)));
        let (v, _) = grp_round(&sol.z, ctx.params.t_g, |v| certified_score(ch, v, p, r_m), rng)?;
        let literal = secrecy_rate_from_snr(&normalized_gains(ch, &v), alpha);
        unrepaired = Some(unrepaired.map_or(literal, |u| u.max(literal)));
        keep_best(&mut best, certify(ch, &v, p, r_m));
    }
    keep_best(&mut best, certify(ch, &ctx.v_multicast, p, r_m));

    let Some(cand) = best else {
        let mut point = BoundaryPoint::infeasible(r_m, ch.n(), p, Scheme::Cct);
        point.grid_upper_bound = grid_ub;
        return Ok(point);
    };
    let exact_ub = cached.iter().find(|(a, _)| *a == cand.alpha).map(|(_, u)| *u);
    let upper_bound = exact_ub.or_else(|| upper_bound_at(ctx, r_m, cand.alpha));
    let r_c = cand.r_c;
    let mut point = BoundaryPoint::achieved(r_m, cand, p, Scheme::Cct);
    point.upper_bound = upper_bound;
    point.grid_upper_bound = grid_ub;
    point.delta_c = grid_ub.map(|g| (g - r_c).max(0.0));
    point.unrepaired_r_c = unrepaired;
    Ok(point)
}

/// Convenience wrapper that builds the per-channel context first.
pub fn algorithm1_cct(
    ch: &ChannelSet,
    p: f64,
    r_m: f64,
    params: &AlgorithmParams,
    seed: u64,
    rng: &mut StreamRng,
) -> Result<BoundaryPoint> {
    let ctx = RegionContext::new(ch, p, params, seed)?;
    algorithm1_cct_with(&ctx, r_m, rng)
}
