use rayon::prelude::*;

use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::model::{multicast_rate_from_snr, normalized_gains, secrecy_rate_from_snr, PhaseVector, PowerSplit, QOMS_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub r_c: f64,
    pub v: PhaseVector,
    pub alpha: f64,
    /// Whether any grid pair met the multicast floor.
    pub feasible: bool,
}

fn grid_cost(levels: usize, n: usize, alpha_points: usize) -> Option<u128> {
    let mut cost = alpha_points as u128;
    for _ in 0..n {
        cost = cost.checked_mul(levels as u128)?;
    }
    Some(cost)
}

/// Phase index `idx` in mixed radix `levels`, element 0 most significant.
fn phases_at(idx: u128, n: usize, levels: usize, offset: f64) -> Vec<f64> {
    let step = std::f64::consts::TAU / levels as f64;
    let mut rest = idx;
    let mut digits = vec![0usize; n];
    for d in digits.iter_mut().rev() {
        *d = (rest % levels as u128) as usize;
        rest /= levels as u128;
    }
    digits.into_iter().map(|d| offset + step * d as f64).collect()
}

/// Exhaustive search over `levels` uniform phases per element and `alpha_points`
/// uniform power levels on `[0, P]`.
pub fn brute_force_oracle(
    ch: &ChannelSet,
    p: f64,
    r_m: f64,
    levels: usize,
    alpha_points: usize,
    cost_limit: u128,
) -> Result<OracleResult> {
    brute_force_oracle_with_offset(ch, p, r_m, levels, alpha_points, cost_limit, 0.0)
}

/// [`brute_force_oracle`] with every grid phase shifted by `offset` radians.
///
/// Ties are broken towards the smallest `(phase index, α index)`, so the result does
/// not depend on how the enumeration is split across threads.
pub fn brute_force_oracle_with_offset(
    ch: &ChannelSet,
    p: f64,
    r_m: f64,
    levels: usize,
    alpha_points: usize,
    cost_limit: u128,
    offset: f64,
) -> Result<OracleResult> {
    if levels == 0 || alpha_points < 2 {
        return Err(Error::Domain("oracle needs at least one phase level and two alpha points".into()));
    }
    if ch.k() < 2 {
        return Err(Error::Domain("at least two users are required".into()));
    }
    let n = ch.n();
    let cost = grid_cost(levels, n, alpha_points).unwrap_or(u128::MAX);
    if cost > cost_limit {
        return Err(Error::Resource { cost, limit: cost_limit });
    }
    let phase_count = cost / alpha_points as u128;
    let alphas: Vec<f64> =
        (0..alpha_points).map(|j| if j + 1 == alpha_points { p } else { p * j as f64 / (alpha_points - 1) as f64 }).collect();

    let evaluate = |idx: u128| -> Option<(f64, u128, usize)> {
        let v = PhaseVector::from_phases(&phases_at(idx, n, levels, offset));
        let rho = normalized_gains(ch, &v);
        let mut best: Option<(f64, u128, usize)> = None;
        for (j, &alpha) in alphas.iter().enumerate() {
            let split = PowerSplit::tight(alpha, p);
            if multicast_rate_from_snr(&rho, split) < r_m - QOMS_TOL {
                continue;
            }
            let r = secrecy_rate_from_snr(&rho, alpha);
            if best.is_none_or(|b| r > b.0) {
                best = Some((r, idx, j));
            }
        }
        best
    };
    let better = |a: (f64, u128, usize), b: (f64, u128, usize)| {
        if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
            b
        } else {
            a
        }
    };
    let best = (0..phase_count as u64)
        .into_par_iter()
        .filter_map(|i| evaluate(i as u128))
        .reduce_with(better);

    Ok(match best {
        Some((r_c, idx, j)) => OracleResult {
            r_c,
            v: PhaseVector::from_phases(&phases_at(idx, n, levels, offset)),
            alpha: alphas[j],
            feasible: true,
        },
        None => OracleResult { r_c: 0.0, v: PhaseVector::ones(n), alpha: 0.0, feasible: false },
    })
}
