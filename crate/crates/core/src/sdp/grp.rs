//! Gaussian randomization: turn a lifted covariance `Z` of size `(N+1)×(N+1)` into a
//! unit-modulus phase vector.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, real_trace, CMatrix, CVector};
use crate::model::PhaseVector;
use crate::rng::{complex_gaussian, StreamRng};

/// Eigenvalues below this fraction of the trace count as zero.
pub const RANK_ONE_THRESHOLD: f64 = 1e-7;

/// Consecutive draws with a vanishing last entry tolerated before giving up.
const MAX_REDRAWS: usize = 64;

/// `v_i = e^{j·arg(z_i / z_{N+1})}`, or `None` when `z_{N+1} = 0`.
fn phases_from_lifted(z: &CVector) -> Option<PhaseVector> {
    let n = z.len() - 1;
    let t = z[n];
    if t.norm() == 0.0 || !t.is_finite() {
        return None;
    }
    let ratio = CVector::from_fn(n, |i, _| z[i] / t);
    Some(PhaseVector::project(&ratio))
}

/// Phase vector from the principal eigenvector of `z_matrix`.
pub fn principal_phase_vector(z_matrix: &CMatrix) -> Option<PhaseVector> {
    let eig = hermitian_eigen(z_matrix);
    phases_from_lifted(&eig.vectors.column(0).into_owned())
}

/// Draws `candidates` vectors `U·Σ^{1/2}·r` with `r ~ CN(0, I)`, maps each to a phase
/// vector, and returns the best under `score` (first wins on ties).
///
/// When `z_matrix` is numerically rank one, its principal eigenvector is used
/// directly. Otherwise the principal eigenvector is scored alongside the random draws.
pub fn grp_round<F>(z_matrix: &CMatrix, candidates: usize, mut score: F, rng: &mut StreamRng) -> Result<(PhaseVector, f64)>
where
    F: FnMut(&PhaseVector) -> f64,
{
    if candidates == 0 {
        return Err(Error::Domain("GRP needs at least one candidate".into()));
    }
    let dim = z_matrix.nrows();
    if dim < 2 || z_matrix.ncols() != dim {
        return Err(Error::Dimension { expected: 2, got: dim });
    }
    let eig = hermitian_eigen(z_matrix);
    let trace = real_trace(z_matrix);
    let principal = phases_from_lifted(&eig.vectors.column(0).into_owned());
    let mut best: Option<(PhaseVector, f64)> = None;
    let mut consider = |v: PhaseVector, best: &mut Option<(PhaseVector, f64)>| {
        let s = score(&v);
        if best.as_ref().is_none_or(|b| s > b.1) {
            *best = Some((v, s));
        }
    };

    let rank_one = eig.values.get(1).is_none_or(|&l2| l2 < RANK_ONE_THRESHOLD * trace.abs());
    if rank_one {
        if let Some(v) = principal {
            consider(v, &mut best);
            return Ok(best.expect("candidate scored"));
        }
    } else if let Some(v) = principal {
        consider(v, &mut best);
    }

    let sqrt_vals: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    for _ in 0..candidates {
        let mut redraws = 0;
        let v = loop {
            let r = CVector::from_fn(dim, |_, _| complex_gaussian(rng));
            let scaled = CVector::from_fn(dim, |i, _| r[i] * sqrt_vals[i]);
            let z: CVector = &eig.vectors * scaled;
            if let Some(v) = phases_from_lifted(&z) {
                break v;
            }
            redraws += 1;
            if redraws > MAX_REDRAWS {
                return Err(Error::Domain("GRP draws have a vanishing last entry; Z has an empty last row".into()));
            }
        };
        consider(v, &mut best);
    }
    Ok(best.expect("at least one candidate scored"))
}
