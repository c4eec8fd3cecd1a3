//! Randomized constructors for instances with a known analytical verdict, used by
//! tests and by the CLI's example scenarios.

use rand::Rng;

use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::linalg::{c, CVector, C64};
use crate::model::PhaseVector;
use crate::rng::{complex_gaussian, StreamRng};

use super::enhancement::{proposition3_classify, Classification};

const MAX_ATTEMPTS: usize = 100_000;

fn reflection_sum(m: &CVector, g: &CVector) -> f64 {
    m.iter().zip(g.iter()).map(|(m, g)| m.norm() * g.norm()).sum()
}

fn random_vector(n: usize, scale: f64, rng: &mut StreamRng) -> CVector {
    CVector::from_fn(n, |_, _| complex_gaussian(rng) * scale)
}

/// Phases making every reflected term `conj(m_i v_i)·g_i` co-phased with `h`.
pub fn aligned_phases(m: &CVector, g: &CVector, h: C64) -> PhaseVector {
    let target = h.arg();
    let phases: Vec<f64> = m.iter().zip(g.iter()).map(|(m, g)| g.arg() - m.arg() - target).collect();
    PhaseVector::from_phases(&phases)
}

/// `K`-user instance whose phase-aligned best case for user 0 beats the best case of
/// every other user by a factor of at least `1/0.81`.
pub fn phase_aligned_feasible(n: usize, k: usize, rng: &mut StreamRng) -> Result<ChannelSet> {
    if n == 0 || k < 2 {
        return Err(Error::Domain("need N ≥ 1 and K ≥ 2".into()));
    }
    let g = random_vector(n, 1.0, rng);
    let mut m: Vec<CVector> = (0..k).map(|_| random_vector(n, 1.0, rng)).collect();
    let mut h: Vec<C64> = (0..k).map(|_| complex_gaussian(rng)).collect();
    let best = |m: &CVector, h: C64| reflection_sum(m, &g) + h.norm();
    let best0 = best(&m[0], h[0]);
    for u in 1..k {
        let s = 0.9 * best0 / best(&m[u], h[u]);
        if s < 1.0 {
            m[u] *= c(s, 0.0);
            h[u] *= s;
        }
    }
    ChannelSet::new(g, m, h, vec![1.0; k])
}

/// `K`-user instance where a random eavesdropper's direct link alone overwhelms user 0
/// for every phase configuration.
pub fn h_dominated_infeasible(n: usize, k: usize, rng: &mut StreamRng) -> Result<(ChannelSet, usize)> {
    if n == 0 || k < 2 {
        return Err(Error::Domain("need N ≥ 1 and K ≥ 2".into()));
    }
    let g = random_vector(n, 1.0, rng);
    let m: Vec<CVector> = (0..k).map(|_| random_vector(n, 1.0, rng)).collect();
    let mut h: Vec<C64> = (0..k).map(|_| complex_gaussian(rng)).collect();
    let eve = 1 + rng.random_range(0..k - 1);
    let best0 = reflection_sum(&m[0], &g) + h[0].norm();
    let needed = reflection_sum(&m[eve], &g) + 1.1 * best0;
    h[eve] = C64::from_polar(needed, h[eve].arg());
    Ok((ChannelSet::new(g, m, h, vec![1.0; k])?, eve))
}

/// Two-user instance plus phase vector classified as `Improves`.
///
/// Draws random channels with user 0 the stronger direct link and aligns the IRS to
/// user 0, rejecting draws until the classification holds.
pub fn improves_instance(n: usize, rng: &mut StreamRng) -> Result<(ChannelSet, PhaseVector)> {
    two_user_with(n, Classification::Improves, rng)
}

/// Two-user instance plus phase vector classified as `Impairs`.
///
/// The IRS is anti-aligned to user 0 and rejection keeps draws with the classification.
pub fn impairs_instance(n: usize, rng: &mut StreamRng) -> Result<(ChannelSet, PhaseVector)> {
    two_user_with(n, Classification::Impairs, rng)
}

fn two_user_with(n: usize, want: Classification, rng: &mut StreamRng) -> Result<(ChannelSet, PhaseVector)> {
    if n == 0 {
        return Err(Error::Domain("need N ≥ 1".into()));
    }
    for _ in 0..MAX_ATTEMPTS {
        let g = random_vector(n, 1.0, rng);
        let m = vec![random_vector(n, 0.5, rng), random_vector(n, 0.5, rng)];
        let h = vec![complex_gaussian(rng) * 2.0, complex_gaussian(rng)];
        let ch = ChannelSet::new(g, m, h, vec![1.0, 1.0])?;
        let aligned = aligned_phases(&ch.m[0], &ch.g, ch.h[0]);
        let v = match want {
            Classification::Impairs => aligned.rotated(std::f64::consts::PI),
            _ => aligned,
        };
        if matches!(proposition3_classify(&ch, &v), Ok(cls) if cls == want) {
            return Ok((ch, v));
        }
    }
    Err(Error::Solver(format!("no {want:?} instance found in {MAX_ATTEMPTS} draws")))
}
