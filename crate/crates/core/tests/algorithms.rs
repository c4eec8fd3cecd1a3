use std::f64::consts::TAU;

use irsi_core::algorithms::*;
use irsi_core::linalg::{c, CVector, C64};
use irsi_core::model::{
    multicast_rate, multicast_rate_from_snr, normalized_gains, qoms_alpha, secrecy_rate, secrecy_rate_from_snr, PowerSplit,
};
use irsi_core::rng::{complex_gaussian, stream, StreamRng};
use irsi_core::sdp::grp_round;
use irsi_core::{ChannelSet, PhaseVector};

fn random_channels(n: usize, k: usize, rng: &mut StreamRng) -> ChannelSet {
    let g = CVector::from_fn(n, |_, _| complex_gaussian(rng));
    let m = (0..k).map(|_| CVector::from_fn(n, |_, _| complex_gaussian(rng) * 0.6)).collect();
    let h = (0..k).map(|i| complex_gaussian(rng) * if i == 0 { 2.0 } else { 1.0 }).collect();
    ChannelSet::new(g, m, h, vec![1.0; k]).unwrap()
}

fn params() -> AlgorithmParams {
    AlgorithmParams { t_alpha: 20, t_lambda: 20, t_g: 200, ..Default::default() }
}

fn phase_grid(levels: usize) -> impl Iterator<Item = PhaseVector> {
    let step = TAU / levels as f64;
    (0..levels * levels).map(move |i| PhaseVector::from_phases(&[step * (i / levels) as f64, step * (i % levels) as f64]))
}

fn inert(h: &[f64]) -> ChannelSet {
    let k = h.len();
    ChannelSet::new(
        CVector::from_element(2, c(1.0, 0.0)),
        vec![CVector::zeros(2); k],
        h.iter().map(|&x| c(x, 0.0)).collect(),
        vec![1.0; k],
    )
    .unwrap()
}

#[test]
fn multicast_bound_without_reflection_is_exact() {
    let ch = inert(&[1.5, 1.5]);
    let b = multicast_upper_bound(&ch, 2.0, &Default::default()).unwrap();
    assert!((b.r_m_up - (1.0f64 + 2.0 * 2.25).log2()).abs() < 1e-7);
}

#[test]
fn multicast_bound_of_identical_users_equals_single_user_value() {
    let mut rng = stream(21);
    let mut ch = random_channels(3, 2, &mut rng);
    ch.m[1] = ch.m[0].clone();
    ch.h[1] = ch.h[0];
    let pair = multicast_upper_bound(&ch, 1.0, &Default::default()).unwrap();
    let (single, _) = max_min_gain(&snr_forms(&ch)[..1], &Default::default()).unwrap();
    assert!((pair.r_m_up - (1.0 + single).log2()).abs() < 1e-7);
}

#[test]
fn multicast_bound_dominates_phase_grid() {
    let mut rng = stream(22);
    for _ in 0..5 {
        let ch = random_channels(2, 2, &mut rng);
        let b = multicast_upper_bound(&ch, 1.0, &Default::default()).unwrap();
        let best = phase_grid(64)
            .map(|v| multicast_rate(&ch, &v, PowerSplit::tight(0.0, 1.0)))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(b.r_m_up >= best - 1e-7, "{} < {best}", b.r_m_up);
    }
}

#[test]
fn fixed_alpha_relaxation_special_values() {
    let mut rng = stream(23);
    let ch = random_channels(2, 2, &mut rng);
    let ctx = RegionContext::new(&ch, 1.0, &params(), 1).unwrap();
    let zero = cct_fixed_alpha(&ctx, 0.5, 0.0).unwrap().unwrap();
    assert!((zero.c_value - 1.0).abs() < 1e-7);

    let mut twin = ch.clone();
    twin.m[1] = twin.m[0].clone();
    twin.h[1] = twin.h[0];
    let ctx = RegionContext::new(&twin, 1.0, &params(), 1).unwrap();
    for alpha in [0.2, 0.7, 1.0] {
        let s = cct_fixed_alpha(&ctx, 0.0, alpha).unwrap().unwrap();
        assert!((s.c_value - 1.0).abs() < 1e-7);
        assert!((0..3).all(|i| (s.z[(i, i)].re - 1.0).abs() < 1e-6));
    }
    assert!(cct_fixed_alpha(&ctx, 0.0, 1.5).is_err());
}

#[test]
fn relaxation_dominates_phase_grid_at_fixed_alpha() {
    let mut rng = stream(24);
    for trial in 0..4 {
        let ch = random_channels(2, 2, &mut rng);
        let ctx = RegionContext::new(&ch, 1.0, &params(), trial).unwrap();
        let r_m = 0.4 * ctx.r_m_up();
        for alpha in [0.1, 0.3, 0.5] {
            let Some(sol) = cct_fixed_alpha(&ctx, r_m, alpha).unwrap() else { continue };
            let bound = sol.c_value.log2();
            for v in phase_grid(64) {
                let rho = normalized_gains(&ch, &v);
                if multicast_rate_from_snr(&rho, PowerSplit::tight(alpha, 1.0)) >= r_m {
                    assert!(secrecy_rate_from_snr(&rho, alpha) <= bound + 1e-6);
                }
            }
        }
    }
}

#[test]
fn algorithm1_endpoints() {
    let mut rng = stream(25);
    let ch = random_channels(2, 2, &mut rng);
    let ctx = RegionContext::new(&ch, 1.0, &params(), 3).unwrap();
    let start = algorithm1_cct_with(&ctx, 0.0, &mut stream(1)).unwrap();
    assert!(start.feasible);
    assert_eq!(start.alpha, 1.0);
    assert!(start.r_c_achieved <= start.upper_bound.unwrap() + 1e-6);

    // Two users and N = 2 make the multicast relaxation rank-one tight.
    assert!(ctx.r_m_max >= ctx.r_m_up() - 1e-6);
    let end = algorithm1_cct_with(&ctx, ctx.r_m_up(), &mut stream(1)).unwrap();
    if end.feasible {
        assert!(end.r_c_achieved < 1e-4);
        assert!(end.alpha < 1e-4);
    }
}

#[test]
fn algorithm1_outputs_meet_the_floor() {
    let mut rng = stream(26);
    for trial in 0..3 {
        let ch = random_channels(3, 3, &mut rng);
        let ctx = RegionContext::new(&ch, 1.0, &params(), trial).unwrap();
        for r_m in rm_grid(ctx.r_m_up(), 5) {
            let p = algorithm1_cct_with(&ctx, r_m, &mut stream(trial)).unwrap();
            if p.feasible {
                assert!(meets_qoms(&ch, &p, 1.0));
                assert!((p.r_c_achieved - secrecy_rate(&ch, &p.phase_vector, p.alpha)).abs() < 1e-12);
                assert!(p.alpha + p.beta <= 1.0 + 1e-12);
                if let Some(ub) = p.upper_bound {
                    assert!(p.r_c_achieved <= ub + 1e-6);
                }
            }
        }
    }
}

#[test]
fn secrecy_covariance_special_cases() {
    let ch = inert(&[2.0, 1.0]);
    let z = secrecy_covariance(&ch, 1.0, &params(), 0).unwrap();
    assert!((0..3).all(|i| (z[(i, i)].re - 1.0).abs() < 1e-6));

    // A silent second user leaves plain gain maximization for user 0.
    let mut rng = stream(27);
    let mut ch = random_channels(3, 2, &mut rng);
    ch.m[1] = CVector::zeros(3);
    ch.h[1] = C64::new(0.0, 0.0);
    let z = secrecy_covariance(&ch, 1.0, &params(), 0).unwrap();
    let (v, _) = grp_round(&z, 100, |v| normalized_gains(&ch, v)[0], &mut stream(2)).unwrap();
    let aligned = irsi_core::analysis::instances::aligned_phases(&ch.m[0], &ch.g, ch.h[0]);
    for (a, b) in v.as_vector().iter().zip(aligned.as_vector().iter()) {
        assert!((a - b).norm() < 1e-4);
    }
}

#[test]
fn secrecy_covariance_bound_dominates_grid_at_n3() {
    let mut rng = stream(28);
    let ch = random_channels(3, 2, &mut rng);
    let ctx = RegionContext::new(&ch, 1.0, &params(), 0).unwrap();
    let sol = cct_fixed_alpha(&ctx, 0.0, 1.0).unwrap().unwrap();
    let levels = 24;
    let step = TAU / levels as f64;
    let mut best = 0.0f64;
    for i in 0..levels * levels * levels {
        let ph = [step * (i / (levels * levels)) as f64, step * ((i / levels) % levels) as f64, step * (i % levels) as f64];
        best = best.max(secrecy_rate(&ch, &PhaseVector::from_phases(&ph), 1.0));
    }
    assert!(sol.c_value.log2() >= best - 1e-7);
}

#[test]
fn wscm_basics() {
    let mut rng = stream(29);
    let ch = random_channels(2, 2, &mut rng);
    let prm = AlgorithmParams { t_lambda: 2, ..params() };
    let ctx = RegionContext::new(&ch, 1.0, &prm, 4).unwrap();
    let a = algorithm2_wscm_with(&ctx, 0.5, &mut stream(9)).unwrap();
    let b = algorithm2_wscm_with(&ctx, 0.5, &mut stream(9)).unwrap();
    assert_eq!(a, b);
    let start = algorithm2_wscm_with(&ctx, 0.0, &mut stream(9)).unwrap();
    assert_eq!(start.alpha, 1.0);

    let ctx = RegionContext::new(&ch, 1.0, &params(), 4).unwrap();
    for r_m in rm_grid(ctx.r_m_up(), 4) {
        let w = algorithm2_wscm_with(&ctx, r_m, &mut stream(5)).unwrap();
        let c1 = algorithm1_cct_with(&ctx, r_m, &mut stream(5)).unwrap();
        assert!(w.r_c_achieved >= c1.r_c_achieved - 0.1);
        if w.feasible {
            assert!(meets_qoms(&ch, &w, 1.0));
        }
    }
}

#[test]
fn sweep_grid_and_filter() {
    let mut rng = stream(30);
    let ch = random_channels(3, 2, &mut rng);
    let ctx = RegionContext::new(&ch, 1.0, &params(), 5).unwrap();
    let two = sweep_region(&ctx, Scheme::Cct, 2, false, 5).unwrap();
    assert_eq!(two.points.len(), 2);
    assert_eq!(two.points[0].r_m_target, 0.0);
    assert_eq!(two.points[1].r_m_target, ctx.r_m_up());

    let curve = sweep_region(&ctx, Scheme::Cct, 20, true, 5).unwrap();
    assert!(curve.pareto_filtered);
    for w in curve.points.windows(2) {
        assert!(w[1].r_c_achieved <= w[0].r_c_achieved);
        assert!(w[0].r_m_target < w[1].r_m_target);
    }
    assert!(curve.points.iter().filter(|p| p.feasible).all(|p| meets_qoms(&ch, p, 1.0)));
}

#[test]
fn tdma_is_a_segment() {
    let mut rng = stream(31);
    let ch = random_channels(2, 2, &mut rng);
    let ctx = RegionContext::new(&ch, 1.0, &params(), 6).unwrap();
    let region = sweep_region(&ctx, Scheme::Tdma, 6, false, 6).unwrap();
    let top = region.points[0].r_c_achieved;
    for p in &region.points {
        if p.r_m_target <= ctx.r_m_max {
            let share = 1.0 - p.r_m_target / ctx.r_m_max;
            assert!((p.r_c_achieved - share * top).abs() < 1e-12);
        } else {
            assert!(!p.feasible);
        }
    }
    let secrecy = algorithm1_cct_with(&ctx, 0.0, &mut stream(0)).unwrap();
    let end = tdma_point(ctx.r_m_max, ctx.r_m_max, &secrecy, 1.0);
    assert_eq!(end.r_c_achieved, 0.0);
}

#[test]
fn baselines() {
    let ch = inert(&[2.0, 1.0]);
    let a = baseline_random_irs(&ch, 1.0, 0.5, &mut stream(3)).unwrap();
    let b = baseline_no_irs(&ch, 1.0, 0.5).unwrap();
    assert_eq!(a.r_c_achieved, b.r_c_achieved);
    assert_eq!(a.alpha, b.alpha);

    let mut rng = stream(32);
    let ch = random_channels(4, 3, &mut rng);
    let x = baseline_random_irs(&ch, 1.0, 0.3, &mut stream(8)).unwrap();
    let y = baseline_random_irs(&ch, 1.0, 0.3, &mut stream(8)).unwrap();
    assert_eq!(x, y);

    // Bottleneck gain 2 at unit noise, floor 1 bit: α = (2 − 1)/(2·2) = 0.25.
    let ch = ChannelSet::new(
        CVector::from_element(1, c(1.0, 0.0)),
        vec![CVector::zeros(1); 2],
        vec![c(3.0, 0.0), c(2f64.sqrt(), 0.0)],
        vec![1.0, 1.0],
    )
    .unwrap();
    let p = baseline_no_irs(&ch, 1.0, 1.0).unwrap();
    assert!((p.alpha - 0.25).abs() < 1e-12);
    let mut best = 0.0f64;
    for i in 0..=100_000 {
        let alpha = i as f64 / 100_000.0;
        let rho = [9.0, 2.0];
        if multicast_rate_from_snr(&rho, PowerSplit::tight(alpha, 1.0)) >= 1.0 - 1e-12 {
            best = best.max(secrecy_rate_from_snr(&rho, alpha));
        }
    }
    assert!((p.r_c_achieved - best).abs() < 1e-4);
    assert_eq!(baseline_no_irs(&ch, 1.0, 0.0).unwrap().alpha, 1.0);
    assert_eq!(baseline_no_irs(&inert(&[1.0, 2.0]), 1.0, 0.0).unwrap().r_c_achieved, 0.0);
}

#[test]
fn scores_ignore_global_rotation_of_the_lifted_vector() {
    let mut rng = stream(33);
    let ch = random_channels(3, 2, &mut rng);
    let v = PhaseVector::from_phases(&[0.3, -1.0, 2.2]);
    let theta = 1.234;
    let lifted = v.lifted().map(|z| z * C64::from_polar(1.0, theta));
    let n = v.len();
    let recovered = PhaseVector::project(&CVector::from_fn(n, |i, _| lifted[i] / lifted[n]));
    let rho_a = normalized_gains(&ch, &v);
    let rho_b = normalized_gains(&ch, &recovered);
    for r_m in [0.01, 0.1, 0.5] {
        let (a, b) = (qoms_alpha(&rho_a, 1.0, r_m), qoms_alpha(&rho_b, 1.0, r_m));
        assert_eq!(a.is_some(), b.is_some());
        assert!(a.zip(b).is_none_or(|(a, b)| (a - b).abs() < 1e-12));
    }
    assert!((secrecy_rate(&ch, &v, 0.7) - secrecy_rate(&ch, &recovered, 0.7)).abs() < 1e-12);
}

#[test]
fn scheme_names_round_trip() {
    for s in Scheme::ALL {
        assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
    }
    assert!("cvx".parse::<Scheme>().is_err());
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let mut rng = stream(34);
    let ch = random_channels(3, 3, &mut rng);
    let ctx = RegionContext::new(&ch, 1.0, &params(), 7).unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| sweep_region(&ctx, Scheme::Wscm, 6, true, 7)).unwrap();
    let b = four.install(|| sweep_region(&ctx, Scheme::Wscm, 6, true, 7)).unwrap();
    assert_eq!(a, b);
}
