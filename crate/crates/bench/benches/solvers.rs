use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use irsi_core::algorithms::{algorithm1_cct_with, algorithm2_wscm_with, AlgorithmParams, RegionContext};
use irsi_core::analysis::brute_force_oracle;
use irsi_core::linalg::{c, CMatrix};
use irsi_core::rng::{complex_gaussian, stream, substream};
use irsi_core::sdp::{grp_round, solve, Relation, SdpProblem, SolverConfig};
use irsi_core::{generate_channels, ChannelSet, ScenarioConfig};

fn two_user(n_y: usize, n_z: usize) -> ChannelSet {
    let cfg = ScenarioConfig::two_user(20.0, n_y, n_z, 10.0, 1);
    generate_channels(&cfg, &mut stream(1)).unwrap()
}

fn random_hermitian(n: usize, seed: u64) -> CMatrix {
    let mut rng = stream(seed);
    let a = CMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng));
    (&a + a.adjoint()).map(|z| z * 0.5)
}

fn sdp(c_: &mut Criterion) {
    let n = 12;
    let mut problem = SdpProblem::new(random_hermitian(n, 3), true);
    for d in 0..n {
        let mut e = CMatrix::zeros(n, n);
        e[(d, d)] = c(1.0, 0.0);
        problem.add(e, Relation::Eq, 1.0);
    }
    let cfg = SolverConfig::default();
    c_.bench_function("sdp_unit_diagonal_n12", |b| b.iter(|| solve(black_box(&problem), &cfg).unwrap()));
}

fn grp(c_: &mut Criterion) {
    let a = random_hermitian(11, 4);
    let z = &a * a.adjoint();
    c_.bench_function("grp_1000_draws_n10", |b| {
        b.iter(|| grp_round(black_box(&z), 1000, |v| v.phases()[0].cos(), &mut stream(5)).unwrap())
    });
}

fn algorithms(c_: &mut Criterion) {
    let ch = two_user(5, 2);
    let params = AlgorithmParams { t_alpha: 20, t_lambda: 20, ..AlgorithmParams::default() };
    let ctx = RegionContext::new(&ch, 1.0, &params, 1).unwrap();
    let r_m = 0.5 * ctx.r_m_up();
    let mut group = c_.benchmark_group("boundary_point_n10");
    group.sample_size(10);
    group.bench_function("cct_t_alpha_20", |b| b.iter(|| algorithm1_cct_with(&ctx, black_box(r_m), &mut substream(1, 0)).unwrap()));
    group.bench_function("wscm_t_lambda_20", |b| b.iter(|| algorithm2_wscm_with(&ctx, black_box(r_m), &mut substream(1, 0)).unwrap()));
    group.finish();
}

fn oracle(c_: &mut Criterion) {
    let ch = two_user(2, 1);
    let mut group = c_.benchmark_group("oracle_n2");
    group.sample_size(10);
    group.bench_function("64_levels_201_alphas", |b| b.iter(|| brute_force_oracle(&ch, 1.0, black_box(0.5), 64, 201, u128::MAX).unwrap()));
    group.finish();
}

criterion_group!(benches, sdp, grp, algorithms, oracle);
criterion_main!(benches);
