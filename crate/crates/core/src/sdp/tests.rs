use super::*;
use crate::linalg::{c, hermitian_eigen, outer, real_trace, CVector};
use crate::rng::{complex_gaussian, stream, StreamRng};
use rand::Rng;

fn random_hermitian(n: usize, rng: &mut StreamRng) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    (&a + a.adjoint()).scale(0.5)
}

fn random_pd(n: usize, rng: &mut StreamRng) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    &a * a.adjoint() + CMatrix::identity(n, n).scale(0.5)
}

fn tight() -> SolverConfig {
    SolverConfig { tolerance: 1e-10, ..SolverConfig::default() }
}

#[test]
fn scalar_equality() {
    let mut p = SdpProblem::new(CMatrix::identity(1, 1), true);
    p.add(CMatrix::identity(1, 1).scale(2.0), Relation::Eq, 1.0);
    let s = solve(&p, &tight()).unwrap();
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.objective_value - 0.5).abs() < 1e-9);
    assert!((s.matrix[(0, 0)].re - 0.5).abs() < 1e-9);
}

#[test]
fn largest_eigenvalue_program() {
    let obj = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0, 0.0), c(1.0, 0.0)]));
    let mut p = SdpProblem::new(obj, true);
    p.add(CMatrix::identity(2, 2), Relation::Eq, 1.0);
    let s = solve(&p, &tight()).unwrap();
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.objective_value - 2.0).abs() < 1e-9);
    assert!((s.matrix[(0, 0)].re - 1.0).abs() < 1e-6);

    let mut rng = stream(4);
    for n in [3, 5, 8] {
        let h = random_hermitian(n, &mut rng);
        let mut p = SdpProblem::new(h.clone(), true);
        p.add(CMatrix::identity(n, n), Relation::Eq, 1.0);
        let s = solve(&p, &tight()).unwrap();
        assert!((s.objective_value - hermitian_eigen(&h).values[0]).abs() < 1e-9, "n={n}");
    }
}

/// Upper bound from the Lagrangian dual of
/// `max Tr(C X) s.t. Tr X = t, Tr(A_k X) ≤ b_k`: for any `y ≥ 0`,
/// `t·λ_max(C − Σ y_k A_k) + Σ y_k b_k` bounds the optimum from above.
fn dual_bound(cm: &CMatrix, t: f64, ineq: &[(CMatrix, f64)], y: &[f64]) -> f64 {
    let mut m = cm.clone();
    let mut acc = 0.0;
    for ((a, b), &yk) in ineq.iter().zip(y) {
        let yk = yk.max(0.0);
        m -= a.scale(yk);
        acc += yk * b;
    }
    t * hermitian_eigen(&m).values[0] + acc
}

#[test]
fn inequality_instance_matches_duality_certificate() {
    let mut rng = stream(17);
    for trial in 0..10 {
        let n = 4;
        let cm = random_hermitian(n, &mut rng);
        let x0 = CMatrix::identity(n, n).scale(0.25);
        let ineq: Vec<(CMatrix, f64)> = (0..3)
            .map(|_| {
                let a = random_hermitian(n, &mut rng);
                let b = trace_product(&a, &x0) + rng.random::<f64>() * 0.2 + 0.01;
                (a, b)
            })
            .collect();
        let mut p = SdpProblem::new(cm.clone(), true);
        p.add(CMatrix::identity(n, n), Relation::Eq, 1.0);
        for (a, b) in &ineq {
            p.add(a.clone(), Relation::Le, *b);
        }
        let s = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal, "trial {trial}");

        // Independent primal check: feasibility of the returned X.
        assert!(min_eigenvalue(&s.matrix) > -1e-9);
        assert!((real_trace(&s.matrix) - 1.0).abs() < 1e-8);
        for (a, b) in &ineq {
            assert!(trace_product(a, &s.matrix) <= b + 1e-8);
        }
        let lower = trace_product(&cm, &s.matrix);
        // Dual certificate: multipliers are checked only through the bound they imply.
        let y = &s.dual[1..];
        assert!(y.iter().all(|v| *v >= -1e-9), "multipliers of ≤ rows must be nonnegative: {y:?}");
        let upper = dual_bound(&cm, 1.0, &ineq, y);
        assert!(upper >= lower - 1e-9, "trial {trial}: {upper} < {lower}");
        assert!(upper - lower < 1e-6, "trial {trial}: certificate gap {}", upper - lower);
        assert!((s.objective_value - lower).abs() < 1e-12);

        // Random feasible points never beat the reported optimum.
        for _ in 0..200 {
            let w = random_pd(n, &mut rng);
            let w = w.scale(1.0 / real_trace(&w));
            if ineq.iter().all(|(a, b)| trace_product(a, &w) <= *b) {
                assert!(trace_product(&cm, &w) <= s.objective_value + 1e-7);
            }
        }
    }
}

#[test]
fn scalar_variables_and_ge_constraints() {
    // max t s.t. Tr(X T_k) − t ≥ 0, diag(X) = 1: the max-min gain program.
    let mut rng = stream(2);
    let n = 3;
    let us: Vec<CVector> = (0..2).map(|_| CVector::from_fn(n, |_, _| complex_gaussian(&mut rng))).collect();
    let mut p = SdpProblem::new(CMatrix::zeros(n, n), true).with_scalars(vec![1.0]);
    for u in &us {
        p.add_with_scalars(outer(u), vec![(0, -1.0)], Relation::Ge, 0.0);
    }
    for i in 0..n {
        let mut e = CMatrix::zeros(n, n);
        e[(i, i)] = c(1.0, 0.0);
        p.add(e, Relation::Eq, 1.0);
    }
    let s = solve(&p, &SolverConfig::default()).unwrap();
    assert_eq!(s.status, SolveStatus::Optimal);
    let t = s.scalars[0];
    for u in &us {
        assert!(trace_product(&outer(u), &s.matrix) >= t - 1e-6);
    }
    // No rank-one point beats the relaxation.
    for _ in 0..2000 {
        let v = CVector::from_fn(n, |_, _| crate::linalg::cis(crate::rng::uniform_phase(&mut rng)));
        let worst = us.iter().map(|u| (u.adjoint() * &v)[(0, 0)].norm_sqr()).fold(f64::INFINITY, f64::min);
        assert!(worst <= t + 1e-6);
    }
}

#[test]
fn detects_infeasible() {
    let mut p = SdpProblem::new(CMatrix::identity(2, 2), true);
    p.add(CMatrix::identity(2, 2), Relation::Eq, -1.0);
    let s = solve(&p, &SolverConfig::default()).unwrap();
    assert_eq!(s.status, SolveStatus::Infeasible);
}

#[test]
fn detects_unbounded() {
    let mut p = SdpProblem::new(CMatrix::identity(2, 2), true);
    let mut e = CMatrix::zeros(2, 2);
    e[(0, 0)] = c(1.0, 0.0);
    p.add(e, Relation::Eq, 1.0);
    let s = solve(&p, &SolverConfig::default()).unwrap();
    assert_eq!(s.status, SolveStatus::Unbounded);
}

#[test]
fn max_iterations_is_never_optimal() {
    let mut rng = stream(9);
    let h = random_hermitian(5, &mut rng);
    let mut p = SdpProblem::new(h, true);
    p.add(CMatrix::identity(5, 5), Relation::Eq, 1.0);
    let s = solve(&p, &SolverConfig { max_iterations: 2, ..SolverConfig::default() }).unwrap();
    assert_eq!(s.status, SolveStatus::MaxIterations);
    assert!(solve_optimal(&p, &SolverConfig { max_iterations: 2, ..SolverConfig::default() }).is_err());
}

#[test]
fn rejects_malformed() {
    let mut p = SdpProblem::new(CMatrix::identity(2, 2), true);
    p.add(CMatrix::identity(3, 3), Relation::Eq, 1.0);
    assert!(matches!(solve(&p, &SolverConfig::default()), Err(Error::Dimension { .. })));
    let mut bad = CMatrix::identity(2, 2);
    bad[(0, 1)] = c(1.0, 0.0);
    let p = SdpProblem::new(bad, true);
    assert!(matches!(solve(&p, &SolverConfig::default()), Err(Error::Domain(_))));
}

#[test]
fn rounded_score_below_relaxation() {
    // Single-user gain maximization: rounding cannot exceed the SDR value.
    let mut rng = stream(21);
    let n = 4;
    let u = CVector::from_fn(n + 1, |_, _| complex_gaussian(&mut rng));
    let t = outer(&u);
    let mut p = SdpProblem::new(t.clone(), true);
    for i in 0..=n {
        let mut e = CMatrix::zeros(n + 1, n + 1);
        e[(i, i)] = c(1.0, 0.0);
        p.add(e, Relation::Eq, 1.0);
    }
    let s = solve_optimal(&p, &SolverConfig::default()).unwrap();
    let score = |v: &crate::model::PhaseVector| {
        let z = v.lifted();
        trace_product(&outer(&z), &t)
    };
    let (_, best) = grp_round(&s.matrix, 200, score, &mut rng).unwrap();
    assert!(best <= s.objective_value + 1e-7);
    // Phase alignment attains the bound for a single rank-one form.
    let aligned = u.iter().map(|z| z.norm()).sum::<f64>().powi(2);
    assert!((s.objective_value - aligned).abs() < 1e-6 * aligned);
    assert!((best - aligned).abs() < 1e-6 * aligned);
}
