//! Infeasible primal-dual path-following method for
//!
//! ```text
//! min <C, X> + c_lᵀ x_l   s.t.  <A_i, X> + a_iᵀ x_l = b_i,  X ⪰ 0,  x_l ≥ 0
//! ```
//!
//! with the HKM search direction and Mehrotra predictor-corrector steps.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::SolverConfig;

pub(crate) enum RowMatrix {
    /// Ordered entries `(r, c, v)`: the matrix is `Σ v·e_r·e_cᵀ` (symmetric as a whole).
    Pairs(Vec<(usize, usize, f64)>),
    Dense(DMatrix<f64>),
}

pub(crate) struct Row {
    pub psd: RowMatrix,
    pub lp: Vec<(usize, f64)>,
}

impl Row {
    pub fn scale(&mut self, f: f64) {
        match &mut self.psd {
            RowMatrix::Pairs(p) => p.iter_mut().for_each(|e| e.2 *= f),
            RowMatrix::Dense(m) => *m *= f,
        }
        self.lp.iter_mut().for_each(|e| e.1 *= f);
    }

    fn inner(&self, k: &DMatrix<f64>) -> f64 {
        match &self.psd {
            RowMatrix::Pairs(p) => p.iter().map(|&(r, c, v)| v * k[(r, c)]).sum(),
            RowMatrix::Dense(m) => m.dot(k),
        }
    }

    fn lp_inner(&self, x: &DVector<f64>) -> f64 {
        self.lp.iter().map(|&(j, v)| v * x[j]).sum()
    }

    fn add_to(&self, y: f64, target: &mut DMatrix<f64>) {
        match &self.psd {
            RowMatrix::Pairs(p) => p.iter().for_each(|&(r, c, v)| target[(r, c)] += y * v),
            RowMatrix::Dense(m) => *target += m * y,
        }
    }
}

pub(crate) struct RealProblem {
    pub n: usize,
    pub nl: usize,
    pub c: DMatrix<f64>,
    pub cl: DVector<f64>,
    pub rows: Vec<Row>,
    pub b: DVector<f64>,
    /// Constant in the relative-gap denominator; matches the caller's gap measure when
    /// the objective has been rescaled.
    pub gap_floor: f64,
}

impl RealProblem {
    fn apply(&self, x: &DMatrix<f64>, xl: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.rows.len(), self.rows.iter().map(|r| r.inner(x) + r.lp_inner(xl)))
    }

    fn adjoint(&self, y: &DVector<f64>) -> (DMatrix<f64>, DVector<f64>) {
        let mut s = DMatrix::zeros(self.n, self.n);
        let mut sl = DVector::zeros(self.nl);
        for (row, &yi) in self.rows.iter().zip(y.iter()) {
            row.add_to(yi, &mut s);
            for &(j, v) in &row.lp {
                sl[j] += yi * v;
            }
        }
        (s, sl)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CoreStatus {
    Converged,
    PrimalInfeasible,
    DualInfeasible,
    Stalled,
    MaxIterations,
}

pub(crate) struct CoreResult {
    pub x: DMatrix<f64>,
    pub xl: DVector<f64>,
    pub y: DVector<f64>,
    pub status: CoreStatus,
    pub iterations: usize,
    pub dual_infeasibility: f64,
}

/// Threshold for the scaled Farkas-ray tests.
const INFEASIBILITY_TOL: f64 = 1e-8;

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Largest `t` with `X + t·dX ⪰ 0`, given the Cholesky factor of `X`.
fn max_step_psd(chol: &Cholesky<f64, Dyn>, dx: &DMatrix<f64>) -> f64 {
    let l = chol.l();
    let Some(linv) = l.clone().solve_lower_triangular(&DMatrix::identity(l.nrows(), l.nrows())) else {
        return 0.0;
    };
    let m = symmetrize(&(&linv * dx * linv.transpose()));
    let lmin = m.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
    if lmin < 0.0 {
        -1.0 / lmin
    } else {
        f64::INFINITY
    }
}

fn max_step_lp(x: &DVector<f64>, dx: &DVector<f64>) -> f64 {
    x.iter().zip(dx.iter()).filter(|(_, d)| **d < 0.0).map(|(x, d)| -x / d).fold(f64::INFINITY, f64::min)
}

/// `Tr(A_i·X·A_j·S⁻¹)` for two rows in entry form.
fn pair_pair(pi: &[(usize, usize, f64)], pj: &[(usize, usize, f64)], x: &DMatrix<f64>, sinv: &DMatrix<f64>) -> f64 {
    let mut acc = 0.0;
    for &(a, b, v) in pi {
        for &(c, d, w) in pj {
            acc += v * w * x[(a, c)] * sinv[(d, b)];
        }
    }
    acc
}

/// Schur complement `M_ij = <A_i, X·A_j·S⁻¹> + Σ_l a_il·(x_l/s_l)·a_jl`.
fn schur(p: &RealProblem, x: &DMatrix<f64>, sinv: &DMatrix<f64>, d: &DVector<f64>) -> DMatrix<f64> {
    let m = p.rows.len();
    let mut out = DMatrix::zeros(m, m);
    let dense: Vec<usize> = (0..m).filter(|&i| matches!(p.rows[i].psd, RowMatrix::Dense(_))).collect();
    let mut done = vec![false; m];
    for &j in &dense {
        let RowMatrix::Dense(aj) = &p.rows[j].psd else { unreachable!() };
        let g = x * aj * sinv;
        for i in 0..m {
            if done[i] {
                continue;
            }
            let v = p.rows[i].inner(&g);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
        done[j] = true;
    }
    for i in 0..m {
        let RowMatrix::Pairs(pi) = &p.rows[i].psd else { continue };
        for j in i..m {
            let RowMatrix::Pairs(pj) = &p.rows[j].psd else { continue };
            let v = pair_pair(pi, pj, x, sinv);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    if p.nl > 0 {
        for i in 0..m {
            for j in i..m {
                let mut acc = 0.0;
                for &(li, vi) in &p.rows[i].lp {
                    for &(lj, vj) in &p.rows[j].lp {
                        if li == lj {
                            acc += vi * vj * d[li];
                        }
                    }
                }
                out[(i, j)] += acc;
                if i != j {
                    out[(j, i)] += acc;
                }
            }
        }
    }
    symmetrize(&out)
}

/// Cholesky of `M`, adding a growing diagonal shift if needed.
fn factor(m: &DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    if let Some(c) = Cholesky::new(m.clone()) {
        return Some(c);
    }
    let scale = m.diagonal().iter().cloned().fold(0.0_f64, f64::max).max(1e-300);
    let mut shift = 1e-14 * scale;
    for _ in 0..12 {
        let shifted = m + DMatrix::identity(m.nrows(), m.nrows()) * shift;
        if let Some(c) = Cholesky::new(shifted) {
            return Some(c);
        }
        shift *= 10.0;
    }
    None
}

type BestIterate = (f64, DMatrix<f64>, DVector<f64>, DVector<f64>, f64);

struct Iterate {
    x: DMatrix<f64>,
    xl: DVector<f64>,
    y: DVector<f64>,
    s: DMatrix<f64>,
    sl: DVector<f64>,
}

struct Direction {
    dx: DMatrix<f64>,
    dxl: DVector<f64>,
    dy: DVector<f64>,
    ds: DMatrix<f64>,
    dsl: DVector<f64>,
}

struct Residuals {
    rp: DVector<f64>,
    rd: DMatrix<f64>,
    rdl: DVector<f64>,
}

#[allow(clippy::too_many_arguments)]
fn direction(
    p: &RealProblem,
    it: &Iterate,
    sinv: &DMatrix<f64>,
    res: &Residuals,
    chol_m: &Cholesky<f64, Dyn>,
    target: f64,
    corr: Option<(&DMatrix<f64>, &DVector<f64>)>,
) -> Direction {
    // ΔX = K' − X·ΔS·S⁻¹ with K' = target·S⁻¹ − X − (ΔXa·ΔSa)·S⁻¹.
    let mut kp = sinv * target - &it.x;
    let mut kl_base = DVector::from_fn(p.nl, |j, _| (target - it.xl[j] * it.sl[j]) / it.sl[j]);
    if let Some((cx, cl)) = corr {
        kp -= cx * sinv;
        for j in 0..p.nl {
            kl_base[j] -= cl[j] / it.sl[j];
        }
    }
    let k = &kp - &it.x * &res.rd * sinv;
    let d = it.xl.component_div(&it.sl);
    let kl = &kl_base - d.component_mul(&res.rdl);
    let rhs = DVector::from_iterator(
        p.rows.len(),
        p.rows.iter().enumerate().map(|(i, r)| res.rp[i] - r.inner(&k) - r.lp_inner(&kl)),
    );
    let dy = chol_m.solve(&rhs);
    let (ady, adyl) = p.adjoint(&dy);
    let ds = &res.rd - ady;
    let dsl = &res.rdl - adyl;
    let dx = symmetrize(&(kp - &it.x * &ds * sinv));
    let dxl = kl_base - d.component_mul(&dsl);
    Direction { dx, dxl, dy, ds, dsl }
}

fn inner_lp(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    if a.is_empty() {
        0.0
    } else {
        a.dot(b)
    }
}

pub(crate) fn solve_real(p: &RealProblem, cfg: &SolverConfig) -> CoreResult {
    let n = p.n;
    let nl = p.nl;
    let m = p.rows.len();
    let nu = (n + nl) as f64;
    let tol_inner = cfg.tolerance * 0.05;
    let norm_b = p.b.norm();
    let norm_c = (p.c.norm_squared() + p.cl.norm_squared()).sqrt();

    let bmax = p.b.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let xi = 10f64.max((n as f64).sqrt()).max(n as f64 * (1.0 + bmax) / 2.0);
    let eta = 10f64.max((n as f64).sqrt()).max(1.0 + norm_c);
    let mut it = Iterate {
        x: DMatrix::identity(n, n) * xi,
        xl: DVector::from_element(nl, xi),
        y: DVector::zeros(m),
        s: DMatrix::identity(n, n) * eta,
        sl: DVector::from_element(nl, eta),
    };

    // (merit, x, xl, y, dinf) of the best iterate seen so far.
    let mut best: Option<BestIterate> = None;
    let mut status = CoreStatus::MaxIterations;
    let mut iterations = 0;
    let mut short_steps = 0;

    for iter in 0..cfg.max_iterations {
        iterations = iter;
        let ax = p.apply(&it.x, &it.xl);
        let (aty, atyl) = p.adjoint(&it.y);
        let res = Residuals { rp: &p.b - ax, rd: &p.c - aty - &it.s, rdl: &p.cl - atyl - &it.sl };
        let mu = (it.x.dot(&it.s) + inner_lp(&it.xl, &it.sl)) / nu;
        let pobj = p.c.dot(&it.x) + inner_lp(&p.cl, &it.xl);
        let dobj = p.b.dot(&it.y);
        let relgap = (pobj - dobj).abs() / (p.gap_floor + pobj.abs() + dobj.abs());
        let pinf = res.rp.norm() / (1.0 + norm_b);
        let rd_norm = (res.rd.norm_squared() + res.rdl.norm_squared()).sqrt();
        let dinf = rd_norm / (1.0 + norm_c);

        let merit = relgap.max(pinf).max(dinf);
        if best.as_ref().is_none_or(|b| merit < b.0) {
            best = Some((merit, it.x.clone(), it.xl.clone(), it.y.clone(), dinf));
        }
        if merit < tol_inner {
            status = CoreStatus::Converged;
            break;
        }
        if dobj > 0.0 && (norm_c + rd_norm) / dobj < INFEASIBILITY_TOL {
            status = CoreStatus::PrimalInfeasible;
            break;
        }
        if pobj < 0.0 && (norm_b + res.rp.norm()) / pobj.abs() < INFEASIBILITY_TOL {
            status = CoreStatus::DualInfeasible;
            break;
        }

        let (Some(chol_s), Some(chol_x)) = (Cholesky::new(it.s.clone()), Cholesky::new(it.x.clone())) else {
            status = CoreStatus::Stalled;
            break;
        };
        let sinv = symmetrize(&chol_s.inverse());
        let d = it.xl.component_div(&it.sl);
        let mmat = schur(p, &it.x, &sinv, &d);
        let Some(chol_m) = factor(&mmat) else {
            status = CoreStatus::Stalled;
            break;
        };

        let pred = direction(p, &it, &sinv, &res, &chol_m, 0.0, None);
        let ap = 1f64.min(max_step_psd(&chol_x, &pred.dx).min(max_step_lp(&it.xl, &pred.dxl)));
        let ad = 1f64.min(max_step_psd(&chol_s, &pred.ds).min(max_step_lp(&it.sl, &pred.dsl)));
        let x_aff = &it.x + &pred.dx * ap;
        let s_aff = &it.s + &pred.ds * ad;
        let mu_aff = (x_aff.dot(&s_aff) + inner_lp(&(&it.xl + &pred.dxl * ap), &(&it.sl + &pred.dsl * ad))) / nu;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        let corr_x = &pred.dx * &pred.ds;
        let corr_l = pred.dxl.component_mul(&pred.dsl);
        let dir = direction(p, &it, &sinv, &res, &chol_m, sigma * mu, Some((&corr_x, &corr_l)));
        let ap = 1f64.min(cfg.step_fraction * max_step_psd(&chol_x, &dir.dx).min(max_step_lp(&it.xl, &dir.dxl)));
        let ad = 1f64.min(cfg.step_fraction * max_step_psd(&chol_s, &dir.ds).min(max_step_lp(&it.sl, &dir.dsl)));

        it.x = symmetrize(&(&it.x + &dir.dx * ap));
        it.xl += &dir.dxl * ap;
        it.y += &dir.dy * ad;
        it.s = symmetrize(&(&it.s + &dir.ds * ad));
        it.sl += &dir.dsl * ad;

        if ap.max(ad) < 1e-9 {
            short_steps += 1;
            if short_steps >= 3 {
                status = CoreStatus::Stalled;
                break;
            }
        } else {
            short_steps = 0;
        }
        iterations = iter + 1;
    }

    match status {
        CoreStatus::PrimalInfeasible | CoreStatus::DualInfeasible => {
            CoreResult { x: it.x, xl: it.xl, y: it.y, status, iterations, dual_infeasibility: f64::INFINITY }
        }
        _ => {
            let (_, x, xl, y, dinf) = best.expect("at least one iterate is evaluated");
            CoreResult { x, xl, y, status, iterations, dual_infeasibility: dinf }
        }
    }
}
