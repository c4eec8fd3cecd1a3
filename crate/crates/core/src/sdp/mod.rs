//! Small dense Hermitian semidefinite programs and Gaussian-randomization rounding.
//!
//! Problems are stated over a complex Hermitian PSD matrix `X` plus optional
//! nonnegative scalars `s`. They are mapped to a real symmetric program of doubled
//! dimension and solved by a primal-dual interior-point method.

mod grp;
mod ipm;

pub use grp::{grp_round, principal_phase_vector, RANK_ONE_THRESHOLD};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_defect, min_eigenvalue, trace_product, CMatrix, C64};
use ipm::{CoreStatus, RealProblem, Row, RowMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `Re Tr(matrix·X) + Σ scalars[j]·s_j  (relation)  bound`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub matrix: CMatrix,
    pub scalars: Vec<(usize, f64)>,
    pub relation: Relation,
    pub bound: f64,
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub dim: usize,
    pub objective: CMatrix,
    /// Objective coefficients of the nonnegative scalars; its length is their count.
    pub scalar_objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub maximize: bool,
}

impl SdpProblem {
    pub fn new(objective: CMatrix, maximize: bool) -> Self {
        SdpProblem { dim: objective.nrows(), objective, scalar_objective: Vec::new(), constraints: Vec::new(), maximize }
    }

    pub fn with_scalars(mut self, costs: Vec<f64>) -> Self {
        self.scalar_objective = costs;
        self
    }

    pub fn add(&mut self, matrix: CMatrix, relation: Relation, bound: f64) {
        self.constraints.push(Constraint { matrix, scalars: Vec::new(), relation, bound });
    }

    pub fn add_with_scalars(&mut self, matrix: CMatrix, scalars: Vec<(usize, f64)>, relation: Relation, bound: f64) {
        self.constraints.push(Constraint { matrix, scalars, relation, bound });
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Domain("SDP dimension must be positive".into()));
        }
        let check = |m: &CMatrix| -> Result<()> {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Dimension { expected: n, got: m.nrows() });
            }
            let defect = hermitian_defect(m);
            let scale = m.iter().fold(1.0_f64, |a, z| a.max(z.norm()));
            if defect > 1e-12 * scale {
                return Err(Error::Domain(format!("matrix not Hermitian (defect {defect:e})")));
            }
            Ok(())
        };
        check(&self.objective)?;
        let ns = self.scalar_objective.len();
        for (i, con) in self.constraints.iter().enumerate() {
            check(&con.matrix)?;
            if let Some(&(j, _)) = con.scalars.iter().find(|(j, _)| *j >= ns) {
                return Err(Error::Domain(format!("constraint {i} references scalar {j} of {ns}")));
            }
            if !con.bound.is_finite() {
                return Err(Error::Domain(format!("constraint {i} has a non-finite bound")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub matrix: CMatrix,
    pub scalars: Vec<f64>,
    pub objective_value: f64,
    pub dual_objective: f64,
    pub status: SolveStatus,
    /// Relative gap `|p − d| / (1 + |p| + |d|)`.
    pub duality_gap: f64,
    /// Largest constraint violation, each scaled by `max(1, |b_i|, ‖A_i‖_F)`.
    pub residuals: f64,
    pub min_eigenvalue: f64,
    pub iterations: usize,
    /// Multipliers of the constraints in the original (maximize or minimize) sense.
    pub dual: Vec<f64>,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub step_fraction: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tolerance: 1e-8, max_iterations: 200, step_fraction: 0.99 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Config("solver tolerance must be positive".into()));
        }
        if !(self.step_fraction > 0.0 && self.step_fraction < 1.0) {
            return Err(Error::Config("step fraction must lie in (0, 1)".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// Number of upper-triangle nonzeros above which a realified row is kept dense.
const SPARSE_PAIR_LIMIT: usize = 24;

/// Real symmetric image of a Hermitian matrix: `½·[[Re, −Im], [Im, Re]]`, so that the
/// real inner product with the image of `X` equals `Re Tr(A·X)`.
fn realify_dense(a: &CMatrix) -> DMatrix<f64> {
    let n = a.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let (br, ir) = (r / n, r % n);
        let (bc, ic) = (c / n, c % n);
        let z = a[(ir, ic)];
        0.5 * match (br, bc) {
            (0, 0) | (1, 1) => z.re,
            (0, 1) => -z.im,
            _ => z.im,
        }
    })
}

/// Ordered `(row, col, value)` entries of the realified matrix, or `None` when dense.
fn realify_sparse(a: &CMatrix) -> Option<Vec<(usize, usize, f64)>> {
    let n = a.nrows();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let z = a[(i, j)];
            if z == C64::new(0.0, 0.0) {
                continue;
            }
            if pairs.len() + 4 > 4 * SPARSE_PAIR_LIMIT {
                return None;
            }
            if z.re != 0.0 {
                pairs.push((i, j, 0.5 * z.re));
                pairs.push((i + n, j + n, 0.5 * z.re));
            }
            if z.im != 0.0 {
                pairs.push((i, j + n, -0.5 * z.im));
                pairs.push((i + n, j, 0.5 * z.im));
            }
        }
    }
    Some(pairs)
}

fn realify_row(a: &CMatrix) -> RowMatrix {
    match realify_sparse(a) {
        Some(p) => RowMatrix::Pairs(p),
        None => RowMatrix::Dense(realify_dense(a)),
    }
}

fn complex_from_real(w: &DMatrix<f64>, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        let re = 0.5 * (w[(i, j)] + w[(i + n, j + n)]);
        let im = 0.5 * (w[(i + n, j)] - w[(i, j + n)]);
        C64::new(re, im)
    })
}

struct Conversion {
    real: RealProblem,
    row_scale: Vec<f64>,
    obj_scale: f64,
}

fn convert(problem: &SdpProblem) -> Conversion {
    let n = problem.dim;
    let ns = problem.scalar_objective.len();
    let slack_rows: Vec<usize> =
        problem.constraints.iter().enumerate().filter(|(_, c)| c.relation != Relation::Eq).map(|(i, _)| i).collect();
    let nl = ns + slack_rows.len();
    let sign = if problem.maximize { -1.0 } else { 1.0 };

    let mut c = realify_dense(&problem.objective).scale(sign);
    let mut cl = DVector::zeros(nl);
    for (j, &v) in problem.scalar_objective.iter().enumerate() {
        cl[j] = sign * v;
    }
    let obj_norm = (c.norm_squared() + cl.norm_squared()).sqrt();
    let obj_scale = if obj_norm > 0.0 { obj_norm } else { 1.0 };
    c /= obj_scale;
    cl /= obj_scale;

    let mut rows = Vec::with_capacity(problem.constraints.len());
    let mut b = DVector::zeros(problem.constraints.len());
    let mut row_scale = Vec::with_capacity(problem.constraints.len());
    let mut slack = ns;
    for (i, con) in problem.constraints.iter().enumerate() {
        let psd = realify_row(&con.matrix);
        let mut lp: Vec<(usize, f64)> = con.scalars.clone();
        match con.relation {
            Relation::Le => {
                lp.push((slack, 1.0));
                slack += 1;
            }
            Relation::Ge => {
                lp.push((slack, -1.0));
                slack += 1;
            }
            Relation::Eq => {}
        }
        // Realification halves the Frobenius norm squared of the complex matrix's image.
        let psd_norm2 = 0.5 * con.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let lp_norm2: f64 = lp.iter().map(|(_, v)| v * v).sum();
        let scale = (psd_norm2 + lp_norm2).sqrt().max(f64::MIN_POSITIVE);
        let mut row = Row { psd, lp };
        row.scale(1.0 / scale);
        rows.push(row);
        b[i] = con.bound / scale;
        row_scale.push(scale);
    }
    debug_assert_eq!(slack, nl);
    Conversion { real: RealProblem { n: 2 * n, nl, c, cl, rows, b, gap_floor: 1.0 / obj_scale }, row_scale, obj_scale }
}

/// Solves `problem`; malformed input is an error, numerical outcomes are reported in
/// [`SdpSolution::status`].
pub fn solve(problem: &SdpProblem, config: &SolverConfig) -> Result<SdpSolution> {
    problem.validate()?;
    config.validate()?;
    let conv = convert(problem);
    let core = ipm::solve_real(&conv.real, config);
    let n = problem.dim;
    let matrix = complex_from_real(&core.x, n);
    let ns = problem.scalar_objective.len();
    let scalars: Vec<f64> = core.xl.iter().take(ns).map(|v| v.max(0.0)).collect();

    let primal = trace_product(&problem.objective, &matrix)
        + problem.scalar_objective.iter().zip(&scalars).map(|(c, s)| c * s).sum::<f64>();
    let sign = if problem.maximize { -1.0 } else { 1.0 };
    let dual: Vec<f64> =
        core.y.iter().zip(&conv.row_scale).map(|(y, r)| sign * y * conv.obj_scale / r).collect();
    let dual_objective = problem.constraints.iter().zip(&dual).map(|(c, y)| c.bound * y).sum::<f64>();
    let duality_gap = (primal - dual_objective).abs() / (1.0 + primal.abs() + dual_objective.abs());

    let mut residuals = 0.0_f64;
    for con in &problem.constraints {
        let lhs = trace_product(&con.matrix, &matrix) + con.scalars.iter().map(|&(j, v)| v * scalars[j]).sum::<f64>();
        let violation = match con.relation {
            Relation::Eq => (lhs - con.bound).abs(),
            Relation::Le => (lhs - con.bound).max(0.0),
            Relation::Ge => (con.bound - lhs).max(0.0),
        };
        let norm = con.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        residuals = residuals.max(violation / 1f64.max(con.bound.abs()).max(norm));
    }
    let min_eig = min_eigenvalue(&matrix);

    let tol = config.tolerance;
    let status = match core.status {
        CoreStatus::PrimalInfeasible => SolveStatus::Infeasible,
        CoreStatus::DualInfeasible => SolveStatus::Unbounded,
        _ if duality_gap <= tol && residuals <= tol && min_eig >= -tol && core.dual_infeasibility <= tol => {
            SolveStatus::Optimal
        }
        _ => SolveStatus::MaxIterations,
    };
    Ok(SdpSolution {
        matrix,
        scalars,
        objective_value: primal,
        dual_objective,
        status,
        duality_gap,
        residuals,
        min_eigenvalue: min_eig,
        iterations: core.iterations,
        dual,
    })
}

/// Like [`solve`] but anything other than `Optimal` becomes [`Error::Solver`].
pub fn solve_optimal(problem: &SdpProblem, config: &SolverConfig) -> Result<SdpSolution> {
    let sol = solve(problem, config)?;
    if sol.is_optimal() {
        Ok(sol)
    } else {
        Err(Error::Solver(format!(
            "{:?} after {} iterations (gap {:.2e}, residual {:.2e}, min eig {:.2e})",
            sol.status, sol.iterations, sol.duality_gap, sol.residuals, sol.min_eigenvalue
        )))
    }
}

#[cfg(test)]
mod tests;
