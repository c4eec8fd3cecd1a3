//! Dense complex helpers shared by the model, solver, and rounding code.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// `exp(j·theta)`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    Complex::from_polar(1.0, theta)
}

/// Largest absolute deviation from Hermitian symmetry.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted in descending order.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are orthonormal eigenvectors matching `values`.
    pub vectors: CMatrix,
}

pub fn hermitian_eigen(a: &CMatrix) -> HermitianEigen {
    let n = a.nrows();
    // Exact symmetrization so round-off in the input never leaks into the decomposition.
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    HermitianEigen { values, vectors }
}

pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    hermitian_eigen(a).values.last().copied().unwrap_or(0.0)
}

/// `Re Tr(A·B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

pub fn real_trace(a: &CMatrix) -> f64 {
    a.diagonal().iter().map(|z| z.re).sum()
}

/// Outer product `u·uᴴ`.
pub fn outer(u: &CVector) -> CMatrix {
    u * u.adjoint()
}
