//! Dense helpers shared by the analytic and simulation paths.

pub mod eigen;

use nalgebra::DMatrix;

pub use eigen::{eigenvalues, spectral_radius};

/// Largest absolute entry.
pub fn max_norm(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// The centering projector U = I − G, G_ij = 1/n.
pub fn centering_matrix(n: usize) -> DMatrix<f64> {
    let g = 1.0 / n as f64;
    DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 - g } else { -g })
}

/// A·U: subtract each row's mean from that row.
pub fn right_center(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.ncols() as f64;
    let mut out = a.clone();
    for mut row in out.row_iter_mut() {
        let mean = row.sum() / n;
        row.add_scalar_mut(-mean);
    }
    out
}

/// U·A·U via column-mean then row-mean subtraction; U is never formed.
pub fn centering_apply(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows() as f64;
    let mut out = a.clone();
    for mut col in out.column_iter_mut() {
        let mean = col.sum() / n;
        col.add_scalar_mut(-mean);
    }
    right_center(&out)
}

/// Σ_ij A_ij.
pub fn entry_sum(a: &DMatrix<f64>) -> f64 {
    a.iter().sum()
}

/// max |A − Aᵀ| ≤ tol · max(1, ‖A‖_max).
pub fn is_symmetric(a: &DMatrix<f64>, tol: f64) -> bool {
    let scale = max_norm(a).max(1.0);
    let n = a.nrows();
    (0..n).all(|i| (0..i).all(|j| (a[(i, j)] - a[(j, i)]).abs() <= tol * scale))
}

/// Aᵀ X A for symmetric X, formed as (Aᵀ X)·A and symmetrized.
pub(crate) fn congruence(a: &DMatrix<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
    let atx = a.tr_mul(x);
    let mut out = &atx * a;
    symmetrize(&mut out);
    out
}

pub(crate) fn symmetrize(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
}
