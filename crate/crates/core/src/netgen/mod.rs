//! Connectivity matrices and the directed Watts-Strogatz ring ensemble.
//!
//! Convention: the network state is a row vector `x` and one coupling step
//! is `x·C`, so `C[(j, i)]` is the weight of the edge from node `j` into
//! node `i` and the incoming weight of node `i` is the `i`-th column sum.

mod io;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, ChaCha8Rng};

pub use io::{read_matrix, read_matrix_from, write_matrix, write_matrix_to, MATRIX_MAGIC};

/// Default tolerance on max_i |Σ_j C_ji − 1| for declaring a zero mode.
pub const DEFAULT_ZERO_MODE_TOL: f64 = 1e-9;

/// Dense weighted adjacency matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityMatrix {
    weights: DMatrix<f64>,
}

impl ConnectivityMatrix {
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = weights.shape();
        if rows != cols || rows == 0 {
            return Err(Error::Shape { rows, cols });
        }
        for j in 0..cols {
            for i in 0..rows {
                let value = weights[(i, j)];
                if !value.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j, value });
                }
            }
        }
        Ok(ConnectivityMatrix { weights })
    }

    /// Build from row-major data: `rows[j][i]` is the edge weight j → i.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Shape {
                rows: n,
                cols: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |j, i| rows[j][i]))
    }

    pub fn identity(n: usize) -> Self {
        ConnectivityMatrix {
            weights: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        ConnectivityMatrix {
            weights: DMatrix::zeros(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.weights
    }

    /// Weight of the edge `source → target`.
    pub fn weight(&self, source: usize, target: usize) -> f64 {
        self.weights[(source, target)]
    }

    /// Incoming weight of every node (ψ₀·C).
    pub fn column_sums(&self) -> Vec<f64> {
        self.weights.column_iter().map(|c| c.sum()).collect()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        crate::linalg::is_symmetric(&self.weights, tol)
    }

    /// `self` scaled entry-wise by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(&self.weights * factor)
    }
}

/// Parameters of the directed ring / small-world ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingEnsembleParams {
    pub n: usize,
    /// In-degree; even, so that node `i` listens to `d/2` neighbours per side.
    pub d: usize,
    /// Total incoming non-self weight; the self-weight is `1 − c`.
    pub c: f64,
    /// Per-edge rewiring probability.
    pub p: f64,
    pub seed: u64,
}

impl RingEnsembleParams {
    pub fn new(n: usize, d: usize, c: f64, p: f64, seed: u64) -> Self {
        RingEnsembleParams { n, d, c, p, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || !self.d.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "in-degree d must be a positive even integer, got {}",
                self.d
            )));
        }
        if self.d >= self.n {
            return Err(Error::InvalidParameter(format!(
                "in-degree d = {} must be smaller than n = {}",
                self.d, self.n
            )));
        }
        if !(0.0..=1.0).contains(&self.c) {
            return Err(Error::InvalidParameter(format!(
                "coupling c must lie in [0, 1], got {}",
                self.c
            )));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!(
                "rewiring probability p must lie in [0, 1], got {}",
                self.p
            )));
        }
        Ok(())
    }
}

/// Regular directed ring: node `i` receives from its `d/2` nearest
/// predecessors and successors with weight `c/d`, and from itself with
/// weight `1 − c`. `p` and `seed` are ignored.
pub fn build_ring(params: &RingEnsembleParams) -> Result<ConnectivityMatrix> {
    params.validate()?;
    let RingEnsembleParams { n, d, c, .. } = *params;
    let w = c / d as f64;
    let mut m = DMatrix::zeros(n, n);
    for target in 0..n {
        m[(target, target)] = 1.0 - c;
        for off in 1..=d / 2 {
            m[((target + off) % n, target)] = w;
            m[((target + n - off) % n, target)] = w;
        }
    }
    Ok(ConnectivityMatrix { weights: m })
}

/// Redraw the source of each non-self incoming edge with probability `p`.
///
/// Targets are visited in index order and, within a target, current sources
/// in ascending index order. A redrawn source is uniform over nodes that are
/// neither the target nor another current source of it; landing back on the
/// original source is allowed. Self-links and weights are untouched, so every
/// column keeps summing to one.
pub fn rewire(
    c: &ConnectivityMatrix,
    params: &RingEnsembleParams,
    rng: &mut ChaCha8Rng,
) -> ConnectivityMatrix {
    let n = c.n();
    let mut m = c.weights.clone();
    let mut candidates = Vec::with_capacity(n);
    for target in 0..n {
        let mut sources: Vec<usize> = (0..n)
            .filter(|&j| j != target && m[(j, target)] != 0.0)
            .collect();
        debug_assert!(params.c == 0.0 || sources.len() == params.d);
        for slot in 0..sources.len() {
            if rng.random::<f64>() >= params.p {
                continue;
            }
            let old = sources[slot];
            candidates.clear();
            candidates.extend(
                (0..n).filter(|&k| k != target && (k == old || !sources.contains(&k))),
            );
            let new = candidates[rng.random_range(0..candidates.len())];
            if new != old {
                let w = m[(old, target)];
                m[(old, target)] = 0.0;
                m[(new, target)] = w;
                sources[slot] = new;
            }
        }
    }
    ConnectivityMatrix { weights: m }
}

/// One ensemble member: `build_ring` followed by `rewire` seeded from
/// `params.seed`.
pub fn generate(params: &RingEnsembleParams) -> Result<ConnectivityMatrix> {
    let ring = build_ring(params)?;
    if params.p == 0.0 {
        return Ok(ring);
    }
    let mut rng = rng_from_seed(params.seed);
    Ok(rewire(&ring, params, &mut rng))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroModeReport {
    pub has_zero_mode: bool,
    /// max_i |Σ_j C_ji − 1|
    pub residual: f64,
    /// Mean column sum, i.e. the eigenvalue carried by ψ₀ when ψ₀ is a left
    /// eigenvector.
    pub eigenvalue_at_zero_mode: f64,
}

pub fn check_zero_mode(c: &ConnectivityMatrix, tol: f64) -> ZeroModeReport {
    let sums = c.column_sums();
    let residual = sums.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
    ZeroModeReport {
        has_zero_mode: residual <= tol,
        residual,
        eigenvalue_at_zero_mode: sums.iter().sum::<f64>() / sums.len() as f64,
    }
}
