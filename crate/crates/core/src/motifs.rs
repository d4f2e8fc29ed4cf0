//! Process motifs: weighted walk and dual-walk counts, and the expansion of
//! σ² into closed versus open dual walks.
//!
//! Order conventions differ between the two dynamics. For continuous
//! dynamics the order `m` bounds the *total* length of the two walks in a
//! dual walk; for discrete dynamics the order `u` is the length of *each*
//! walk. A discrete ledger to order M therefore reaches roughly twice as deep
//! into the network as a continuous ledger to the same M.
//!
//! Both ledgers are evaluated through trace identities, never by enumerating
//! node triples:
//!
//! * continuous: with T_0 = I, T_m = (CᵀT_{m−1} + T_{m−1}C)/2, the order-m
//!   closed term is trace(T_m)/N and the open term is sum(T_m)/N².
//! * discrete: closed_u = ‖Cᵘ‖²_F / N and open_u = Σ_k (row sum k of Cᵘ)² / N².

use std::io::Write;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::entry_sum;
use crate::netgen::ConnectivityMatrix;
use crate::synccore::{DynamicsKind, DynamicsParams, Method, SyncEstimate, Truncation};

/// Largest network for which per-pair detail is produced.
pub const DETAIL_MAX_NODES: usize = 64;

/// Powers C⁰ = I, C¹, …, C^M.
#[derive(Debug, Clone)]
pub struct WalkCountCache {
    powers: Vec<DMatrix<f64>>,
}

impl WalkCountCache {
    pub fn new(c: &ConnectivityMatrix, max_order: usize) -> Self {
        let n = c.n();
        let mut powers = Vec::with_capacity(max_order + 1);
        powers.push(DMatrix::identity(n, n));
        for m in 1..=max_order {
            let next = &powers[m - 1] * c.weights();
            powers.push(next);
        }
        WalkCountCache { powers }
    }

    pub fn max_order(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn n(&self) -> usize {
        self.powers[0].nrows()
    }

    pub fn power(&self, m: usize) -> Result<&DMatrix<f64>> {
        self.powers.get(m).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "walk order {m} exceeds cached maximum {}",
                self.max_order()
            ))
        })
    }

    fn check_node(&self, a: usize) -> Result<()> {
        if a < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("node {a} out of range 0..{}", self.n())))
        }
    }
}

/// W(a→b, M) = (C^M)_ab, the total weight of length-M walks from a to b.
pub fn walk_count(cache: &WalkCountCache, a: usize, b: usize, order: usize) -> Result<f64> {
    cache.check_node(a)?;
    cache.check_node(b)?;
    Ok(cache.power(order)?[(a, b)])
}

/// D(a→b, M1; a→e, M2) = W(a→b, M1)·W(a→e, M2).
pub fn dual_walk_count(
    cache: &WalkCountCache,
    a: usize,
    b: usize,
    m1: usize,
    e: usize,
    m2: usize,
) -> Result<f64> {
    Ok(walk_count(cache, a, b, m1)? * walk_count(cache, a, e, m2)?)
}

/// Unweighted closed and open dual-walk sums for walk lengths (u, v):
/// (1/N)Σ_{k,i} W(k→i,u)W(k→i,v) and (1/N²)Σ_{k,i,j} W(k→i,u)W(k→j,v).
pub fn dual_walk_sums(cache: &WalkCountCache, u: usize, v: usize) -> Result<(f64, f64)> {
    let cu = cache.power(u)?;
    let cv = cache.power(v)?;
    let n = cache.n() as f64;
    let closed = cu.dot(cv) / n;
    let open = cu.column_sum().dot(&cv.column_sum()) / (n * n);
    Ok((closed, open))
}

/// Per-order contributions to σ², prefactor included.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MotifLedger {
    pub kind: DynamicsKind,
    pub order: Vec<usize>,
    pub closed_contribution: Vec<f64>,
    pub open_contribution: Vec<f64>,
    pub cumulative_sigma2: Vec<f64>,
}

impl MotifLedger {
    fn new(kind: DynamicsKind) -> Self {
        MotifLedger {
            kind,
            order: Vec::new(),
            closed_contribution: Vec::new(),
            open_contribution: Vec::new(),
            cumulative_sigma2: Vec::new(),
        }
    }

    fn push(&mut self, closed: f64, open: f64) {
        let total = self.cumulative_sigma2.last().copied().unwrap_or(0.0) + (closed - open);
        self.order.push(self.order.len());
        self.closed_contribution.push(closed);
        self.open_contribution.push(open);
        self.cumulative_sigma2.push(total);
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn net(&self, k: usize) -> f64 {
        self.closed_contribution[k] - self.open_contribution[k]
    }

    /// ⟨σ²_M⟩, if the ledger reaches order M.
    pub fn sigma2_at(&self, order: usize) -> Option<f64> {
        self.cumulative_sigma2.get(order).copied()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "order,closed,open,net,cumulative")?;
        for k in 0..self.len() {
            writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.order[k],
                self.closed_contribution[k],
                self.open_contribution[k],
                self.net(k),
                self.cumulative_sigma2[k]
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Streams (closed, open) per order without the prefactor.
struct OrderStream<'a> {
    kind: DynamicsKind,
    c: &'a DMatrix<f64>,
    /// T_m (continuous) or Cᵘ (discrete) for the next order to emit.
    state: DMatrix<f64>,
    n: f64,
}

impl<'a> OrderStream<'a> {
    fn new(c: &'a ConnectivityMatrix, kind: DynamicsKind) -> Self {
        let n = c.n();
        OrderStream {
            kind,
            c: c.weights(),
            state: DMatrix::identity(n, n),
            n: n as f64,
        }
    }

    fn next_order(&mut self) -> (f64, f64) {
        let n = self.n;
        let terms = match self.kind {
            DynamicsKind::Continuous => (self.state.trace() / n, entry_sum(&self.state) / (n * n)),
            DynamicsKind::Discrete => {
                let rows = self.state.column_sum();
                (self.state.norm_squared() / n, rows.norm_squared() / (n * n))
            }
        };
        self.state = match self.kind {
            DynamicsKind::Continuous => {
                let tc = &self.state * self.c;
                (&tc + tc.transpose()) * 0.5
            }
            DynamicsKind::Discrete => &self.state * self.c,
        };
        terms
    }
}

/// Low-order approximation ⟨σ²_M⟩ with its per-order ledger, orders 0..=M.
/// Always defined; whether the full series converges is a separate question.
pub fn sigma2_low_order(c: &ConnectivityMatrix, params: &DynamicsParams, max_order: usize) -> Result<MotifLedger> {
    params.validate()?;
    let pre = params.prefactor();
    let mut stream = OrderStream::new(c, params.kind);
    let mut ledger = MotifLedger::new(params.kind);
    for _ in 0..=max_order {
        let (closed, open) = stream.next_order();
        ledger.push(pre * closed, pre * open);
    }
    Ok(ledger)
}

/// Extends the ledger until the net contribution of two consecutive orders
/// is at most `tol` times the running total. Returns the ledger and whether
/// that happened within `max_terms` orders.
pub fn motif_ledger_converged(
    c: &ConnectivityMatrix,
    params: &DynamicsParams,
    trunc: Truncation,
) -> Result<(MotifLedger, bool)> {
    params.validate()?;
    let pre = params.prefactor();
    let mut stream = OrderStream::new(c, params.kind);
    let mut ledger = MotifLedger::new(params.kind);
    let mut quiet = 0;
    while ledger.len() < trunc.max_terms {
        let (closed, open) = stream.next_order();
        ledger.push(pre * closed, pre * open);
        let k = ledger.len() - 1;
        let total = ledger.cumulative_sigma2[k];
        if !total.is_finite() || closed.abs() > 1e150 {
            return Ok((ledger, false));
        }
        if ledger.net(k).abs() <= trunc.tol * total.abs() {
            quiet += 1;
            if quiet >= 2 {
                return Ok((ledger, true));
            }
        } else {
            quiet = 0;
        }
    }
    Ok((ledger, false))
}

/// σ² summed through the dual-walk motif expansion.
pub fn motif_sigma2_full(c: &ConnectivityMatrix, params: &DynamicsParams, trunc: Truncation) -> Result<SyncEstimate> {
    if c.n() == 1 {
        return Ok(SyncEstimate {
            sigma2: 0.0,
            method: Method::MotifExpansion,
            terms_used: 0,
            residual: 0.0,
            std_error: None,
        });
    }
    crate::spectral::classify(c, crate::netgen::DEFAULT_ZERO_MODE_TOL)?.require_valid()?;
    let (ledger, converged) = motif_ledger_converged(c, params, trunc)?;
    let last = ledger.len() - 1;
    if !converged {
        return Err(Error::NotConverged {
            terms: ledger.len(),
            residual: ledger.net(last).abs(),
        });
    }
    Ok(SyncEstimate {
        sigma2: ledger.cumulative_sigma2[last],
        method: Method::MotifExpansion,
        terms_used: ledger.len(),
        residual: ledger.net(last).abs(),
        std_error: None,
    })
}

/// Per-pair closed dual-walk contribution at one order: entry (k, i) is the
/// prefactor-weighted share of dual walks from k that both end at i.
pub fn closed_detail(cache: &WalkCountCache, params: &DynamicsParams, order: usize) -> Result<DMatrix<f64>> {
    let n = cache.n();
    if n > DETAIL_MAX_NODES {
        return Err(Error::InvalidParameter(format!(
            "per-pair detail is limited to {DETAIL_MAX_NODES} nodes, network has {n}"
        )));
    }
    let pre = params.prefactor() / n as f64;
    match params.kind {
        DynamicsKind::Discrete => {
            let p = cache.power(order)?;
            Ok(p.component_mul(p) * pre)
        }
        DynamicsKind::Continuous => {
            cache.power(order)?;
            let mut out = DMatrix::zeros(n, n);
            for u in 0..=order {
                let w = binomial_weight(order, u);
                out += cache.power(u)?.component_mul(cache.power(order - u)?) * w;
            }
            Ok(out * pre)
        }
    }
}

/// binom(m, u) / 2^m without overflow.
fn binomial_weight(m: usize, u: usize) -> f64 {
    let u = u.min(m - u);
    let ln: f64 = (0..u)
        .map(|k| ((m - k) as f64).ln() - ((k + 1) as f64).ln())
        .sum();
    (ln - m as f64 * std::f64::consts::LN_2).exp()
}
