//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function samples a ring network from its parameters, runs
//! one analysis and hands back a JSON string. The `*_report` functions are
//! the same computations with Rust types, so they can be tested natively.

use linsync_core::experiment::{run_sweep, summarize, SweepSpec};
use linsync_core::motifs::motif_ledger_converged;
use linsync_core::netgen::{generate, RingEnsembleParams, DEFAULT_ZERO_MODE_TOL};
use linsync_core::synccore::{sigma2, DynamicsKind, DynamicsParams, Method, Truncation};
use linsync_core::{classify, Error, Result};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Size limits keep a single call from freezing the tab for minutes.
pub const MAX_NODES: usize = 400;
pub const MAX_WORK: usize = 20_000;

fn dynamics(kind: &str) -> Result<DynamicsParams> {
    match kind {
        "continuous" => Ok(DynamicsParams::continuous(1.0, 1.0)),
        "discrete" => Ok(DynamicsParams::discrete(1.0)),
        other => Err(Error::InvalidParameter(format!("unknown dynamics {other:?}"))),
    }
}

fn check_size(n: usize, units: usize) -> Result<()> {
    if n > MAX_NODES {
        return Err(Error::InvalidParameter(format!("demo is limited to {MAX_NODES} nodes")));
    }
    if units > MAX_WORK {
        return Err(Error::InvalidParameter("too many realizations for the demo".into()));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct SpectrumReport {
    /// (Re λ, Im λ) pairs.
    pub eigenvalues: Vec<(f64, f64)>,
    pub zero_mode_index: Option<usize>,
    pub re_lambda1: Option<f64>,
    pub re_lambda2: Option<f64>,
    pub rho_cu: f64,
    pub sync_continuous: bool,
    pub sync_discrete: bool,
    pub valid: bool,
    pub sigma2: Option<f64>,
}

pub fn spectrum_report(n: usize, d: usize, c: f64, p: f64, seed: u64, kind: &str) -> Result<SpectrumReport> {
    check_size(n, 1)?;
    let params = dynamics(kind)?;
    let net = generate(&RingEnsembleParams::new(n, d, c, p, seed))?;
    let s = classify(&net, DEFAULT_ZERO_MODE_TOL)?;
    let sync = match params.kind {
        DynamicsKind::Continuous => s.sync_continuous,
        DynamicsKind::Discrete => s.sync_discrete,
    };
    let sigma2 = if sync && s.is_valid() {
        Some(sigma2(&net, &params, Truncation::default(), Method::Doubling)?.sigma2)
    } else {
        None
    };
    Ok(SpectrumReport {
        eigenvalues: s.eigenvalues.iter().map(|z| (z.re, z.im)).collect(),
        zero_mode_index: s.zero_mode_index,
        re_lambda1: s.re_lambda1,
        re_lambda2: s.re_lambda2,
        rho_cu: s.rho_cu,
        sync_continuous: s.sync_continuous,
        sync_discrete: s.sync_discrete,
        valid: s.is_valid(),
        sigma2,
    })
}

#[derive(Debug, Serialize)]
pub struct LedgerReport {
    pub order: Vec<usize>,
    pub closed: Vec<f64>,
    pub open: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub converged: bool,
    /// Reference value from the doubling solver.
    pub sigma2: f64,
}

pub fn ledger_report(
    n: usize,
    d: usize,
    c: f64,
    p: f64,
    seed: u64,
    kind: &str,
    max_order: usize,
) -> Result<LedgerReport> {
    check_size(n, max_order)?;
    let params = dynamics(kind)?;
    let net = generate(&RingEnsembleParams::new(n, d, c, p, seed))?;
    classify(&net, DEFAULT_ZERO_MODE_TOL)?.require_valid()?;
    let reference = sigma2(&net, &params, Truncation::default(), Method::Doubling)?.sigma2;
    let (ledger, converged) = motif_ledger_converged(&net, &params, Truncation::new(1e-10, max_order.max(1)))?;
    Ok(LedgerReport {
        order: ledger.order,
        closed: ledger.closed_contribution,
        open: ledger.open_contribution,
        cumulative: ledger.cumulative_sigma2,
        converged,
        sigma2: reference,
    })
}

#[derive(Debug, Serialize)]
pub struct CurvePoint {
    pub p: f64,
    pub mean_sigma2: Option<f64>,
    pub sd_sigma2: Option<f64>,
    /// Means of the low-order truncations, in `low_orders` order.
    pub mean_low: Vec<Option<f64>>,
    pub mean_re_lambda1: Option<f64>,
    pub discarded: usize,
}

#[derive(Debug, Serialize)]
pub struct SweepCurve {
    pub low_orders: Vec<usize>,
    pub points: Vec<CurvePoint>,
}

pub fn sweep_curve_report(
    n: usize,
    d: usize,
    c: f64,
    p_values: Vec<f64>,
    realizations: usize,
    seed: u64,
    kind: &str,
) -> Result<SweepCurve> {
    check_size(n, realizations * p_values.len())?;
    let mut spec = SweepSpec::new(n, d, vec![c], p_values, realizations, seed);
    spec.dynamics = dynamics(kind)?;
    let summary = summarize(&run_sweep(&spec)?);
    Ok(SweepCurve {
        low_orders: spec.low_orders.clone(),
        points: summary
            .into_iter()
            .map(|s| CurvePoint {
                p: s.p,
                mean_sigma2: s.mean_sigma2,
                sd_sigma2: s.sd_sigma2,
                mean_low: s.mean_sigma2_m,
                mean_re_lambda1: s.mean_re_lambda1,
                discarded: s.discarded,
            })
            .collect(),
    })
}

fn to_js<T: Serialize>(r: Result<T>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

// Seeds cross the JS boundary as u32 so plain numbers work.

/// Spectrum, verdicts and σ² of one sampled network, as JSON.
#[wasm_bindgen]
pub fn spectrum(n: usize, d: usize, c: f64, p: f64, seed: u32, kind: &str) -> Result<String, JsError> {
    to_js(spectrum_report(n, d, c, p, seed.into(), kind))
}

/// Per-order closed/open walk contributions, as JSON.
#[wasm_bindgen]
pub fn motif_ledger(
    n: usize,
    d: usize,
    c: f64,
    p: f64,
    seed: u32,
    kind: &str,
    max_order: usize,
) -> Result<String, JsError> {
    to_js(ledger_report(n, d, c, p, seed.into(), kind, max_order))
}

/// Ensemble-mean σ² for each rewiring probability, as JSON.
#[wasm_bindgen]
pub fn sweep_curve(
    n: usize,
    d: usize,
    c: f64,
    p_values: Vec<f64>,
    realizations: usize,
    seed: u32,
    kind: &str,
) -> Result<String, JsError> {
    to_js(sweep_curve_report(n, d, c, p_values, realizations, seed.into(), kind))
}
