//! Ensemble experiments: the small-world sweep and the sampling-convergence
//! study. Every realization gets its own seed from
//! `split_seed(master, cell, realization)`, so output does not depend on how
//! work is scheduled.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motifs::sigma2_low_order;
use crate::netgen::{generate, RingEnsembleParams, DEFAULT_ZERO_MODE_TOL};
use crate::rng::split_seed;
use crate::simulate::{empirical_sigma2, simulate, SimulationConfig};
use crate::spectral::classify;
use crate::synccore::{sigma2, DynamicsParams, Method, Truncation};

fn default_low_orders() -> Vec<usize> {
    vec![2, 10, 50]
}

fn default_method() -> Method {
    Method::Doubling
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub n: usize,
    pub d: usize,
    pub c_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub realizations: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub dynamics: DynamicsParams,
    #[serde(default = "default_low_orders")]
    pub low_orders: Vec<usize>,
    #[serde(default)]
    pub tolerances: Truncation,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default)]
    pub output_path: Option<String>,
}

impl SweepSpec {
    pub fn new(n: usize, d: usize, c_values: Vec<f64>, p_values: Vec<f64>, realizations: usize, seed: u64) -> Self {
        SweepSpec {
            n,
            d,
            c_values,
            p_values,
            realizations,
            seed,
            dynamics: DynamicsParams::default(),
            low_orders: default_low_orders(),
            tolerances: Truncation::default(),
            method: default_method(),
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidParameter("realizations must be at least 1".into()));
        }
        if self.p_values.is_empty() || self.c_values.is_empty() {
            return Err(Error::InvalidParameter("p_values and c_values must be non-empty".into()));
        }
        if matches!(self.method, Method::Empirical) {
            return Err(Error::InvalidParameter("sweeps need an analytic method".into()));
        }
        self.dynamics.validate()?;
        for &c in &self.c_values {
            for &p in &self.p_values {
                RingEnsembleParams::new(self.n, self.d, c, p, 0).validate()?;
            }
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::new();
        for &p in &self.p_values {
            for &c in &self.c_values {
                out.push((out.len(), p, c));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub c: f64,
    pub realization_id: usize,
    pub seed: u64,
    /// `None` for discarded (invalid) networks.
    pub sigma2: Option<f64>,
    /// One entry per requested low order, `None` when discarded.
    pub sigma2_m: Vec<Option<f64>>,
    pub re_lambda1: Option<f64>,
    pub re_lambda2: Option<f64>,
    pub rho_cu: f64,
    pub valid: bool,
}

fn sweep_one(spec: &SweepSpec, cell: usize, p: f64, c: f64, r: usize) -> Result<SweepRow> {
    let seed = split_seed(spec.seed, cell as u64, r as u64);
    let net = generate(&RingEnsembleParams::new(spec.n, spec.d, c, p, seed))?;
    let summary = classify(&net, DEFAULT_ZERO_MODE_TOL)?;
    let valid = summary.is_valid();
    let (sigma2_value, sigma2_m) = if valid {
        let s = sigma2(&net, &spec.dynamics, spec.tolerances, spec.method)?.sigma2;
        let top = spec.low_orders.iter().copied().max();
        let ledger = match top {
            Some(m) => Some(sigma2_low_order(&net, &spec.dynamics, m)?),
            None => None,
        };
        let low = spec
            .low_orders
            .iter()
            .map(|&m| ledger.as_ref().and_then(|l| l.sigma2_at(m)))
            .collect();
        (Some(s), low)
    } else {
        (None, vec![None; spec.low_orders.len()])
    };
    Ok(SweepRow {
        p,
        c,
        realization_id: r,
        seed,
        sigma2: sigma2_value,
        sigma2_m,
        re_lambda1: summary.re_lambda1,
        re_lambda2: summary.re_lambda2,
        rho_cu: summary.rho_cu,
        valid,
    })
}

#[cfg(feature = "parallel")]
fn map_tasks<T, R, F>(tasks: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    tasks.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_tasks<T, R, F>(tasks: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    tasks.into_iter().map(f).collect()
}

/// All rows of the sweep, sorted by (p, c, realization_id).
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let tasks: Vec<(usize, f64, f64, usize)> = spec
        .cells()
        .into_iter()
        .flat_map(|(cell, p, c)| (0..spec.realizations).map(move |r| (cell, p, c, r)))
        .collect();
    let mut rows = map_tasks(tasks, |(cell, p, c, r)| sweep_one(spec, cell, p, c, r))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        a.p.total_cmp(&b.p)
            .then(a.c.total_cmp(&b.c))
            .then(a.realization_id.cmp(&b.realization_id))
    });
    Ok(rows)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

pub fn write_sweep_rows<W: Write>(rows: &[SweepRow], low_orders: &[usize], mut out: W) -> Result<()> {
    let mut header = String::from("p,c,realization_id,seed,sigma2");
    for m in low_orders {
        header.push_str(&format!(",sigma2_M{m}"));
    }
    header.push_str(",re_lambda1,re_lambda2,rho_CU,valid");
    writeln!(out, "{header}")?;
    for row in rows {
        let mut line = format!(
            "{:.16e},{:.16e},{},{},{}",
            row.p,
            row.c,
            row.realization_id,
            row.seed,
            opt(row.sigma2)
        );
        for v in &row.sigma2_m {
            line.push(',');
            line.push_str(&opt(*v));
        }
        line.push_str(&format!(
            ",{},{},{:.16e},{}",
            opt(row.re_lambda1),
            opt(row.re_lambda2),
            row.rho_cu,
            row.valid
        ));
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

/// Mean and sample standard deviation; SD is `None` below two values.
pub fn mean_sd(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (Some(mean), None);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (Some(mean), Some(var.sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub p: f64,
    pub c: f64,
    pub total: usize,
    pub valid: usize,
    pub discarded: usize,
    pub mean_sigma2: Option<f64>,
    pub sd_sigma2: Option<f64>,
    pub mean_sigma2_m: Vec<Option<f64>>,
    pub sd_sigma2_m: Vec<Option<f64>>,
    pub mean_re_lambda1: Option<f64>,
    pub sd_re_lambda1: Option<f64>,
    pub mean_re_lambda2: Option<f64>,
    pub sd_re_lambda2: Option<f64>,
}

/// Per-(p, c) statistics over valid rows. Rows must be sorted as returned
/// by [`run_sweep`].
pub fn summarize(rows: &[SweepRow]) -> Vec<SweepSummary> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let (p, c) = (rows[start].p, rows[start].c);
        let end = start + rows[start..].iter().take_while(|r| r.p == p && r.c == c).count();
        let cell = &rows[start..end];
        let valid: Vec<&SweepRow> = cell.iter().filter(|r| r.valid).collect();
        let col = |f: &dyn Fn(&SweepRow) -> Option<f64>| -> Vec<f64> {
            valid.iter().filter_map(|r| f(r)).collect()
        };
        let (mean_sigma2, sd_sigma2) = mean_sd(&col(&|r| r.sigma2));
        let orders = cell[0].sigma2_m.len();
        let (mean_sigma2_m, sd_sigma2_m) = (0..orders)
            .map(|k| mean_sd(&col(&|r| r.sigma2_m[k])))
            .unzip();
        let (mean_re_lambda1, sd_re_lambda1) = mean_sd(&col(&|r| r.re_lambda1));
        let (mean_re_lambda2, sd_re_lambda2) = mean_sd(&col(&|r| r.re_lambda2));
        out.push(SweepSummary {
            p,
            c,
            total: cell.len(),
            valid: valid.len(),
            discarded: cell.len() - valid.len(),
            mean_sigma2,
            sd_sigma2,
            mean_sigma2_m,
            sd_sigma2_m,
            mean_re_lambda1,
            sd_re_lambda1,
            mean_re_lambda2,
            sd_re_lambda2,
        });
        start = end;
    }
    out
}

pub fn write_sweep_summary<W: Write>(summary: &[SweepSummary], low_orders: &[usize], mut out: W) -> Result<()> {
    let mut header = String::from("p,c,total,valid,discarded,mean_sigma2,sd_sigma2");
    for m in low_orders {
        header.push_str(&format!(",mean_sigma2_M{m},sd_sigma2_M{m}"));
    }
    header.push_str(",mean_re_lambda1,sd_re_lambda1,mean_re_lambda2,sd_re_lambda2");
    writeln!(out, "{header}")?;
    for s in summary {
        let mut line = format!(
            "{:.16e},{:.16e},{},{},{},{},{}",
            s.p,
            s.c,
            s.total,
            s.valid,
            s.discarded,
            opt(s.mean_sigma2),
            opt(s.sd_sigma2)
        );
        for (m, sd) in s.mean_sigma2_m.iter().zip(&s.sd_sigma2_m) {
            line.push_str(&format!(",{},{}", opt(*m), opt(*sd)));
        }
        line.push_str(&format!(
            ",{},{},{},{}",
            opt(s.mean_re_lambda1),
            opt(s.sd_re_lambda1),
            opt(s.mean_re_lambda2),
            opt(s.sd_re_lambda2)
        ));
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergeSpec {
    pub n: usize,
    pub d: usize,
    pub c: f64,
    pub p_values: Vec<f64>,
    pub l_values: Vec<usize>,
    pub realizations: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub dynamics: DynamicsParams,
    #[serde(default = "one")]
    pub dt: f64,
    #[serde(default)]
    pub burn_in: Option<usize>,
    #[serde(default)]
    pub tolerances: Truncation,
}

fn one() -> f64 {
    1.0
}

impl ConvergeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidParameter("realizations must be at least 1".into()));
        }
        if self.p_values.is_empty() || self.l_values.is_empty() {
            return Err(Error::InvalidParameter("p_values and l_values must be non-empty".into()));
        }
        if self.l_values.contains(&0) {
            return Err(Error::InvalidParameter("sample counts must be at least 1".into()));
        }
        self.dynamics.validate()?;
        for &p in &self.p_values {
            RingEnsembleParams::new(self.n, self.d, self.c, p, 0).validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergeRow {
    pub p: f64,
    pub l: usize,
    pub realization_id: usize,
    pub sigma2: f64,
    pub empirical: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergeSummary {
    pub p: f64,
    pub l: usize,
    pub realizations: usize,
    pub discarded: usize,
    pub mean_rel_error: f64,
    /// Sample SD of ln(relative error).
    pub log_sd: Option<f64>,
}

/// Relative error of the empirical σ² against the analytic value for every
/// (p, L, realization). The network for (p, r) is shared across L; each L
/// gets its own simulation seed.
pub fn run_converge(spec: &ConvergeSpec) -> Result<(Vec<ConvergeRow>, Vec<ConvergeSummary>)> {
    spec.validate()?;
    let tasks: Vec<(usize, f64, usize)> = spec
        .p_values
        .iter()
        .enumerate()
        .flat_map(|(pi, &p)| (0..spec.realizations).map(move |r| (pi, p, r)))
        .collect();
    let per_network = map_tasks(tasks, |(pi, p, r)| -> Result<(f64, Vec<ConvergeRow>)> {
        let seed = split_seed(spec.seed, pi as u64, r as u64);
        let net = generate(&RingEnsembleParams::new(spec.n, spec.d, spec.c, p, seed))?;
        if !classify(&net, DEFAULT_ZERO_MODE_TOL)?.is_valid() {
            return Ok((p, Vec::new()));
        }
        let exact = sigma2(&net, &spec.dynamics, spec.tolerances, Method::Doubling)?.sigma2;
        let mut rows = Vec::with_capacity(spec.l_values.len());
        for (li, &l) in spec.l_values.iter().enumerate() {
            let mut config = SimulationConfig::new(spec.dynamics, l, split_seed(seed, li as u64, u64::MAX));
            config.dt = spec.dt;
            config.burn_in = spec.burn_in;
            let emp = empirical_sigma2(&simulate(&net, &config)?).sigma2;
            rows.push(ConvergeRow {
                p,
                l,
                realization_id: r,
                sigma2: exact,
                empirical: emp,
                rel_error: (exact - emp).abs() / exact,
            });
        }
        Ok((p, rows))
    });
    let mut rows = Vec::new();
    let mut discarded = vec![0usize; spec.p_values.len()];
    for (k, res) in per_network.into_iter().enumerate() {
        let (_, mut r) = res?;
        if r.is_empty() {
            discarded[k / spec.realizations] += 1;
        }
        rows.append(&mut r);
    }
    let mut summary = Vec::new();
    for (pi, &p) in spec.p_values.iter().enumerate() {
        for &l in &spec.l_values {
            let errs: Vec<f64> = rows
                .iter()
                .filter(|r| r.p == p && r.l == l)
                .map(|r| r.rel_error)
                .collect();
            let (mean, _) = mean_sd(&errs);
            let logs: Vec<f64> = errs.iter().filter(|e| **e > 0.0).map(|e| e.ln()).collect();
            summary.push(ConvergeSummary {
                p,
                l,
                realizations: errs.len(),
                discarded: discarded[pi],
                mean_rel_error: mean.unwrap_or(f64::NAN),
                log_sd: mean_sd(&logs).1,
            });
        }
    }
    rows.sort_by(|a, b| {
        a.p.total_cmp(&b.p)
            .then(a.l.cmp(&b.l))
            .then(a.realization_id.cmp(&b.realization_id))
    });
    Ok((rows, summary))
}

pub fn write_converge_summary<W: Write>(summary: &[ConvergeSummary], mut out: W) -> Result<()> {
    writeln!(out, "p,L,realizations,mean_rel_error,log_sd")?;
    for s in summary {
        writeln!(
            out,
            "{:.16e},{},{},{:.16e},{}",
            s.p,
            s.l,
            s.realizations,
            s.mean_rel_error,
            opt(s.log_sd)
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_converge_rows<W: Write>(rows: &[ConvergeRow], mut out: W) -> Result<()> {
    writeln!(out, "p,L,realization_id,sigma2,empirical,rel_error")?;
    for r in rows {
        writeln!(
            out,
            "{:.16e},{},{},{:.16e},{:.16e},{:.16e}",
            r.p, r.l, r.realization_id, r.sigma2, r.empirical, r.rel_error
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Least-squares slope of ln(y) against ln(x).
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
