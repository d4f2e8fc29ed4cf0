use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use linsync_core::experiment::{
    log_log_slope, run_converge, run_sweep, summarize, write_converge_rows, write_converge_summary,
    write_sweep_rows, write_sweep_summary, ConvergeSpec, SweepSpec,
};
use linsync_core::motifs::motif_ledger_converged;
use linsync_core::netgen::{check_zero_mode, generate as generate_network, read_matrix, write_matrix, RingEnsembleParams};
use linsync_core::simulate::{empirical_sigma2, simulate as run_simulation, SimulationConfig};
use linsync_core::synccore::{sigma2, sigma2_symmetric, DynamicsKind, DynamicsParams, Method, Truncation};
use linsync_core::{classify, ConnectivityMatrix, Error as CoreError};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};
use crate::{AnalyzeArgs, ConvergeArgs, DynamicsArgs, GenerateArgs, SimulateArgs, SweepArgs};

const SYMMETRY_TOL: f64 = 1e-12;

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x:e}"))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Core I/O errors get the offending path attached; everything else passes
/// through.
fn at_path(path: &Path) -> impl Fn(CoreError) -> CliError + '_ {
    move |e| match e {
        CoreError::Io(source) => CliError::io(path.display().to_string(), source),
        other => CliError::Core(other),
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path.display().to_string(), e))
}

fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_matrix(path: &Path) -> CliResult<ConnectivityMatrix> {
    read_matrix(path).map_err(at_path(path))
}

pub fn generate(a: &GenerateArgs) -> CliResult<()> {
    let params = RingEnsembleParams::new(a.n, a.d, a.c, a.p, a.seed);
    let c = generate_network(&params)?;
    write_matrix(&c, &a.out).map_err(at_path(&a.out))?;
    let zm = check_zero_mode(&c, linsync_core::netgen::DEFAULT_ZERO_MODE_TOL);
    let summary = classify(&c, linsync_core::netgen::DEFAULT_ZERO_MODE_TOL)?;
    println!("wrote {} (n = {})", a.out.display(), c.n());
    println!("zero-mode residual: {:e}", zm.residual);
    println!("rho_CU: {}", summary.rho_cu);
    println!("valid (rho_CU < 1): {}", yes_no(summary.is_valid()));
    Ok(())
}

pub fn analyze(a: &AnalyzeArgs) -> CliResult<()> {
    let c = load_matrix(&a.matrix)?;
    let params = a.dynamics.params();
    params.validate()?;
    let method: Method = a.method.parse()?;
    if method == Method::Empirical {
        return Err(CliError::Usage("use `simulate` for empirical estimates".into()));
    }
    let trunc = Truncation::new(a.tol, a.max_terms);

    let zm = check_zero_mode(&c, a.zero_mode_tol);
    let summary = classify(&c, a.zero_mode_tol)?;
    let symmetric = c.is_symmetric(SYMMETRY_TOL);
    println!("network: {} (n = {}, symmetric: {})", a.matrix.display(), c.n(), yes_no(symmetric));
    println!("zero mode: {} (residual {:e})", yes_no(zm.has_zero_mode), zm.residual);
    println!("re_lambda1: {}", opt(summary.re_lambda1));
    println!("re_lambda2: {}", opt(summary.re_lambda2));
    println!("rho_CU: {}", summary.rho_cu);
    println!("synchronizable (continuous): {}", yes_no(summary.sync_continuous));
    println!("synchronizable (discrete): {}", yes_no(summary.sync_discrete));

    let (kind, sync) = match params.kind {
        DynamicsKind::Continuous => ("continuous", summary.sync_continuous),
        DynamicsKind::Discrete => ("discrete", summary.sync_discrete),
    };
    if !sync {
        println!("verdict: not synchronizable");
        return Err(CliError::Verdict(format!("network is not synchronizable under {kind} dynamics")));
    }
    if !summary.is_valid() {
        println!("verdict: outside validity (rho_CU >= 1), sigma2 not computed");
        return Err(CliError::Verdict(format!("rho_CU = {} is not below 1", summary.rho_cu)));
    }
    println!("verdict: synchronizable");

    let est = sigma2(&c, &params, trunc, method)?;
    println!("sigma2: {}", est.sigma2);
    println!("method: {}", est.method.as_str());
    println!("terms: {}", est.terms_used);
    println!("residual: {:e}", est.residual);

    if symmetric && summary.has_zero_mode() && c.n() > 1 {
        let closed = sigma2_symmetric(&c, &params)?.sigma2;
        println!("closed form: {closed}");
        println!("closed form rel. difference: {:e}", ((est.sigma2 - closed) / closed).abs());
        println!("kemeny constant: {}", summary.kemeny_constant()?);
    }

    if let Some(path) = &a.motifs {
        let (ledger, converged) = motif_ledger_converged(&c, &params, trunc)?;
        let mut out = create(path)?;
        ledger.write_csv(&mut out).map_err(at_path(path))?;
        println!(
            "motif ledger: {} ({} orders, converged: {})",
            path.display(),
            ledger.len(),
            yes_no(converged)
        );
    }
    Ok(())
}

fn read_spec(path: Option<&PathBuf>) -> CliResult<Map<String, Value>> {
    let Some(path) = path else { return Ok(Map::new()) };
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(shown.clone(), e))?;
    match serde_json::from_str(&text).map_err(|e| CliError::Spec { path: shown.clone(), source: e })? {
        Value::Object(m) => Ok(m),
        _ => Err(CliError::Usage(format!("{shown}: spec must be a JSON object"))),
    }
}

fn set<T: serde::Serialize>(spec: &mut Map<String, Value>, key: &str, v: Option<T>) {
    if let Some(v) = v {
        spec.insert(key.to_string(), serde_json::to_value(v).expect("plain data serializes"));
    }
}

/// Decode a sub-object of the spec (or start from its default) and let
/// `apply` override fields.
fn overlay<T>(spec: &mut Map<String, Value>, key: &str, apply: impl FnOnce(&mut T)) -> CliResult<()>
where
    T: serde::Serialize + serde::de::DeserializeOwned + Default,
{
    let mut v: T = match spec.remove(key) {
        Some(raw) => serde_json::from_value(raw).map_err(|e| CliError::Spec { path: key.into(), source: e })?,
        None => T::default(),
    };
    apply(&mut v);
    set(spec, key, Some(v));
    Ok(())
}

fn overlay_dynamics(spec: &mut Map<String, Value>, d: &DynamicsArgs) -> CliResult<()> {
    overlay(spec, "dynamics", |p: &mut DynamicsParams| {
        if let Some(k) = d.kind {
            p.kind = k.into();
        }
        if let Some(t) = d.theta {
            p.theta = t;
        }
        if let Some(z) = d.zeta {
            p.zeta = z;
        }
    })
}

fn finish_spec<T: serde::de::DeserializeOwned>(spec: Map<String, Value>) -> CliResult<T> {
    serde_json::from_value(Value::Object(spec)).map_err(|e| CliError::Spec {
        path: "spec".into(),
        source: e,
    })
}

fn summary_path(rows: &Path) -> PathBuf {
    let stem = rows.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    rows.with_file_name(format!("{stem}_summary.csv"))
}

pub fn sweep(a: &SweepArgs) -> CliResult<()> {
    let mut raw = read_spec(a.spec.as_ref())?;
    set(&mut raw, "n", a.n);
    set(&mut raw, "d", a.d);
    set(&mut raw, "c_values", a.c.clone());
    set(&mut raw, "p_values", a.p.clone());
    set(&mut raw, "realizations", a.realizations);
    set(&mut raw, "seed", a.seed);
    set(&mut raw, "low_orders", a.low_orders.clone());
    if let Some(m) = &a.method {
        set(&mut raw, "method", Some(m.parse::<Method>()?));
    }
    overlay_dynamics(&mut raw, &a.dynamics)?;
    overlay(&mut raw, "tolerances", |t: &mut Truncation| {
        if let Some(tol) = a.tol {
            t.tol = tol;
        }
        if let Some(m) = a.max_terms {
            t.max_terms = m;
        }
    })?;
    let spec: SweepSpec = finish_spec(raw)?;
    spec.validate()?;

    let rows_path = a.out.clone().or_else(|| spec.output_path.as_ref().map(PathBuf::from));
    let summary_out = a.summary.clone().or_else(|| rows_path.as_deref().map(summary_path));

    let rows = run_sweep(&spec)?;
    let summary = summarize(&rows);
    for s in &summary {
        eprintln!(
            "p = {}, c = {}: {} valid, {} discarded, mean sigma2 = {}",
            s.p,
            s.c,
            s.valid,
            s.discarded,
            opt(s.mean_sigma2)
        );
    }

    let mut out = sink(rows_path.as_deref())?;
    write_sweep_rows(&rows, &spec.low_orders, &mut out).map_err(at_path(rows_path.as_deref().unwrap_or(Path::new("stdout"))))?;
    if let Some(path) = summary_out {
        let mut out = create(&path)?;
        write_sweep_summary(&summary, &spec.low_orders, &mut out).map_err(at_path(&path))?;
    }
    Ok(())
}

pub fn converge(a: &ConvergeArgs) -> CliResult<()> {
    let mut raw = read_spec(a.spec.as_ref())?;
    set(&mut raw, "n", a.n);
    set(&mut raw, "d", a.d);
    set(&mut raw, "c", a.c);
    set(&mut raw, "p_values", a.p.clone());
    set(&mut raw, "l_values", a.l.clone());
    set(&mut raw, "realizations", a.realizations);
    set(&mut raw, "seed", a.seed);
    set(&mut raw, "dt", a.dt);
    set(&mut raw, "burn_in", a.burn_in);
    overlay_dynamics(&mut raw, &a.dynamics)?;
    let spec: ConvergeSpec = finish_spec(raw)?;
    spec.validate()?;

    let (rows, summary) = run_converge(&spec)?;
    for &p in &spec.p_values {
        let cells: Vec<_> = summary.iter().filter(|s| s.p == p && s.mean_rel_error > 0.0).collect();
        for s in &cells {
            eprintln!("p = {}, L = {}: mean rel. error {:e}", s.p, s.l, s.mean_rel_error);
        }
        if cells.len() >= 2 {
            let l: Vec<f64> = cells.iter().map(|s| s.l as f64).collect();
            let e: Vec<f64> = cells.iter().map(|s| s.mean_rel_error).collect();
            eprintln!("p = {p}: log-log slope {:.3}", log_log_slope(&l, &e));
        }
    }

    let mut out = sink(a.out.as_deref())?;
    write_converge_summary(&summary, &mut out).map_err(at_path(a.out.as_deref().unwrap_or(Path::new("stdout"))))?;
    if let Some(path) = &a.rows {
        let mut out = create(path)?;
        write_converge_rows(&rows, &mut out).map_err(at_path(path))?;
    }
    Ok(())
}

pub fn simulate(a: &SimulateArgs) -> CliResult<()> {
    let c = load_matrix(&a.matrix)?;
    let mut config = SimulationConfig::new(a.dynamics.params(), a.samples, a.seed).with_dt(a.dt);
    if let Some(b) = a.burn_in {
        config = config.with_burn_in(b);
    }
    config.strict_validity = !a.allow_outside_validity;
    let batch = run_simulation(&c, &config)?;
    let est = empirical_sigma2(&batch);
    eprintln!(
        "empirical sigma2 = {} (batch-means SE {}), burn-in {}",
        est.sigma2,
        opt(est.std_error),
        batch.burn_in_used
    );
    let mut out = sink(a.out.as_deref())?;
    batch
        .write_csv(&mut out)
        .map_err(at_path(a.out.as_deref().unwrap_or(Path::new("stdout"))))?;
    Ok(())
}
