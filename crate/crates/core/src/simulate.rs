//! Stochastic simulation of the linear dynamics and the empirical σ²
//! estimator.
//!
//! The continuous sampler is exact: one step applies the true transition
//! matrix A = exp(−θ(I−C)dt) and adds a Gaussian innovation with the
//! integrated covariance Q = ζ² ∫₀^dt exp(−Mᵀs) exp(−Ms) ds, M = θ(I−C).
//! The component along ψ₀ is left to wander; σ² does not see it.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgen::{ConnectivityMatrix, DEFAULT_ZERO_MODE_TOL};
use crate::rng::{rng_from_seed, ChaCha8Rng};
use crate::spectral::{classify, SpectralSummary};
use crate::synccore::{DynamicsKind, DynamicsParams, Method, SyncEstimate};

/// Negative eigenvalues of Q down to this fraction of ‖Q‖ are clipped to 0.
pub const Q_CLIP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    #[default]
    Zeros,
    Given(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub params: DynamicsParams,
    /// Sampling interval; continuous dynamics only.
    pub dt: f64,
    /// Samples discarded before recording; `None` picks a default from the
    /// slowest relaxation rate (see [`default_burn_in`]).
    pub burn_in: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub initial_state: InitialState,
    /// Also require ρ(C·U) < 1, not just stationarity of the projected
    /// dynamics.
    #[serde(default = "yes")]
    pub strict_validity: bool,
}

fn yes() -> bool {
    true
}

impl SimulationConfig {
    pub fn new(params: DynamicsParams, samples: usize, seed: u64) -> Self {
        SimulationConfig {
            params,
            dt: 1.0,
            burn_in: None,
            samples,
            seed,
            initial_state: InitialState::Zeros,
            strict_validity: true,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = Some(burn_in);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.samples == 0 {
            return Err(Error::InvalidParameter("samples must be at least 1".into()));
        }
        if self.params.kind == DynamicsKind::Continuous && !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesBatch {
    /// One row per recorded sample, one column per node.
    pub data: DMatrix<f64>,
    pub config: SimulationConfig,
    pub burn_in_used: usize,
}

impl TimeSeriesBatch {
    pub fn samples(&self) -> usize {
        self.data.nrows()
    }

    pub fn n(&self) -> usize {
        self.data.ncols()
    }

    /// Header `t,x1,…,xN`, one row per sample. `t` counts from the first
    /// recorded sample, in time units for continuous dynamics and steps for
    /// discrete dynamics.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let n = self.n();
        let mut line = String::from("t");
        for i in 1..=n {
            line.push_str(&format!(",x{i}"));
        }
        writeln!(out, "{line}")?;
        for k in 0..self.samples() {
            line.clear();
            match self.config.params.kind {
                DynamicsKind::Continuous => line.push_str(&format!("{:.16e}", k as f64 * self.config.dt)),
                DynamicsKind::Discrete => line.push_str(&k.to_string()),
            }
            for i in 0..n {
                line.push_str(&format!(",{:.16e}", self.data[(k, i)]));
            }
            writeln!(out, "{line}")?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Exact one-step propagator and innovation covariance.
#[derive(Debug, Clone)]
pub struct OuDiscretization {
    pub transition: DMatrix<f64>,
    pub noise_cov: DMatrix<f64>,
}

/// A = exp(−M dt) and Q via one exponential of the block matrix
/// H = [[Mᵀ, ζ²I], [0, −M]]·dt: the lower-right block of exp(H) is A and
/// Q = Aᵀ·(upper-right block).
pub fn ou_discretization(c: &ConnectivityMatrix, params: &DynamicsParams, dt: f64) -> Result<OuDiscretization> {
    params.validate()?;
    let n = c.n();
    let m = (DMatrix::identity(n, n) - c.weights()) * params.theta;
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&(m.transpose() * dt));
    h.view_mut((0, n), (n, n))
        .copy_from(&(DMatrix::identity(n, n) * (params.zeta * params.zeta * dt)));
    h.view_mut((n, n), (n, n)).copy_from(&(&m * -dt));
    let e = h.exp();
    let transition = e.view((n, n), (n, n)).into_owned();
    let e12 = e.view((0, n), (n, n)).into_owned();
    let mut noise_cov = transition.tr_mul(&e12);
    crate::linalg::symmetrize(&mut noise_cov);
    if noise_cov.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite innovation covariance".into()));
    }
    Ok(OuDiscretization { transition, noise_cov })
}

/// F with F·Fᵀ = Q, from the eigen-decomposition of Q with tiny negative
/// eigenvalues clipped.
pub fn noise_factor(q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = q.clone().symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut f = eig.eigenvectors;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < -Q_CLIP_TOL * scale {
            return Err(Error::Numerical(format!(
                "innovation covariance is indefinite: eigenvalue {lambda:e} against norm {scale:e}"
            )));
        }
        let s = lambda.max(0.0).sqrt();
        f.column_mut(k).scale_mut(s);
    }
    Ok(f)
}

/// 10 relaxation times of the slowest projected mode, in samples.
/// Continuous: rate θ(1 − Re λ₁) per unit time; discrete: 1 − max|λ| per
/// step, both over non-zero-mode eigenvalues.
pub fn default_burn_in(summary: &SpectralSummary, params: &DynamicsParams, dt: f64) -> usize {
    let gap = match params.kind {
        DynamicsKind::Continuous => params.theta * dt * (1.0 - summary.re_lambda1.unwrap_or(0.0)),
        DynamicsKind::Discrete => {
            1.0 - summary.non_zero_mode().map(|z| z.norm()).fold(0.0, f64::max)
        }
    };
    10 * (1.0 / gap).ceil().max(1.0) as usize
}

fn admit(c: &ConnectivityMatrix, config: &SimulationConfig) -> Result<SpectralSummary> {
    config.validate()?;
    let summary = classify(c, DEFAULT_ZERO_MODE_TOL)?;
    let (ok, kind, detail) = match config.params.kind {
        DynamicsKind::Continuous => (
            summary.sync_continuous,
            "continuous",
            format!("max Re(lambda) = {:?} off the zero mode", summary.re_lambda1),
        ),
        DynamicsKind::Discrete => (
            summary.sync_discrete,
            "discrete",
            format!(
                "max |lambda| = {} off the zero mode",
                summary.non_zero_mode().map(|z| z.norm()).fold(0.0, f64::max)
            ),
        ),
    };
    if !ok {
        return Err(Error::NotSynchronizable { kind, detail });
    }
    if config.strict_validity {
        summary.require_valid()?;
    }
    if let InitialState::Given(x) = &config.initial_state {
        if x.len() != c.n() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "initial state needs {} finite entries, got {}",
                c.n(),
                x.len()
            )));
        }
    }
    Ok(summary)
}

fn initial(config: &SimulationConfig, n: usize) -> DVector<f64> {
    match &config.initial_state {
        InitialState::Zeros => DVector::zeros(n),
        InitialState::Given(x) => DVector::from_column_slice(x),
    }
}

/// Runs x ← x·A + noise (as columns: x ← Aᵀx + F·z) and records the states
/// after the burn-in.
fn run(
    at: &DMatrix<f64>,
    factor: &DMatrix<f64>,
    config: &SimulationConfig,
    burn_in: usize,
) -> Result<TimeSeriesBatch> {
    let n = at.nrows();
    let mut rng: ChaCha8Rng = rng_from_seed(config.seed);
    let mut x = initial(config, n);
    let mut next = DVector::zeros(n);
    let mut z = DVector::zeros(n);
    let mut data = DMatrix::zeros(config.samples, n);
    for step in 0..burn_in + config.samples {
        for v in z.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        next.gemv(1.0, at, &x, 0.0);
        next.gemv(1.0, factor, &z, 1.0);
        std::mem::swap(&mut x, &mut next);
        if step >= burn_in {
            data.row_mut(step - burn_in).copy_from(&x.transpose());
        }
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("simulated state became non-finite".into()));
    }
    Ok(TimeSeriesBatch {
        data,
        config: config.clone(),
        burn_in_used: burn_in,
    })
}

/// Exact-discretization sampling of the continuous dynamics at spacing dt.
pub fn simulate_ou_exact(c: &ConnectivityMatrix, config: &SimulationConfig) -> Result<TimeSeriesBatch> {
    if config.params.kind != DynamicsKind::Continuous {
        return Err(Error::InvalidParameter("simulate_ou_exact needs continuous dynamics".into()));
    }
    let summary = admit(c, config)?;
    let disc = ou_discretization(c, &config.params, config.dt)?;
    let factor = noise_factor(&disc.noise_cov)?;
    let burn_in = config
        .burn_in
        .unwrap_or_else(|| default_burn_in(&summary, &config.params, config.dt));
    run(&disc.transition.transpose(), &factor, config, burn_in)
}

/// Direct iteration x(t+1) = x(t)·C + ζ·r(t).
pub fn simulate_var(c: &ConnectivityMatrix, config: &SimulationConfig) -> Result<TimeSeriesBatch> {
    if config.params.kind != DynamicsKind::Discrete {
        return Err(Error::InvalidParameter("simulate_var needs discrete dynamics".into()));
    }
    let summary = admit(c, config)?;
    let n = c.n();
    let factor = DMatrix::identity(n, n) * config.params.zeta;
    let burn_in = config
        .burn_in
        .unwrap_or_else(|| default_burn_in(&summary, &config.params, 1.0));
    run(&c.weights().transpose(), &factor, config, burn_in)
}

/// Dispatches on the dynamics kind.
pub fn simulate(c: &ConnectivityMatrix, config: &SimulationConfig) -> Result<TimeSeriesBatch> {
    match config.params.kind {
        DynamicsKind::Continuous => simulate_ou_exact(c, config),
        DynamicsKind::Discrete => simulate_var(c, config),
    }
}

/// σ²(t) = (1/N) Σ_i (x_i − x̄)² for every recorded sample.
pub fn sigma2_series(data: &DMatrix<f64>) -> Vec<f64> {
    let n = data.ncols() as f64;
    data.row_iter()
        .map(|row| {
            let mean = row.sum() / n;
            row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalStats {
    pub mean: f64,
    /// Standard error treating samples as independent.
    pub naive_se: f64,
    /// Non-overlapping batch-means standard error, batch length ⌊√L⌋;
    /// equals `naive_se` below 16 samples.
    pub batch_se: f64,
}

/// Mean with naive and batch-means standard errors.
pub fn mean_with_errors(series: &[f64]) -> EmpiricalStats {
    let l = series.len();
    let mean = series.iter().sum::<f64>() / l as f64;
    let var = if l > 1 {
        series.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (l - 1) as f64
    } else {
        0.0
    };
    let naive_se = (var / l as f64).sqrt();
    let batch_se = if l < 16 {
        naive_se
    } else {
        let len = (l as f64).sqrt() as usize;
        let count = l / len;
        let means: Vec<f64> = (0..count)
            .map(|b| series[b * len..(b + 1) * len].iter().sum::<f64>() / len as f64)
            .collect();
        let grand = means.iter().sum::<f64>() / count as f64;
        let v = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (count - 1) as f64;
        (v / count as f64).sqrt()
    };
    EmpiricalStats { mean, naive_se, batch_se }
}

/// Time average of σ²(t) over the batch. `std_error` is the batch-means
/// standard error, since consecutive samples are correlated.
pub fn empirical_sigma2(batch: &TimeSeriesBatch) -> SyncEstimate {
    empirical_sigma2_of(&batch.data)
}

pub fn empirical_sigma2_of(data: &DMatrix<f64>) -> SyncEstimate {
    let stats = mean_with_errors(&sigma2_series(data));
    SyncEstimate {
        sigma2: stats.mean,
        method: Method::Empirical,
        terms_used: data.nrows(),
        residual: 0.0,
        std_error: Some(stats.batch_se),
    }
}

/// Second moment of the centered states, (1/L) Σ_t x_Uᵀ x_U; its
/// expectation is Ω_U once the projected dynamics are stationary.
pub fn projected_second_moment(data: &DMatrix<f64>) -> DMatrix<f64> {
    let centered = crate::linalg::right_center(data);
    centered.tr_mul(&centered) / data.nrows() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synccore::{omega_u_doubling, Truncation};

    fn half() -> ConnectivityMatrix {
        ConnectivityMatrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap()
    }

    fn sym3() -> ConnectivityMatrix {
        ConnectivityMatrix::from_rows(&[
            vec![0.2, 0.5, 0.3],
            vec![0.5, 0.1, 0.4],
            vec![0.3, 0.4, 0.3],
        ])
        .unwrap()
    }

    #[test]
    fn empirical_trivial_rows() {
        let one = DMatrix::from_row_slice(1, 4, &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(empirical_sigma2_of(&one).sigma2, 0.0);
        let pm = DMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        assert_eq!(empirical_sigma2_of(&pm).sigma2, 1.0);
        let two = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 2.0, 0.0]);
        assert_eq!(empirical_sigma2_of(&two).sigma2, 1.0);
    }

    #[test]
    fn translation_invariance() {
        let data = DMatrix::from_fn(50, 6, |r, c| ((r * 7 + c * 13) % 11) as f64 - 5.0);
        let shifted = DMatrix::from_fn(50, 6, |r, c| data[(r, c)] + 3.7 * r as f64 - 100.0);
        let a = empirical_sigma2_of(&data).sigma2;
        let b = empirical_sigma2_of(&shifted).sigma2;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn van_loan_matches_spectral_oracle() {
        let c = sym3();
        let (theta, zeta, dt) = (1.3, 0.7, 0.8);
        let params = DynamicsParams::continuous(theta, zeta);
        let d = ou_discretization(&c, &params, dt).unwrap();
        let eig = c.weights().clone().symmetric_eigen();
        let v = &eig.eigenvectors;
        let mu: Vec<f64> = eig.eigenvalues.iter().map(|l| theta * (1.0 - l)).collect();
        let a = v * DMatrix::from_diagonal(&DVector::from_iterator(3, mu.iter().map(|m| (-m * dt).exp())))
            * v.transpose();
        let q_diag = mu.iter().map(|&m| {
            if m.abs() < 1e-12 {
                zeta * zeta * dt
            } else {
                zeta * zeta * (1.0 - (-2.0 * m * dt).exp()) / (2.0 * m)
            }
        });
        let q = v * DMatrix::from_diagonal(&DVector::from_iterator(3, q_diag)) * v.transpose();
        assert!((&d.transition - a).abs().max() < 1e-12);
        let rel = (&d.noise_cov - &q).abs().max() / q.abs().max();
        assert!(rel < 1e-10, "{rel}");
    }

    #[test]
    fn van_loan_matches_quadrature_nonsymmetric() {
        let c = ConnectivityMatrix::from_rows(&[
            vec![0.1, 0.6, 0.2],
            vec![0.7, 0.0, 0.5],
            vec![0.2, 0.4, 0.3],
        ])
        .unwrap();
        let params = DynamicsParams::continuous(0.9, 1.1);
        let dt = 0.6;
        let d = ou_discretization(&c, &params, dt).unwrap();
        let m = (DMatrix::<f64>::identity(3, 3) - c.weights()) * params.theta;
        // Composite Simpson on ζ² exp(−Mᵀs)exp(−Ms).
        let k = 400;
        let h = dt / k as f64;
        let mut q = DMatrix::zeros(3, 3);
        for j in 0..=k {
            let w = if j == 0 || j == k { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
            let e = (&m * (-(j as f64) * h)).exp();
            q += e.tr_mul(&e) * w;
        }
        q *= params.zeta * params.zeta * h / 3.0;
        let rel = (&d.noise_cov - &q).abs().max() / q.abs().max();
        assert!(rel < 1e-10, "{rel}");
    }

    #[test]
    fn noise_factor_reproduces_q() {
        let q = DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.1, 0.5, 1.0, 0.2, 0.1, 0.2, 0.5]);
        let f = noise_factor(&q).unwrap();
        assert!((&f * f.transpose() - &q).abs().max() < 1e-14);
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -0.1]);
        assert!(matches!(noise_factor(&bad), Err(Error::Numerical(_))));
        let rank1 = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(noise_factor(&rank1).is_ok());
    }

    #[test]
    fn independent_ou_nodes() {
        // C = 0: decoupled nodes with stationary variance ζ²/(2θ).
        let c = ConnectivityMatrix::zeros(3);
        let params = DynamicsParams::continuous(2.0, 1.5);
        let batch = simulate_ou_exact(&c, &SimulationConfig::new(params, 100_000, 17)).unwrap();
        let expect = params.zeta * params.zeta / (2.0 * params.theta);
        for i in 0..3 {
            let col: Vec<f64> = batch.data.column(i).iter().map(|v| v * v).collect();
            let s = mean_with_errors(&col);
            assert!((s.mean - expect).abs() < 3.0 * s.batch_se, "{} vs {expect} ± {}", s.mean, s.batch_se);
        }
    }

    #[test]
    fn two_node_oracles() {
        let cont = SimulationConfig::new(DynamicsParams::continuous(1.0, 1.0), 100_000, 3);
        let e = empirical_sigma2(&simulate_ou_exact(&half(), &cont).unwrap());
        assert!((e.sigma2 - 0.25).abs() < 3.0 * e.std_error.unwrap(), "{e:?}");
        let disc = SimulationConfig::new(DynamicsParams::discrete(1.0), 100_000, 4);
        let e = empirical_sigma2(&simulate_var(&half(), &disc).unwrap());
        assert!((e.sigma2 - 0.5).abs() < 3.0 * e.std_error.unwrap(), "{e:?}");
    }

    #[test]
    fn var_with_zero_matrix_is_white_noise() {
        let zeta = 1.7;
        let config = SimulationConfig::new(DynamicsParams::discrete(zeta), 100_000, 5);
        let e = empirical_sigma2(&simulate_var(&ConnectivityMatrix::zeros(5), &config).unwrap());
        let expect = zeta * zeta * (1.0 - 1.0 / 5.0);
        assert!((e.sigma2 - expect).abs() < 3.0 * e.std_error.unwrap(), "{e:?}");
    }

    #[test]
    fn same_seed_same_batch() {
        let c = sym3();
        for params in [DynamicsParams::continuous(1.0, 1.0), DynamicsParams::discrete(1.0)] {
            let config = SimulationConfig::new(params, 500, 99);
            let a = simulate(&c, &config).unwrap();
            let b = simulate(&c, &config).unwrap();
            assert_eq!(a, b);
            let other = simulate(&c, &SimulationConfig { seed: 100, ..config }).unwrap();
            assert_ne!(a.data, other.data);
        }
    }

    #[test]
    fn projected_moment_tracks_omega_u() {
        let c = sym3();
        let params = DynamicsParams::continuous(1.0, 1.0);
        let batch = simulate_ou_exact(&c, &SimulationConfig::new(params, 200_000, 8)).unwrap();
        let omega = omega_u_doubling(&c, &params, Truncation::default()).unwrap().omega_u;
        let m = projected_second_moment(&batch.data);
        assert!((&m - &omega).abs().max() < 0.05 * omega.abs().max());
    }

    #[test]
    fn refuses_unstable_or_invalid_networks() {
        let cont = SimulationConfig::new(DynamicsParams::continuous(1.0, 1.0), 10, 0);
        let disc = SimulationConfig::new(DynamicsParams::discrete(1.0), 10, 0);
        let id = ConnectivityMatrix::identity(3);
        assert!(matches!(simulate(&id, &cont), Err(Error::NotSynchronizable { .. })));
        assert!(matches!(simulate(&id, &disc), Err(Error::NotSynchronizable { .. })));

        // Eigenvalue −1.5 off the zero mode: stationary in continuous time
        // but outside ρ(CU) < 1.
        let c = ConnectivityMatrix::from_rows(&[vec![-0.25, 1.25], vec![1.25, -0.25]]).unwrap();
        assert!(matches!(simulate(&c, &cont), Err(Error::OutsideValidity { .. })));
        assert!(matches!(simulate(&c, &disc), Err(Error::NotSynchronizable { .. })));
        let loose = SimulationConfig { strict_validity: false, ..cont };
        assert!(simulate(&c, &loose).is_ok());
    }

    #[test]
    fn config_validation() {
        let c = half();
        let mut cfg = SimulationConfig::new(DynamicsParams::continuous(1.0, 1.0), 0, 0);
        assert!(simulate(&c, &cfg).is_err());
        cfg.samples = 5;
        cfg.dt = 0.0;
        assert!(simulate(&c, &cfg).is_err());
        cfg.dt = 1.0;
        cfg.initial_state = InitialState::Given(vec![1.0]);
        assert!(simulate(&c, &cfg).is_err());
        cfg.initial_state = InitialState::Given(vec![1.0, 3.0]);
        assert!(simulate(&c, &cfg).is_ok());
        assert!(simulate_var(&c, &cfg).is_err());
    }

    #[test]
    fn csv_layout() {
        let config = SimulationConfig::new(DynamicsParams::continuous(1.0, 1.0), 3, 1).with_dt(0.5);
        let batch = simulate_ou_exact(&half(), &config).unwrap();
        let mut buf = Vec::new();
        batch.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x1,x2");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("5.0000000000000000e-1,"));
        assert_eq!(lines[1].split(',').count(), 3);
    }

    #[test]
    fn default_burn_in_scales_with_gap() {
        let s = classify(&half(), DEFAULT_ZERO_MODE_TOL).unwrap();
        assert_eq!(default_burn_in(&s, &DynamicsParams::continuous(1.0, 1.0), 1.0), 10);
        assert_eq!(default_burn_in(&s, &DynamicsParams::continuous(1.0, 1.0), 0.1), 100);
        assert_eq!(default_burn_in(&s, &DynamicsParams::discrete(1.0), 1.0), 10);
    }
}
