//! Projected covariance Ω_U and the distance from synchronization σ².
//!
//! All solvers work on B = C·U and compute Ω_U up to its prefactor
//! (ζ²/2θ continuous, ζ² discrete), which is applied at the end so that the
//! scale law in θ and ζ is exact.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, congruence, max_norm, right_center, symmetrize};
use crate::netgen::ConnectivityMatrix;
use crate::spectral::STABILITY_MARGIN;

pub use crate::linalg::centering_apply;

/// Partial-sum norms above this are treated as divergence.
const BLOW_UP: f64 = 1e150;

/// Doubling never needs more steps than this (2⁶⁴ series terms).
const MAX_DOUBLING_STEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DynamicsKind {
    Continuous,
    Discrete,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsParams {
    pub kind: DynamicsKind,
    /// Reversion rate; ignored for discrete dynamics.
    #[serde(default = "one")]
    pub theta: f64,
    #[serde(default = "one")]
    pub zeta: f64,
}

fn one() -> f64 {
    1.0
}

impl DynamicsParams {
    pub fn continuous(theta: f64, zeta: f64) -> Self {
        DynamicsParams {
            kind: DynamicsKind::Continuous,
            theta,
            zeta,
        }
    }

    pub fn discrete(zeta: f64) -> Self {
        DynamicsParams {
            kind: DynamicsKind::Discrete,
            theta: 1.0,
            zeta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.zeta > 0.0 && self.zeta.is_finite()) {
            return Err(Error::InvalidParameter(format!("zeta must be positive, got {}", self.zeta)));
        }
        if self.kind == DynamicsKind::Continuous && !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(Error::InvalidParameter(format!("theta must be positive, got {}", self.theta)));
        }
        Ok(())
    }

    /// ζ²/2θ (continuous) or ζ² (discrete).
    pub fn prefactor(&self) -> f64 {
        match self.kind {
            DynamicsKind::Continuous => self.zeta * self.zeta / (2.0 * self.theta),
            DynamicsKind::Discrete => self.zeta * self.zeta,
        }
    }
}

impl Default for DynamicsParams {
    fn default() -> Self {
        Self::continuous(1.0, 1.0)
    }
}

/// Relative term tolerance and term budget for the series-type solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            tol: 1e-10,
            max_terms: 10_000,
        }
    }
}

impl Truncation {
    pub fn new(tol: f64, max_terms: usize) -> Self {
        Truncation { tol, max_terms }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_terms == 0 {
            return Err(Error::InvalidParameter(format!(
                "truncation needs tol > 0 and max_terms ≥ 1, got {} and {}",
                self.tol, self.max_terms
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    FixedPoint,
    /// Squared-power doubling of the series (Smith iteration); the
    /// continuous case goes through a Cayley transform first.
    Doubling,
    SymmetricClosedForm,
    MotifExpansion,
    Empirical,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::FixedPoint => "fixed_point",
            Method::Doubling => "doubling",
            Method::SymmetricClosedForm => "symmetric_closed_form",
            Method::MotifExpansion => "motif_expansion",
            Method::Empirical => "empirical",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "series" => Method::Series,
            "fixed_point" | "fixed-point" => Method::FixedPoint,
            "doubling" => Method::Doubling,
            "symmetric_closed_form" | "closed-form" => Method::SymmetricClosedForm,
            "motif_expansion" | "motifs" => Method::MotifExpansion,
            "empirical" => Method::Empirical,
            other => return Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedCovariance {
    pub omega_u: DMatrix<f64>,
    pub terms_used: usize,
    /// Max-norm of the last included term, in the units of `omega_u`.
    pub residual_norm: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyncEstimate {
    pub sigma2: f64,
    pub method: Method,
    pub terms_used: usize,
    pub residual: f64,
    /// Only set for empirical estimates.
    pub std_error: Option<f64>,
}

/// Raw sum with convergence bookkeeping; the prefactor is not applied.
struct Accumulated {
    sum: DMatrix<f64>,
    terms: usize,
    last_norm: f64,
    converged: bool,
}

impl Accumulated {
    fn scaled(self, factor: f64) -> ProjectedCovariance {
        ProjectedCovariance {
            omega_u: self.sum * factor,
            terms_used: self.terms,
            residual_norm: self.last_norm * factor,
            converged: self.converged,
        }
    }
}

/// Σ_m S_m with S_0 = init, S_m = (AᵀS_{m−1} + S_{m−1}A)/2.
/// S stays symmetric, so AᵀS = (SA)ᵀ and one product per term suffices.
fn accumulate_continuous(a: &DMatrix<f64>, init: DMatrix<f64>, trunc: Truncation) -> Accumulated {
    let mut sum = init.clone();
    let mut s = init;
    let mut last_norm = max_norm(&s);
    let mut terms = 1;
    while terms < trunc.max_terms {
        if last_norm <= trunc.tol * max_norm(&sum) {
            return Accumulated { sum, terms, last_norm, converged: true };
        }
        let sa = &s * a;
        s = (&sa + sa.transpose()) * 0.5;
        sum += &s;
        last_norm = max_norm(&s);
        terms += 1;
        if !last_norm.is_finite() || last_norm > BLOW_UP {
            return Accumulated { sum, terms, last_norm, converged: false };
        }
    }
    let converged = last_norm <= trunc.tol * max_norm(&sum);
    Accumulated { sum, terms, last_norm, converged }
}

/// Σ_u (Aᵘ)ᵀ·init·Aᵘ.
fn accumulate_discrete(a: &DMatrix<f64>, init: DMatrix<f64>, trunc: Truncation) -> Accumulated {
    let mut sum = init.clone();
    let mut t = init;
    let mut last_norm = max_norm(&t);
    let mut terms = 1;
    while terms < trunc.max_terms {
        if last_norm <= trunc.tol * max_norm(&sum) {
            return Accumulated { sum, terms, last_norm, converged: true };
        }
        t = congruence(a, &t);
        sum += &t;
        last_norm = max_norm(&t);
        terms += 1;
        if !last_norm.is_finite() || last_norm > BLOW_UP {
            return Accumulated { sum, terms, last_norm, converged: false };
        }
    }
    let converged = last_norm <= trunc.tol * max_norm(&sum);
    Accumulated { sum, terms, last_norm, converged }
}

fn rho_cu(b: &DMatrix<f64>) -> Result<f64> {
    linalg::spectral_radius(b)
}

fn check_validity(b: &DMatrix<f64>) -> Result<()> {
    let rho = rho_cu(b)?;
    if rho < 1.0 - STABILITY_MARGIN {
        Ok(())
    } else {
        Err(Error::OutsideValidity {
            quantity: "rho(CU)",
            value: rho,
        })
    }
}

/// Power series for Ω_U without the validity check. Outside ρ(CU) < 1 the
/// partial sums grow and the result comes back with `converged = false`.
pub fn omega_u_series_unchecked(
    c: &ConnectivityMatrix,
    params: &DynamicsParams,
    trunc: Truncation,
) -> Result<ProjectedCovariance> {
    params.validate()?;
    trunc.validate()?;
    let b = right_center(c.weights());
    let u = linalg::centering_matrix(c.n());
    let acc = match params.kind {
        DynamicsKind::Continuous => accumulate_continuous(&b, u, trunc),
        DynamicsKind::Discrete => accumulate_discrete(&b, u, trunc),
    };
    Ok(acc.scaled(params.prefactor()))
}

/// Ω_U by its power series in B = C·U, summed in order of increasing total
/// order until the newest term is below `tol` times the partial sum.
pub fn omega_u_series(
    c: &ConnectivityMatrix,
    params: &DynamicsParams,
    trunc: Truncation,
) -> Result<ProjectedCovariance> {
    check_validity(&right_center(c.weights()))?;
    omega_u_series_unchecked(c, params, trunc)
}

/// Ω_U by iterating its defining recurrence from Ω⁰ = prefactor·U:
/// 2Ω = 2U + BᵀΩ + ΩB (continuous, up to ζ²/2θ) or Ω = BᵀΩB + U (discrete,
/// up to ζ²). Stops when successive iterates differ by ≤ tol·‖Ω‖.
pub fn omega_u_fixed_point(
    c: &ConnectivityMatrix,
    params: &DynamicsParams,
    trunc: Truncation,
) -> Result<ProjectedCovariance> {
    params.validate()?;
    trunc.validate()?;
    let b = right_center(c.weights());
    check_validity(&b)?;
    let u = linalg::centering_matrix(c.n());
    let mut omega = u.clone();
    let mut iters = 1;
    let mut change = f64::INFINITY;
    while iters < trunc.max_terms {
        let next = match params.kind {
            DynamicsKind::Continuous => {
                let ob = &omega * &b;
                (&u * 2.0 + &ob + ob.transpose()) * 0.5
            }
            DynamicsKind::Discrete => congruence(&b, &omega) + &u,
        };
        change = max_norm(&(&next - &omega));
        omega = next;
        iters += 1;
        if !change.is_finite() || max_norm(&omega) > BLOW_UP {
            break;
        }
        if change <= trunc.tol * max_norm(&omega) {
            break;
        }
    }
    let converged = change <= trunc.tol * max_norm(&omega);
    Ok(Accumulated {
        sum: omega,
        terms: iters,
        last_norm: change,
        converged,
    }
    .scaled(params.prefactor()))
}

/// Doubling on the discrete-form equation X = AᵀXA + Q: after k steps X holds
/// 2ᵏ series terms.
fn doubling(mut a: DMatrix<f64>, mut x: DMatrix<f64>, tol: f64) -> Accumulated {
    let mut steps = 0;
    let mut last_norm = f64::INFINITY;
    while steps < MAX_DOUBLING_STEPS {
        let term = congruence(&a, &x);
        last_norm = max_norm(&term);
        x += &term;
        steps += 1;
        if !last_norm.is_finite() || max_norm(&x) > BLOW_UP {
            break;
        }
        if last_norm <= tol * max_norm(&x) {
            break;
        }
        a = &a * &a;
    }
    let converged = last_norm <= tol * max_norm(&x);
    Accumulated {
        sum: x,
        terms: steps,
        last_norm,
        converged,
    }
}

/// Ω_U by doubling. The continuous equation (B−I)ᵀY + Y(B−I) + 2U = 0 is
/// first mapped to X = AᵀXA + Q̃ with P = (2I−B)⁻¹, A = BP, Q̃ = 4PᵀUP.
pub fn omega_u_doubling(
    c: &ConnectivityMatrix,
    params: &DynamicsParams,
    trunc: Truncation,
) -> Result<ProjectedCovariance> {
    params.validate()?;
    trunc.validate()?;
    let n = c.n();
    let b = right_center(c.weights());
    check_validity(&b)?;
    let u = linalg::centering_matrix(n);
    let mut acc = match params.kind {
        DynamicsKind::Discrete => doubling(b, u, trunc.tol),
        DynamicsKind::Continuous => {
            let shifted = DMatrix::identity(n, n) * 2.0 - &b;
            let p = shifted
                .try_inverse()
                .ok_or_else(|| Error::Numerical("2I - CU is singular".into()))?;
            let a = &b * &p;
            let q = congruence(&p, &u) * 4.0;
            doubling(a, q, trunc.tol)
        }
    };
    symmetrize(&mut acc.sum);
    Ok(acc.scaled(params.prefactor()))
}

/// Covariance of the unprojected state, Σ over powers of C itself. Needs
/// ρ(C) < 1, which rules out a zero mode.
pub fn omega_unprojected(
    c: &ConnectivityMatrix,
    params: &DynamicsParams,
    trunc: Truncation,
) -> Result<DMatrix<f64>> {
    params.validate()?;
    trunc.validate()?;
    let rho = linalg::spectral_radius(c.weights())?;
    if rho >= 1.0 - STABILITY_MARGIN {
        return Err(Error::OutsideValidity {
            quantity: "rho(C)",
            value: rho,
        });
    }
    let id = DMatrix::identity(c.n(), c.n());
    let acc = match params.kind {
        DynamicsKind::Continuous => accumulate_continuous(c.weights(), id, trunc),
        DynamicsKind::Discrete => accumulate_discrete(c.weights(), id, trunc),
    };
    if !acc.converged {
        return Err(Error::NotConverged {
            terms: acc.terms,
            residual: acc.last_norm,
        });
    }
    Ok(acc.sum * params.prefactor())
}

/// Mean of the diagonal, mean of all entries, and their difference. For a
/// projected covariance the middle value vanishes and the difference is σ².
pub fn covariance_difference(omega: &DMatrix<f64>) -> (f64, f64, f64) {
    let n = omega.nrows() as f64;
    let diag = omega.trace() / n;
    let all = linalg::entry_sum(omega) / (n * n);
    (diag, all, diag - all)
}

/// σ² = trace(Ω_U)/N from a converged projected covariance.
pub fn sigma2_from_omega(pc: &ProjectedCovariance, method: Method) -> Result<SyncEstimate> {
    if !pc.converged {
        return Err(Error::NotConverged {
            terms: pc.terms_used,
            residual: pc.residual_norm,
        });
    }
    let n = pc.omega_u.nrows() as f64;
    Ok(SyncEstimate {
        sigma2: pc.omega_u.trace() / n,
        method,
        terms_used: pc.terms_used,
        residual: pc.residual_norm,
        std_error: None,
    })
}

/// Steady-state distance from synchronization of `c` under `params`.
pub fn sigma2(
    c: &ConnectivityMatrix,
    params: &DynamicsParams,
    trunc: Truncation,
    method: Method,
) -> Result<SyncEstimate> {
    params.validate()?;
    trunc.validate()?;
    if c.n() == 1 {
        return Ok(SyncEstimate {
            sigma2: 0.0,
            method,
            terms_used: 0,
            residual: 0.0,
            std_error: None,
        });
    }
    match method {
        Method::Series => sigma2_from_omega(&omega_u_series(c, params, trunc)?, method),
        Method::FixedPoint => sigma2_from_omega(&omega_u_fixed_point(c, params, trunc)?, method),
        Method::Doubling => sigma2_from_omega(&omega_u_doubling(c, params, trunc)?, method),
        Method::SymmetricClosedForm => sigma2_symmetric(c, params),
        Method::MotifExpansion => crate::motifs::motif_sigma2_full(c, params, trunc),
        Method::Empirical => Err(Error::InvalidParameter(
            "empirical estimates come from simulated time series".into(),
        )),
    }
}

/// Eigenvalue closed form for symmetric `c` with a zero mode, scaled to
/// `params`.
pub fn sigma2_symmetric(c: &ConnectivityMatrix, params: &DynamicsParams) -> Result<SyncEstimate> {
    params.validate()?;
    if !c.is_symmetric(1e-12) {
        return Err(Error::InvalidParameter("closed form needs a symmetric matrix".into()));
    }
    let summary = crate::spectral::classify(c, crate::netgen::DEFAULT_ZERO_MODE_TOL)?;
    summary.require_valid()?;
    let z2 = params.zeta * params.zeta;
    let sigma2 = match params.kind {
        DynamicsKind::Continuous => summary.sigma2_symmetric_continuous()? * z2 / params.theta,
        DynamicsKind::Discrete => summary.sigma2_symmetric_discrete()? * z2,
    };
    Ok(SyncEstimate {
        sigma2,
        method: Method::SymmetricClosedForm,
        terms_used: summary.n().saturating_sub(1),
        residual: 0.0,
        std_error: None,
    })
}
