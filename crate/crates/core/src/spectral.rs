//! Spectrum of the connectivity matrix: zero-mode exclusion, synchronization
//! conditions, extremal-eigenvalue heuristics and the symmetric closed forms.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::linalg::{self, right_center};
use crate::netgen::{check_zero_mode, ConnectivityMatrix};

/// Eigenvalues closer than this to a stability boundary count as on it.
/// Multiple eigenvalues at 1 (disconnected components) are only resolved to
/// a few ulps and would otherwise pass a strict `< 1` test.
pub const STABILITY_MARGIN: f64 = 1e-9;

/// Largest |Im λ| still treated as a real eigenvalue by the closed forms.
pub const REAL_SPECTRUM_TOL: f64 = 1e-9;

/// Eigenvalues of `c`, see [`linalg::eigenvalues`].
pub fn eigenvalues(c: &ConnectivityMatrix) -> Result<Vec<Complex<f64>>> {
    linalg::eigenvalues(c.weights())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<Complex<f64>>,
    /// Index into `eigenvalues` of the eigenvalue paired with ψ₀.
    pub zero_mode_index: Option<usize>,
    /// Largest real part after zero-mode exclusion.
    pub re_lambda1: Option<f64>,
    /// Second entry of the real-part-sorted list (duplicates kept).
    pub re_lambda2: Option<f64>,
    /// ρ(C·U).
    pub rho_cu: f64,
    /// max Re λ < 1 over non-zero-mode eigenvalues.
    pub sync_continuous: bool,
    /// max |λ| < 1 over non-zero-mode eigenvalues.
    pub sync_discrete: bool,
}

impl SpectralSummary {
    /// Summary from a known spectrum. ρ(C·U) is taken from the spectrum with
    /// the zero-mode eigenvalue replaced by 0.
    pub fn from_spectrum(eigenvalues: Vec<Complex<f64>>, zero_mode_index: Option<usize>) -> Self {
        let rho_cu = eigenvalues
            .iter()
            .enumerate()
            .filter(|(k, _)| Some(*k) != zero_mode_index)
            .map(|(_, z)| z.norm())
            .fold(0.0, f64::max);
        Self::assemble(eigenvalues, zero_mode_index, rho_cu)
    }

    fn assemble(eigenvalues: Vec<Complex<f64>>, zero_mode_index: Option<usize>, rho_cu: f64) -> Self {
        let mut re: Vec<f64> = eigenvalues
            .iter()
            .enumerate()
            .filter(|(k, _)| Some(*k) != zero_mode_index)
            .map(|(_, z)| z.re)
            .collect();
        re.sort_by(|a, b| b.total_cmp(a));
        let max_abs = eigenvalues
            .iter()
            .enumerate()
            .filter(|(k, _)| Some(*k) != zero_mode_index)
            .map(|(_, z)| z.norm())
            .fold(0.0, f64::max);
        SpectralSummary {
            sync_continuous: re.first().is_none_or(|&r| r < 1.0 - STABILITY_MARGIN),
            sync_discrete: max_abs < 1.0 - STABILITY_MARGIN,
            re_lambda1: re.first().copied(),
            re_lambda2: re.get(1).copied(),
            rho_cu,
            zero_mode_index,
            eigenvalues,
        }
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn has_zero_mode(&self) -> bool {
        self.zero_mode_index.is_some()
    }

    /// Eigenvalues with the zero mode removed.
    pub fn non_zero_mode(&self) -> impl Iterator<Item = Complex<f64>> + '_ {
        let skip = self.zero_mode_index;
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(move |(k, _)| Some(*k) != skip)
            .map(|(_, z)| *z)
    }

    /// ρ(C·U) < 1: the projected power series converge.
    pub fn is_valid(&self) -> bool {
        self.rho_cu < 1.0 - STABILITY_MARGIN
    }

    /// Error naming ρ(C·U) unless the network lies in the series domain.
    pub fn require_valid(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::OutsideValidity {
                quantity: "rho(CU)",
                value: self.rho_cu,
            })
        }
    }

    /// Real non-zero-mode eigenvalues for the symmetric closed forms.
    fn real_non_zero_mode(&self) -> Result<Vec<f64>> {
        if !self.has_zero_mode() {
            return Err(Error::NoZeroMode);
        }
        let max_im = self.non_zero_mode().map(|z| z.im.abs()).fold(0.0, f64::max);
        if max_im > REAL_SPECTRUM_TOL {
            return Err(Error::ComplexSpectrum(max_im));
        }
        Ok(self.non_zero_mode().map(|z| z.re).collect())
    }

    /// Σ_{λ≠λ₀} 1/(1−λ).
    pub fn kemeny_constant(&self) -> Result<f64> {
        kemeny_from_eigenvalues(&self.real_non_zero_mode()?)
    }

    /// (1/2N) Σ_{λ≠λ₀} 1/(1−λ) for symmetric C with θ = ζ = 1.
    pub fn sigma2_symmetric_continuous(&self) -> Result<f64> {
        Ok(self.kemeny_constant()? / (2.0 * self.n() as f64))
    }

    /// (1/N) Σ_{λ≠λ₀} 1/(1−λ²) for symmetric C with ζ = 1.
    pub fn sigma2_symmetric_discrete(&self) -> Result<f64> {
        sigma2_symmetric_discrete_from(&self.real_non_zero_mode()?, self.n())
    }
}

/// Σ 1/(1−λ) over the given (non-zero-mode) eigenvalues.
pub fn kemeny_from_eigenvalues(eigs: &[f64]) -> Result<f64> {
    eigs.iter().try_fold(0.0, |acc, &l| {
        if l >= 1.0 - STABILITY_MARGIN {
            Err(Error::Divergent { eigenvalue: l })
        } else {
            Ok(acc + 1.0 / (1.0 - l))
        }
    })
}

/// (1/2N) Σ 1/(1−λ); identical summation to [`kemeny_from_eigenvalues`].
pub fn sigma2_symmetric_continuous_from(eigs: &[f64], n: usize) -> Result<f64> {
    Ok(kemeny_from_eigenvalues(eigs)? / (2.0 * n as f64))
}

/// (1/N) Σ 1/(1−λ²).
pub fn sigma2_symmetric_discrete_from(eigs: &[f64], n: usize) -> Result<f64> {
    let sum = eigs.iter().try_fold(0.0, |acc, &l| {
        if l.abs() >= 1.0 - STABILITY_MARGIN {
            Err(Error::Divergent { eigenvalue: l })
        } else {
            Ok(acc + 1.0 / (1.0 - l * l))
        }
    })?;
    Ok(sum / n as f64)
}

/// Full spectral classification of `c`.
///
/// The zero mode is present when ψ₀ is a left eigenvector with eigenvalue 1
/// (every column sum within `tol` of 1). It is then paired with the computed
/// eigenvalue nearest to the mean column sum; with a repeated eigenvalue at 1
/// exactly one copy is excluded. ρ(C·U) is computed from the spectrum of
/// C·U itself rather than from the shifted spectrum.
pub fn classify(c: &ConnectivityMatrix, tol: f64) -> Result<SpectralSummary> {
    let eigenvalues = eigenvalues(c)?;
    let zero = check_zero_mode(c, tol);
    let zero_mode_index = if zero.has_zero_mode {
        let target = Complex::new(zero.eigenvalue_at_zero_mode, 0.0);
        let (k, dist) = eigenvalues
            .iter()
            .enumerate()
            .map(|(k, z)| (k, (z - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty spectrum");
        // Eigenvalue 1 may be defective; its computed copies then scatter
        // by O(sqrt(eps)).
        if dist > 1e-6_f64.max(10.0 * tol) {
            return Err(Error::Numerical(format!(
                "psi0 is a left eigenvector with eigenvalue {} but the nearest computed eigenvalue is {} away",
                zero.eigenvalue_at_zero_mode, dist
            )));
        }
        Some(k)
    } else {
        None
    };
    let rho_cu = linalg::spectral_radius(&right_center(c.weights()))?;
    Ok(SpectralSummary::assemble(eigenvalues, zero_mode_index, rho_cu))
}
