#![allow(dead_code)]

use linsync_core::linalg::{centering_apply, spectral_radius};
use linsync_core::rng::ChaCha8Rng;
use linsync_core::ConnectivityMatrix;
use nalgebra::DMatrix;
use rand::Rng;

/// C = G + B with B a centered random matrix rescaled to ρ(B) = `rho`.
/// Column sums are one, so ψ₀ is a zero mode and C·U = B.
pub fn zero_mode_network(rng: &mut ChaCha8Rng, n: usize, rho: f64, symmetric: bool) -> ConnectivityMatrix {
    let mut m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    if symmetric {
        m = (&m + m.transpose()) * 0.5;
    }
    let b = centering_apply(&m);
    let r = spectral_radius(&b).unwrap();
    let b = if r > 0.0 { b * (rho / r) } else { b };
    let g = DMatrix::from_element(n, n, 1.0 / n as f64);
    let mut c = &b + g;
    if symmetric {
        c = (&c + c.transpose()) * 0.5;
    }
    ConnectivityMatrix::new(c).unwrap()
}

/// Same construction with ρ(C·U) pushed to `rho` ≥ 1 starting from an
/// arbitrary network's projected part.
pub fn rescaled_projection(c: &ConnectivityMatrix, rho: f64) -> ConnectivityMatrix {
    let n = c.n();
    let b = centering_apply(c.weights());
    let r = spectral_radius(&b).unwrap();
    let g = DMatrix::from_element(n, n, 1.0 / n as f64);
    ConnectivityMatrix::new(b * (rho / r) + g).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
