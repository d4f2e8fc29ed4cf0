//! Eigenvalues of a dense real nonsymmetric matrix.
//!
//! Balancing, Householder reduction to upper Hessenberg form, then the
//! Francis implicit double-shift QR iteration on the Hessenberg matrix.
//! Only eigenvalues are accumulated; no Schur vectors are formed.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

/// Iterations allowed per eigenvalue before giving up. Exceptional shifts
/// are applied every tenth iteration.
const MAX_ITERATIONS: usize = 60;

/// Square dense work matrix with 1-based indexing, which keeps the QR sweep
/// close to its textbook index ranges.
struct Work {
    n: usize,
    data: Vec<f64>,
}

impl Work {
    fn from_matrix(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut data = vec![0.0; (n + 1) * (n + 1)];
        for i in 0..n {
            for j in 0..n {
                data[(i + 1) * (n + 1) + (j + 1)] = m[(i, j)];
            }
        }
        Work { n, data }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.n + 1) + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        let n = self.n;
        self.data[i * (n + 1) + j] = v;
    }

    #[inline]
    fn sub(&mut self, i: usize, j: usize, v: f64) {
        let n = self.n;
        self.data[i * (n + 1) + j] -= v;
    }
}

/// Diagonal similarity scaling by powers of two so that row and column
/// norms are comparable. Eigenvalues are unchanged, rounding errors shrink.
fn balance(a: &mut Work) {
    const RADIX: f64 = 2.0;
    const SQRDX: f64 = RADIX * RADIX;
    let n = a.n;
    loop {
        let mut done = true;
        for i in 1..=n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 1..=n {
                if j != i {
                    c += a.at(j, i).abs();
                    r += a.at(i, j).abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= SQRDX;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= SQRDX;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        let v = a.at(i, j) * g;
                        a.set(i, j, v);
                    }
                    for j in 1..=n {
                        let v = a.at(j, i) * f;
                        a.set(j, i, v);
                    }
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Orthogonal similarity reduction to upper Hessenberg form.
fn hessenberg(a: &mut Work) {
    let n = a.n;
    if n < 3 {
        return;
    }
    let mut ort = vec![0.0; n + 1];
    for m in 2..n {
        let scale: f64 = (m..=n).map(|i| a.at(i, m - 1).abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut h = 0.0;
        for i in (m..=n).rev() {
            ort[i] = a.at(i, m - 1) / scale;
            h += ort[i] * ort[i];
        }
        let mut g = h.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        h -= ort[m] * g;
        ort[m] -= g;

        for j in m..=n {
            let mut f = 0.0;
            for i in (m..=n).rev() {
                f += ort[i] * a.at(i, j);
            }
            f /= h;
            for i in m..=n {
                a.sub(i, j, f * ort[i]);
            }
        }
        for i in 1..=n {
            let mut f = 0.0;
            for j in (m..=n).rev() {
                f += ort[j] * a.at(i, j);
            }
            f /= h;
            for j in m..=n {
                a.sub(i, j, f * ort[j]);
            }
        }
        a.set(m, m - 1, scale * g);
        for i in (m + 1)..=n {
            a.set(i, m - 1, 0.0);
        }
    }
}

#[inline]
fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; destroys `a`.
fn hqr(a: &mut Work) -> Result<Vec<Complex<f64>>> {
    let n = a.n;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a.at(i, j).abs();
        }
    }

    let mut nn = n;
    let mut t = 0.0;
    while nn >= 1 {
        let mut its = 0usize;
        loop {
            // Look for a single small subdiagonal element.
            let mut l = nn;
            while l >= 2 {
                let mut s = a.at(l - 1, l - 1).abs() + a.at(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a.at(l, l - 1).abs() <= f64::EPSILON * s {
                    a.set(l, l - 1, 0.0);
                    break;
                }
                l -= 1;
            }
            let mut x = a.at(nn, nn);
            if l == nn {
                // One root found.
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a.at(nn - 1, nn - 1);
            let mut w = a.at(nn, nn - 1) * a.at(nn - 1, nn);
            if l == nn - 1 {
                // Two roots found.
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn -= 2;
                break;
            }

            if its == MAX_ITERATIONS {
                return Err(Error::EigenNoConvergence {
                    index: nn - 1,
                    iterations: its,
                });
            }
            if its > 0 && its.is_multiple_of(10) {
                // Exceptional shift.
                t += x;
                for i in 1..=nn {
                    a.sub(i, i, x);
                }
                let s = a.at(nn, nn - 1).abs() + a.at(nn - 1, nn - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // Form shift and look for two consecutive small subdiagonals.
            let mut m = nn - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a.at(m, m);
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a.at(m + 1, m) + a.at(m, m + 1);
                q = a.at(m + 1, m + 1) - z - rr - ss;
                r = a.at(m + 2, m + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a.at(m, m - 1).abs() * (q.abs() + r.abs());
                let v = p.abs() * (a.at(m - 1, m - 1).abs() + z.abs() + a.at(m + 1, m + 1).abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                a.set(i, i - 2, 0.0);
                if i != m + 2 {
                    a.set(i, i - 3, 0.0);
                }
            }

            // Double QR step on rows l..nn and columns m..nn.
            let mut k = m;
            while k < nn {
                if k != m {
                    p = a.at(k, k - 1);
                    q = a.at(k + 1, k - 1);
                    r = 0.0;
                    if k != nn - 1 {
                        r = a.at(k + 2, k - 1);
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            let v = -a.at(k, k - 1);
                            a.set(k, k - 1, v);
                        }
                    } else {
                        a.set(k, k - 1, -s * x);
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        let mut pp = a.at(k, j) + q * a.at(k + 1, j);
                        if k != nn - 1 {
                            pp += r * a.at(k + 2, j);
                            a.sub(k + 2, j, pp * z);
                        }
                        a.sub(k + 1, j, pp * y);
                        a.sub(k, j, pp * x);
                    }
                    let mmin = nn.min(k + 3);
                    for i in l..=mmin {
                        let mut pp = x * a.at(i, k) + y * a.at(i, k + 1);
                        if k != nn - 1 {
                            pp += z * a.at(i, k + 2);
                            a.sub(i, k + 2, pp * r);
                        }
                        a.sub(i, k + 1, pp * q);
                        a.sub(i, k, pp);
                    }
                }
                k += 1;
            }
            if l >= nn.saturating_sub(1) {
                break;
            }
        }
    }

    Ok((1..=n).map(|i| Complex::new(wr[i], wi[i])).collect())
}

/// All eigenvalues of a square real matrix.
///
/// Order follows deflation from the bottom of the Hessenberg form and is
/// deterministic for a given input. Complex eigenvalues come in adjacent
/// conjugate pairs with the negative imaginary part first.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::Shape {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if let Some((idx, v)) = m.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        let n = m.nrows();
        return Err(Error::NonFinite {
            row: idx % n,
            col: idx / n,
            value: *v,
        });
    }
    let mut work = Work::from_matrix(m);
    balance(&mut work);
    hessenberg(&mut work);
    hqr(&mut work)
}

/// Spectral radius, max |λ|.
pub fn spectral_radius(m: &DMatrix<f64>) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}
