//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use quadrature::double_exponential;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * r.random::<f64>()
}

pub fn random_coeffs(r: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| uniform(r, -1.0, 1.0)).collect()
}

/// Tanh-sinh quadrature on `[a, b]`.
pub fn de(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    double_exponential::integrate(f, a, b, 1e-13).integral
}

/// `int_0^pi g(theta) dtheta` split at `cut`, for integrands with a
/// logarithmic singularity there.
pub fn de_split(g: impl Fn(f64) -> f64, cut: f64) -> f64 {
    let cut = cut.clamp(0.0, PI);
    let mut acc = 0.0;
    if cut > 0.0 {
        acc += de(&g, 0.0, cut);
    }
    if cut < PI {
        acc += de(&g, cut, PI);
    }
    acc
}

/// `int log|x - y| u(y) beta_{b,c}(dy)` through `y = b + 2c cos(theta)`.
pub fn arcsine_log_potential(u: impl Fn(f64) -> f64, b: f64, c: f64, x: f64) -> f64 {
    let y = |t: f64| b + 2.0 * c * t.cos();
    let g = |t: f64| (x - y(t)).abs().ln() * u(y(t)) / PI;
    let s = (x - b) / (2.0 * c);
    if s.abs() < 1.0 {
        de_split(g, s.acos())
    } else {
        de(g, 0.0, PI)
    }
}

/// `int log|x - y| w(y) alpha_{b,c}(dy)` through `y = b + 2c cos(theta)`.
pub fn semicircle_log_potential(w: impl Fn(f64) -> f64, b: f64, c: f64, x: f64) -> f64 {
    let y = |t: f64| b + 2.0 * c * t.cos();
    let g = |t: f64| (x - y(t)).abs().ln() * w(y(t)) * 2.0 * t.sin().powi(2) / PI;
    let s = (x - b) / (2.0 * c);
    if s.abs() < 1.0 {
        de_split(g, s.acos())
    } else {
        de(g, 0.0, PI)
    }
}

/// `iint log|x - y| mu(dx) mu(dy)` for `mu = w alpha_{b,c}` by nested
/// quadrature.
pub fn semicircle_log_energy(w: impl Fn(f64) -> f64 + Copy, b: f64, c: f64) -> f64 {
    de(
        |t| {
            let x = b + 2.0 * c * t.cos();
            semicircle_log_potential(w, b, c, x) * w(x) * 2.0 * t.sin().powi(2) / PI
        },
        0.0,
        PI,
    )
}

/// `int f dbeta_{b,c}` by an `n`-point Gauss–Chebyshev rule.
pub fn arcsine_mean(f: impl Fn(f64) -> f64, b: f64, c: f64, n: usize) -> f64 {
    (0..n)
        .map(|j| f(b + 2.0 * c * ((j as f64 + 0.5) * PI / n as f64).cos()))
        .sum::<f64>()
        / n as f64
}

/// Chebyshev polynomial of the second kind `U_m(cos t)` in trigonometric form.
pub fn cheb_u(m: usize, u: f64) -> f64 {
    let t = u.clamp(-1.0, 1.0).acos();
    if t.sin().abs() < 1e-12 {
        let sign = if u < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
        return sign * (m + 1) as f64;
    }
    ((m + 1) as f64 * t).sin() / t.sin()
}

/// `psi_m` written in the `phi` basis: `2(phi_m + phi_{m-2} + ...)` with the
/// constant term counted once.
pub fn psi_in_phi(m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m + 1];
    let mut k = m as isize;
    while k >= 0 {
        out[k as usize] = if k == 0 { 1.0 } else { 2.0 };
        k -= 2;
    }
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}
