//! Logarithmic kernel in the Chebyshev basis: log-potentials, logarithmic
//! energy, and the Hilbert transform of density measures.
//!
//! Everything rests on the expansion
//! `log|x - y| = -sum_{n>=1} (2/n) phi_n(x) phi_n(y)` on `[-2, 2]`, and its
//! exterior counterpart for `|x| > 2`.

use crate::cheb::{clenshaw_t, phi_to_psi, ChebSeries};
use crate::error::{Error, Result};
use crate::measures::{DensityMeasure, MeasureKind};
use crate::scalar::Scalar;

/// Partial sum `-sum_{n=1}^{terms} (2/n) phi_n(x) phi_n(y)` for `x, y` in
/// `[-2, 2]`. Converges slowly, like `1/terms`, away from the diagonal.
pub fn log_kernel<T: Scalar>(x: T, y: T, terms: usize) -> Result<T> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::NonFinite("kernel argument"));
    }
    let two = T::of(2.0);
    for v in [x, y] {
        if v.abs() > two {
            return Err(Error::OutsideSupport {
                x: v.as_f64(),
                lower: -2.0,
                upper: 2.0,
            });
        }
    }
    if x == y {
        return Err(Error::DiagonalKernel(x.as_f64()));
    }
    if terms == 0 {
        return Err(Error::InvalidArgument("at least one term required".into()));
    }
    let (u, v) = ((x / two).acos(), (y / two).acos());
    let mut acc = T::zero();
    for n in (1..=terms).rev() {
        let n_t = T::of_usize(n);
        acc = acc + two / n_t * (n_t * u).cos() * (n_t * v).cos();
    }
    Ok(-acc)
}

/// `int log|x - y| mu(dy)`.
///
/// Inside the support this is `mass log c - sum (2/n) m_n phi_n(s)` with
/// `m_n` the Chebyshev moments of `mu`; outside it uses the exterior
/// expansion in powers of `r = (|s| - sqrt(s^2 - 4)) / 2`.
pub fn log_potential<T: Scalar>(mu: &DensityMeasure<T>, x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::NonFinite("evaluation point"));
    }
    let support = mu.support();
    let m = mu.phi_moments();
    Ok(m[0] * support.scale().ln() + local_potential(&m, support.to_local(x)))
}

pub(crate) fn local_potential<T: Scalar>(m: &[T], s: T) -> T {
    let two = T::of(2.0);
    if s.abs() <= two {
        let coeffs: Vec<T> = m
            .iter()
            .enumerate()
            .map(|(n, &v)| if n == 0 { T::zero() } else { -two / T::of_usize(n) * v })
            .collect();
        return clenshaw_t(&coeffs, s / two);
    }
    let root = (s * s - T::of(4.0)).sqrt();
    let r = (s.abs() - root) / two;
    let q = if s < T::zero() { -r } else { r };
    let mut acc = m[0] * ((s.abs() + root) / two).ln();
    let mut power = T::one();
    for (n, &v) in m.iter().enumerate().skip(1) {
        power = power * q;
        acc = acc - two / T::of_usize(n) * power * v;
    }
    acc
}

/// `iint log|x - y| mu(dx) mu(dy) = mass^2 log c - sum (2/n) m_n^2`.
pub fn log_energy<T: Scalar>(mu: &DensityMeasure<T>) -> T {
    let m = mu.phi_moments();
    let tail: T = m
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &v)| T::of(2.0) / T::of_usize(n) * v * v)
        .sum();
    m[0] * m[0] * mu.support().scale().ln() - tail
}

/// `H mu`, the principal value of `int 2 / (x - y) mu(dy)`, as a series on
/// the support of `mu`.
///
/// Over the semicircle base, writing the density as `sum c_n psi_n`, the
/// transform is `(1/c) sum c_n 2 phi_{n+1}`. Over the arcsine base,
/// `phi_n beta` maps to `-psi_{n-1} / c`.
pub fn hilbert_series<T: Scalar>(mu: &DensityMeasure<T>) -> ChebSeries<T> {
    let support = mu.support();
    let inv_c = T::one() / support.scale();
    let u = mu.density().coeffs();
    match mu.base() {
        MeasureKind::Semicircle(_) => {
            let psi = phi_to_psi(u);
            let mut out = vec![T::zero(); psi.len() + 1];
            for (n, &c) in psi.iter().enumerate() {
                out[n + 1] = T::of(2.0) * inv_c * c;
            }
            ChebSeries::new(support, out)
        }
        MeasureKind::Arcsine(_) => {
            if u.len() == 1 {
                return ChebSeries::zero(support);
            }
            let psi: Vec<T> = u[1..].iter().map(|&a| -inv_c * a).collect();
            ChebSeries::new(support, crate::cheb::psi_to_phi(&psi))
        }
    }
}

/// `H mu (x)` for `x` in the open support.
pub fn hilbert_transform<T: Scalar>(mu: &DensityMeasure<T>, x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::NonFinite("evaluation point"));
    }
    let support = mu.support();
    let s = support.to_local(x);
    if s.abs() >= T::of(2.0) {
        return Err(Error::OutsideSupport {
            x: x.as_f64(),
            lower: support.lower().as_f64(),
            upper: support.upper().as_f64(),
        });
    }
    Ok(hilbert_series(mu).eval(x))
}
