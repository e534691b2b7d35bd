//! Diagonal and near-diagonal operators of the Chebyshev calculus.
//!
//! `N`, `E`, `L` and `M` act on coefficients in the local frame of the
//! series' support. `U` and `V` carry the physical scale: `U` is the
//! arcsine-averaged difference quotient on the support and `V` its inverse
//! on mean-zero functions.

use rayon::prelude::*;

use crate::cheb::{clenshaw_t, phi_to_psi, psi_to_phi, ChebSeries, Support};
use crate::error::{Error, Result};
use crate::quadrature;
use crate::scalar::Scalar;

/// Operators acting on a [`ChebSeries`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Counting operator, `phi_n -> n phi_n`.
    N,
    /// Partial inverse of `N`, `phi_n -> phi_n / n`, `phi_0 -> 0`.
    E,
    /// `(Uf)(x) = int (f(x) - f(y)) / (x - y) beta(dy)`, so
    /// `phi_n -> psi_{n-1} / (2c)`.
    U,
    /// `psi_n -> 2c phi_{n+1}`.
    V,
    /// Counting operator for the second kind, `psi_n -> n psi_n`.
    M,
    /// Jacobi operator `N^2`, `phi_n -> n^2 phi_n`.
    L,
}

/// Applies `op` to `f`; the result lives on the same support.
pub fn apply<T: Scalar>(op: OperatorKind, f: &ChebSeries<T>) -> ChebSeries<T> {
    let s = f.support();
    let a = f.coeffs();
    let two_c = T::of(2.0) * s.scale();
    let coeffs = match op {
        OperatorKind::N => diag(a, |n| T::of_usize(n)),
        OperatorKind::L => diag(a, |n| T::of_usize(n * n)),
        OperatorKind::E => diag(a, |n| {
            if n == 0 {
                T::zero()
            } else {
                T::one() / T::of_usize(n)
            }
        }),
        OperatorKind::U => {
            if a.len() == 1 {
                vec![T::zero()]
            } else {
                let psi: Vec<T> = a[1..].iter().map(|&v| v / two_c).collect();
                psi_to_phi(&psi)
            }
        }
        OperatorKind::V => {
            let psi = phi_to_psi(a);
            let mut out = vec![T::zero(); psi.len() + 1];
            for (n, &q) in psi.iter().enumerate() {
                out[n + 1] = two_c * q;
            }
            out
        }
        OperatorKind::M => {
            let psi = phi_to_psi(a);
            psi_to_phi(&diag(&psi, |n| T::of_usize(n)))
        }
    };
    ChebSeries::new(s, coeffs)
}

fn diag<T: Scalar>(a: &[T], f: impl Fn(usize) -> T) -> Vec<T> {
    a.iter().enumerate().map(|(n, &v)| f(n) * v).collect()
}

/// Series with the same coefficients read in the local frame, so that
/// differentiation is with respect to `s = (x - b) / c`.
fn local<T: Scalar>(f: &ChebSeries<T>) -> ChebSeries<T> {
    f.local()
}

/// `L_w f = -(4 - s^2) w f'' + (s w - (4 - s^2) w') f'` in the local frame.
pub fn apply_lw<T: Scalar>(w: &ChebSeries<T>, f: &ChebSeries<T>) -> Result<ChebSeries<T>> {
    w.check_support(f)?;
    let support = f.support();
    let (w, f) = (local(w), local(f));
    let u = Support::<T>::unit();
    let s = ChebSeries::identity(u);
    let four_minus = ChebSeries::new(u, vec![T::of(2.0), T::zero(), -T::of(2.0)]);
    let d1 = f.differentiate();
    let d2 = d1.differentiate();
    let first = four_minus.multiply(&w)?.multiply(&d2)?.scale(-T::one());
    let coef = s.multiply(&w)?.try_sub(&four_minus.multiply(&w.differentiate())?)?;
    let out = first.try_add(&coef.multiply(&d1)?)?;
    Ok(out.rescale(support))
}

/// `N f` at `x` through the integral representation
/// `int y f'(y) beta(dy) + x int f' beta - (4 - x^2) int (f'(x) - f'(y)) / (x - y) beta(dy)`
/// evaluated by Gauss–Chebyshev quadrature in the local frame.
pub fn apply_n_integral<T: Scalar>(f: &ChebSeries<T>, x: T) -> Result<T> {
    let support = f.support();
    if !x.is_finite() {
        return Err(Error::NonFinite("evaluation point"));
    }
    if !support.contains(x) {
        return Err(Error::OutsideSupport {
            x: x.as_f64(),
            lower: support.lower().as_f64(),
            upper: support.upper().as_f64(),
        });
    }
    let s = support.to_local(x).max(-T::of(2.0)).min(T::of(2.0));
    let g = local(f).differentiate();
    let dg = g.differentiate();
    let rule = quadrature::arcsine::<T>(f.degree() + 2);
    let gs = g.eval(s);
    let moment_y = rule.integrate(|t| t * g.eval(t));
    let moment_1 = rule.integrate(|t| g.eval(t));
    let quotient = rule.integrate(|t| {
        let d = s - t;
        if d.abs() <= T::epsilon() * T::of(16.0) {
            dg.eval(s)
        } else {
            (gs - g.eval(t)) / d
        }
    });
    Ok(moment_y + s * moment_1 - (T::of(4.0) - s * s) * quotient)
}

/// Dense symmetric matrix of an operator in the orthonormal mean-zero basis
/// `sqrt(2) phi_n`, `n = 1..=K` of `L^2(beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOperatorMatrix<T> {
    size: usize,
    entries: Vec<T>,
}

impl<T: Scalar> SpectralOperatorMatrix<T> {
    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> T + Sync) -> Self {
        let rows: Vec<Vec<T>> = (0..size)
            .into_par_iter()
            .map(|i| (0..size).map(|j| f(i, j)).collect())
            .collect();
        Self {
            size,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry at row `i`, column `j` (zero based, so index `i` is `phi_{i+1}`).
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.size {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.size, self.size, |i, j| self.get(i, j).as_f64())
    }
}

/// `psi_0 .. psi_{k-1}` at `s`.
pub(crate) fn psi_values<T: Scalar>(s: T, k: usize) -> Vec<T> {
    let mut v = Vec::with_capacity(k);
    let (mut p0, mut p1) = (T::one(), s);
    for j in 0..k {
        if j == 0 {
            v.push(p0);
        } else {
            v.push(p1);
            let p2 = s * p1 - p0;
            p0 = p1;
            p1 = p2;
        }
    }
    v
}

/// Matrix of `L_w` in the basis `sqrt(2) phi_n`, `n = 1..=K`:
/// entries `2 int phi~_m' phi~_n' w d alpha = m n int psi_{m-1} psi_{n-1} w d alpha`,
/// integrated exactly by a Gauss semicircle rule. Rows are assembled in
/// parallel; each entry is computed by the same sequence of operations
/// regardless of the thread count.
pub fn assemble_lw<T: Scalar>(w: &ChebSeries<T>, k: usize) -> Result<SpectralOperatorMatrix<T>> {
    if k < 1 {
        return Err(Error::InvalidArgument("truncation size must be at least 1".into()));
    }
    let nodes = (w.degree() + 2 * k + 4) / 2 + 1;
    let rule = quadrature::semicircle::<T>(nodes);
    let wc = w.coeffs();
    let weighted: Vec<T> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &q)| q * clenshaw_t(wc, s / T::of(2.0)))
        .collect();
    let table: Vec<Vec<T>> = rule.nodes.iter().map(|&s| psi_values(s, k)).collect();
    Ok(SpectralOperatorMatrix::from_fn(k, |i, j| {
        let acc: T = table
            .iter()
            .zip(&weighted)
            .map(|(p, &q)| q * p[i] * p[j])
            .sum();
        T::of_usize((i + 1) * (j + 1)) * acc
    }))
}
