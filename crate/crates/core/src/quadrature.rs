//! Gauss rules for the arcsine and semicircle weights and for Lebesgue measure.
//!
//! Arcsine and semicircle nodes are returned in the local frame `[-2, 2]` with
//! weights summing to one, so `sum w_j f(s_j)` approximates the integral
//! against the probability measure.

use crate::scalar::Scalar;

/// Nodes and weights of a quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> Rule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss–Chebyshev rule for the arcsine law on `[-2, 2]`; exact for
/// polynomials of degree `2n - 1`.
pub fn arcsine<T: Scalar>(n: usize) -> Rule<T> {
    let n = n.max(1);
    let n_t = T::of_usize(n);
    let nodes = (0..n)
        .map(|j| T::of(2.0) * (T::PI() * T::of_usize(2 * j + 1) / (T::of(2.0) * n_t)).cos())
        .collect();
    Rule {
        nodes,
        weights: vec![T::one() / n_t; n],
    }
}

/// Gauss rule for the semicircle law on `[-2, 2]` (second-kind Chebyshev
/// nodes); exact for polynomials of degree `2n - 1`.
pub fn semicircle<T: Scalar>(n: usize) -> Rule<T> {
    let n = n.max(1);
    let m = T::of_usize(n + 1);
    let (mut nodes, mut weights) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for j in 1..=n {
        let theta = T::PI() * T::of_usize(j) / m;
        let s = theta.sin();
        nodes.push(T::of(2.0) * theta.cos());
        weights.push(T::of(2.0) / m * s * s);
    }
    Rule { nodes, weights }
}

/// Gauss–Legendre rule on `[a, b]` for Lebesgue measure.
pub fn legendre<T: Scalar>(n: usize, a: T, b: T) -> Rule<T> {
    let (x, w) = legendre_unit(n.max(1));
    let half = T::of(0.5) * (b - a);
    let mid = T::of(0.5) * (b + a);
    Rule {
        nodes: x.iter().map(|&t| mid + half * T::of(t)).collect(),
        weights: w.iter().map(|&t| half * T::of(t)).collect(),
    }
}

/// Newton iteration on `P_n` in double precision.
fn legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            dp = 1.0;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n == 1 {
        x[0] = 0.0;
        w[0] = 2.0;
    }
    (x, w)
}
