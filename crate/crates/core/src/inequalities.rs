//! Free Poincaré constants, the quadratic Wasserstein distance, entropy
//! deficits for the transportation, log-Sobolev and HWI inequalities, and
//! the inf-convolution semigroup.
//!
//! For `mu = w alpha_{b,c}` the Poincaré inequality
//! `2 rho c^2 Omega(f, f) <= int f'^2 dmu` is the operator bound
//! `2 rho c^2 N <= L_w`. All three reported constants use that scale.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::cheb::{ChebSeries, Support};
use crate::equilibrium::{self, positivity_margin, EquilibriumSolution, Potential};
use crate::error::{Error, Result};
use crate::logkernel::{hilbert_series, log_energy};
use crate::measures::{inner_beta, DensityMeasure, MeasureKind};
use crate::operators::{apply, assemble_lw, psi_values, OperatorKind};
use crate::quadrature;
use crate::scalar::Scalar;

/// Smallest truncation accepted by [`poincare_constant`].
pub const MIN_TRUNCATION: usize = 8;

/// Poincaré constants of `w alpha_{b,c}` at truncation `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoincareReport<T> {
    /// From the smallest eigenvalue of `N^{-1/2} L_w N^{-1/2}`.
    pub rho_p: T,
    /// From the largest eigenvalue of `N^{-1/2} V (1/w) U N^{-1/2}`.
    pub rho_p2: T,
    /// From the pencil `(M + I, int psi_j psi_k / w dalpha)`.
    pub rho_p4: T,
    pub k: usize,
    /// Eigenvalues `lambda_n` of `L_w` on `phi_1..phi_K`, ascending.
    pub eigenvalues: Vec<T>,
    /// `lambda_n / (2n)`.
    pub eigen_profile: Vec<T>,
}

impl<T: Scalar> PoincareReport<T> {
    /// Largest pairwise gap between the three constants.
    pub fn spread(&self) -> T {
        let v = [self.rho_p, self.rho_p2, self.rho_p4];
        let hi = v.iter().fold(T::neg_infinity(), |m, &x| m.max(x));
        let lo = v.iter().fold(T::infinity(), |m, &x| m.min(x));
        hi - lo
    }
}

fn eig(m: DMatrix<f64>) -> Result<Vec<f64>> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigen("non-finite matrix entry".into()));
    }
    let sym = (&m + m.transpose()) * 0.5;
    let mut vals: Vec<f64> = SymmetricEigen::try_new(sym, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigen("symmetric eigensolver did not converge".into()))?
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// `D^{-1/2} A D^{-1/2}` with `D = diag(1..=K)`.
fn n_scaled(a: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] / (((i + 1) * (j + 1)) as f64).sqrt())
}

/// Quadrature size for integrands carrying `1 / w`.
fn reciprocal_nodes(k: usize) -> usize {
    2 * k + 256
}

/// Computes `rho_P`, `rho_P2`, `rho_P4` for the measure `w alpha_{b,c}` at
/// truncation `k`, `b, c` being the support of `w`.
pub fn poincare_constant<T: Scalar>(w: &ChebSeries<T>, k: usize) -> Result<PoincareReport<T>> {
    if k < MIN_TRUNCATION {
        return Err(Error::InvalidArgument(format!(
            "truncation must be at least {MIN_TRUNCATION}, got {k}"
        )));
    }
    let margin = positivity_margin(w);
    if !(margin > T::zero()) {
        return Err(Error::Assumption(format!(
            "density must be positive on the support (minimum {margin})"
        )));
    }
    let c = w.support().scale().as_f64();
    let scale = 1.0 / (2.0 * c * c);

    let lw = assemble_lw(w, k)?.to_f64();
    let rho_p = scale * eig(n_scaled(&lw))?[0];
    let eigenvalues = eig(lw)?;

    let b = dual_matrix(w, k);
    let rho_p2 = scale / *eig(n_scaled(&b))?.last().unwrap();

    let rho_p4 = scale * pencil_min(&m_plus_identity(k), &reciprocal_gram(w, k))?;

    let eigen_profile = eigenvalues
        .iter()
        .enumerate()
        .map(|(n, &l)| T::of(l / (2.0 * (n + 1) as f64)))
        .collect();
    Ok(PoincareReport {
        rho_p: T::of(rho_p),
        rho_p2: T::of(rho_p2),
        rho_p4: T::of(rho_p4),
        k,
        eigenvalues: eigenvalues.into_iter().map(T::of).collect(),
        eigen_profile,
    })
}

/// `rho_P` at `k` and at `2k`, with their absolute difference.
pub fn poincare_refinement<T: Scalar>(w: &ChebSeries<T>, k: usize) -> Result<(PoincareReport<T>, T)> {
    let coarse = poincare_constant(w, k)?;
    let c = w.support().scale().as_f64();
    let fine = eig(n_scaled(&assemble_lw(w, 2 * k)?.to_f64()))?[0] / (2.0 * c * c);
    let gap = T::of((fine - coarse.rho_p.as_f64()).abs());
    Ok((coarse, gap))
}

/// Matrix of `V (1/w) U` in the basis `sqrt(2) phi_n`, built by applying the
/// operators to each basis function. `(1/w) U e_m` is projected onto
/// `psi_0..psi_{K}` by semicircle quadrature before `V` is applied.
fn dual_matrix<T: Scalar>(w: &ChebSeries<T>, k: usize) -> DMatrix<f64> {
    let unit = Support::<f64>::unit();
    let wl = ChebSeries::new(unit, w.coeffs().iter().map(|v| v.as_f64()).collect());
    let rule = quadrature::semicircle::<f64>(reciprocal_nodes(k));
    let inv_w: Vec<f64> = rule.nodes.iter().map(|&s| 1.0 / wl.eval(s)).collect();
    let psi: Vec<Vec<f64>> = rule.nodes.iter().map(|&s| psi_values(s, k + 1)).collect();
    let root2 = std::f64::consts::SQRT_2;
    let basis: Vec<ChebSeries<f64>> = (1..=k).map(|n| ChebSeries::basis(unit, n).scale(root2)).collect();
    let mut out = DMatrix::zeros(k, k);
    for (m, em) in basis.iter().enumerate() {
        let u = apply(OperatorKind::U, em);
        let vals: Vec<f64> = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .zip(&inv_w)
            .map(|((&s, &q), &iw)| q * u.eval(s) * iw)
            .collect();
        let proj: Vec<f64> = (0..=k)
            .map(|j| vals.iter().zip(&psi).map(|(&v, p)| v * p[j]).sum())
            .collect();
        let h = ChebSeries::new(unit, crate::cheb::psi_to_phi(&proj));
        let vh = apply(OperatorKind::V, &h);
        for (n, en) in basis.iter().enumerate() {
            out[(m, n)] = inner_beta(&vh, en).expect("same support");
        }
    }
    out
}

/// `<(M + I) psi_j, psi_k>_alpha` with the `M` part from the double integral
/// of divided differences over `alpha x alpha`.
fn m_plus_identity(k: usize) -> DMatrix<f64> {
    let rule = quadrature::semicircle::<f64>(k + 2);
    let n = rule.len();
    let mut acc = DMatrix::<f64>::zeros(k, k);
    let psi: Vec<Vec<f64>> = rule.nodes.iter().map(|&s| psi_values(s, k)).collect();
    let mut dd = vec![0.0; k];
    for a in 0..n {
        for b in 0..n {
            let x = rule.nodes[a];
            let wgt = rule.weights[a] * rule.weights[b];
            // Delta psi_0 = 0, Delta psi_1 = 1,
            // Delta psi_{j+1} = psi_j(y) + x Delta psi_j - Delta psi_{j-1}.
            for j in 0..k {
                dd[j] = match j {
                    0 => 0.0,
                    1 => 1.0,
                    _ => psi[b][j - 1] + x * dd[j - 1] - dd[j - 2],
                };
            }
            for i in 1..k {
                let wi = wgt * dd[i];
                for j in i..k {
                    acc[(i, j)] += wi * dd[j];
                }
            }
        }
    }
    for i in 0..k {
        for j in 0..i {
            acc[(i, j)] = acc[(j, i)];
        }
    }
    let gram = DMatrix::from_fn(k, k, |i, j| {
        psi.iter()
            .zip(&rule.weights)
            .map(|(p, &q)| q * p[i] * p[j])
            .sum::<f64>()
    });
    acc + gram
}

/// `int psi_j psi_k / w dalpha`, `j, k < K`, in the local frame.
fn reciprocal_gram<T: Scalar>(w: &ChebSeries<T>, k: usize) -> DMatrix<f64> {
    let wc: Vec<f64> = w.coeffs().iter().map(|v| v.as_f64()).collect();
    let rule = quadrature::semicircle::<f64>(reciprocal_nodes(k));
    let weighted: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &q)| q / crate::cheb::clenshaw_t(&wc, s / 2.0))
        .collect();
    let psi: Vec<Vec<f64>> = rule.nodes.iter().map(|&s| psi_values(s, k)).collect();
    DMatrix::from_fn(k, k, |i, j| {
        psi.iter().zip(&weighted).map(|(p, &q)| q * p[i] * p[j]).sum()
    })
}

/// Smallest `lambda` with `A v = lambda G v`, `G` positive definite.
fn pencil_min(a: &DMatrix<f64>, g: &DMatrix<f64>) -> Result<f64> {
    let chol = nalgebra::Cholesky::new(g.clone())
        .ok_or_else(|| Error::Eigen("Gram matrix is not positive definite".into()))?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(a)
        .ok_or_else(|| Error::Eigen("singular Cholesky factor".into()))?;
    let c = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| Error::Eigen("singular Cholesky factor".into()))?;
    Ok(eig(c)?[0])
}

/// `W_2(mu, nu)` by the quantile coupling,
/// `W_2^2 = int_0^1 (F_mu^{-1}(p) - F_nu^{-1}(p))^2 dp`, with
/// `p = (1 - cos(pi tau)) / 2` and Gauss–Legendre in `tau`.
pub fn wasserstein2<T: Scalar>(mu: &DensityMeasure<T>, nu: &DensityMeasure<T>, grid: usize) -> Result<T> {
    mu.check_probability()?;
    nu.check_probability()?;
    let rule = quadrature::legendre::<T>(grid.max(2), T::zero(), T::one());
    let half = T::of(0.5);
    let ps: Vec<T> = rule
        .nodes
        .iter()
        .map(|&t| half * (T::one() - (T::PI() * t).cos()))
        .collect();
    let qa = mu.quantiles(&ps)?;
    let qb = nu.quantiles(&ps)?;
    let mut acc = T::zero();
    for i in 0..rule.len() {
        let jac = half * T::PI() * (T::PI() * rule.nodes[i]).sin();
        let d = qa[i] - qb[i];
        acc = acc + rule.weights[i] * jac * d * d;
    }
    Ok(acc.max(T::zero()).sqrt())
}

/// `E_V(nu) = int V dnu - iint log|x - y| dnu dnu`.
pub fn energy_functional<T: Scalar>(v: &Potential<T>, nu: &DensityMeasure<T>) -> Result<T> {
    let vs = v.to_series(nu.support());
    Ok(nu.integrate(&vs)? - log_energy(nu))
}

/// Relative free Fisher information `I_V(nu) = int (H nu - V')^2 dnu`,
/// exact for semicircle-base `nu`.
pub fn fisher_information<T: Scalar>(v: &Potential<T>, nu: &DensityMeasure<T>) -> Result<T> {
    require_semicircle(nu)?;
    let r = hilbert_series(nu).try_sub(&v.derivative().to_series(nu.support()))?;
    nu.integrate(&r.multiply(&r)?)
}

fn require_semicircle<T: Scalar>(nu: &DensityMeasure<T>) -> Result<()> {
    match nu.base() {
        MeasureKind::Semicircle(_) => Ok(()),
        MeasureKind::Arcsine(_) => Err(Error::InvalidArgument(
            "test measures must have a density against the semicircle law".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeficitKind {
    Transport,
    Lsi,
    Hwi,
}

/// Both sides of an inequality and `deficit = rhs - lhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeficitReport<T> {
    pub kind: DeficitKind,
    pub lhs: T,
    pub rhs: T,
    pub deficit: T,
}

/// Quantile nodes used for `W_2` inside [`deficit`].
pub const DEFICIT_GRID: usize = 128;

/// Solves for `mu_V` and evaluates the requested inequality at `nu`.
pub fn deficit<T: Scalar>(v: &Potential<T>, nu: &DensityMeasure<T>, rho: T, kind: DeficitKind) -> Result<DeficitReport<T>> {
    let sol = equilibrium::solve(v)?;
    deficit_with(v, &sol, nu, rho, kind)
}

/// As [`deficit`] with a precomputed equilibrium solution.
pub fn deficit_with<T: Scalar>(
    v: &Potential<T>,
    sol: &EquilibriumSolution<T>,
    nu: &DensityMeasure<T>,
    rho: T,
    kind: DeficitKind,
) -> Result<DeficitReport<T>> {
    require_semicircle(nu)?;
    nu.check_probability()?;
    let delta_e = energy_functional(v, nu)? - sol.energy;
    let w2 = || wasserstein2(nu, &sol.measure(), DEFICIT_GRID);
    let (lhs, rhs) = match kind {
        DeficitKind::Transport => {
            let w = w2()?;
            (rho * w * w, delta_e)
        }
        DeficitKind::Lsi => (T::of(4.0) * rho * delta_e, fisher_information(v, nu)?),
        DeficitKind::Hwi => {
            let w = w2()?;
            let i = fisher_information(v, nu)?;
            (delta_e, i.max(T::zero()).sqrt() * w - rho * w * w)
        }
    };
    Ok(DeficitReport {
        kind,
        lhs,
        rhs,
        deficit: rhs - lhs,
    })
}

/// `(Q_t f)(x) = inf_y f(y) + (x - y)^2 / t` over samples `f` on `y_grid`,
/// refined by the parabola through the discrete minimizer and its
/// neighbours.
pub fn inf_convolution<T: Scalar>(f: &[T], y_grid: &[T], t: T, x_grid: &[T]) -> Result<Vec<T>> {
    if f.len() != y_grid.len() || f.len() < 3 {
        return Err(Error::InvalidArgument("need at least 3 samples matching the grid".into()));
    }
    if !(t > T::zero()) {
        return Err(Error::InvalidArgument("time must be positive".into()));
    }
    x_grid
        .iter()
        .map(|&x| {
            let h = |j: usize| f[j] + (x - y_grid[j]).powi(2) / t;
            let (mut best, mut val) = (0, h(0));
            for j in 1..f.len() {
                let v = h(j);
                if v < val {
                    best = j;
                    val = v;
                }
            }
            if best == 0 || best == f.len() - 1 {
                return Err(Error::GridBoundary { x: x.as_f64() });
            }
            Ok(parabola_min(
                [y_grid[best - 1], y_grid[best], y_grid[best + 1]],
                [h(best - 1), val, h(best + 1)],
            ))
        })
        .collect()
}

/// Minimum of the parabola through three points, falling back to the middle
/// value when the points are collinear.
fn parabola_min<T: Scalar>(y: [T; 3], v: [T; 3]) -> T {
    let d01 = (v[1] - v[0]) / (y[1] - y[0]);
    let d12 = (v[2] - v[1]) / (y[2] - y[1]);
    let a = (d12 - d01) / (y[2] - y[0]);
    if !(a > T::zero()) {
        return v[1];
    }
    // p(y) = v1 + b (y - y1) + a (y - y1)^2 with b the centered slope.
    let b = d01 + a * (y[1] - y[0]);
    let shift = -b / (T::of(2.0) * a);
    let lo = y[0] - y[1];
    let hi = y[2] - y[1];
    let shift = shift.max(lo).min(hi);
    v[1] + b * shift + a * shift * shift
}

/// `d_t Q_t f + (d_x Q_t f)^2 / 4` at the interior points of `x_grid`, by
/// central differences with time step `dt`.
pub fn hamilton_jacobi_residual<T: Scalar>(f: &[T], y_grid: &[T], t: T, dt: T, x_grid: &[T]) -> Result<Vec<T>> {
    if !(dt > T::zero() && dt < t) {
        return Err(Error::InvalidArgument("time step must lie in (0, t)".into()));
    }
    let plus = inf_convolution(f, y_grid, t + dt, x_grid)?;
    let minus = inf_convolution(f, y_grid, t - dt, x_grid)?;
    let now = inf_convolution(f, y_grid, t, x_grid)?;
    let two = T::of(2.0);
    Ok((1..x_grid.len().saturating_sub(1))
        .map(|i| {
            let qt = (plus[i] - minus[i]) / (two * dt);
            let qx = (now[i + 1] - now[i - 1]) / (x_grid[i + 1] - x_grid[i - 1]);
            qt + T::of(0.25) * qx * qx
        })
        .collect())
}
