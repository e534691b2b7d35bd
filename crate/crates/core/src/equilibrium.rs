//! Equilibrium measures of polynomial external fields on a single interval.
//!
//! The support `(b, c)` solves the endpoint system
//! `c int s V'(cs + b) beta(ds) = 2`, `int V'(cs + b) beta(ds) = 0`
//! (arcsine law on `[-2, 2]`), which is the critical-point condition of
//! `H(c, b) = log c - 1/2 int V(cs + b) beta(ds)`. The density against the
//! semicircle law of the support is `w = c^2 U_{b,c}(V')`.

use crate::cheb::{ChebSeries, Support};
use crate::error::{Error, Result};
use crate::logkernel::{hilbert_series, log_energy, log_potential};
use crate::measures::{self, DensityMeasure, MeasureKind, CLAMP_TOL, MASS_TOL};
use crate::operators::{apply, OperatorKind};
use crate::quadrature;
use crate::scalar::Scalar;

/// Default residual tolerance of the endpoint solver.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Iteration cap of the endpoint solver.
pub const MAX_NEWTON: usize = 50;
/// Largest tolerated spread between energy routes.
pub const ROUTE_TOL: f64 = 1e-6;

/// Polynomial `V(x) = sum_k v_k x^k` in the monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Potential<T> {
    /// Trailing zero coefficients are dropped; an empty list is the zero
    /// polynomial.
    pub fn new(mut coeffs: Vec<T>) -> Result<Self> {
        if coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("potential coefficients"));
        }
        while coeffs.len() > 1 && *coeffs.last().unwrap() == T::zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Ok(Self { coeffs })
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![T::zero()] }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &v| acc * x + v)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &v)| T::of_usize(k) * v)
            .collect();
        Self { coeffs }
    }

    /// Even degree at least 2 with positive leading coefficient, so that
    /// `V(x) - 2 log|x|` grows without bound.
    pub fn is_admissible(&self) -> bool {
        let d = self.degree();
        d >= 2 && d.is_multiple_of(2) && self.coeffs[d] > T::zero()
    }

    /// `self + t * other`.
    pub fn add_scaled(&self, other: &Self, t: T) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[T], k: usize| v.get(k).copied().unwrap_or_else(T::zero);
        let coeffs = (0..len)
            .map(|k| get(&self.coeffs, k) + t * get(&other.coeffs, k))
            .collect();
        Self::new(coeffs).expect("finite combination")
    }

    /// The translate `x -> V(x - a)`.
    pub fn translated(&self, a: T) -> Self {
        Self::new(compose_affine(&self.coeffs, T::one(), -a)).expect("finite translate")
    }

    /// Exact Chebyshev series of `V` on a support.
    pub fn to_series(&self, s: Support<T>) -> ChebSeries<T> {
        ChebSeries::from_monomials(s, &self.coeffs)
    }
}

/// Monomial coefficients of `p(c s + b)` as a polynomial in `s`.
fn compose_affine<T: Scalar>(p: &[T], c: T, b: T) -> Vec<T> {
    let mut q = vec![T::zero(); p.len()];
    for &a in p.iter().rev() {
        // q <- q * (c s + b) + a
        let mut next = vec![T::zero(); p.len()];
        for (i, &v) in q.iter().enumerate() {
            if i + 1 < next.len() {
                next[i + 1] = next[i + 1] + c * v;
            }
            next[i] = next[i] + b * v;
        }
        next[0] = next[0] + a;
        q = next;
    }
    q
}

/// Arcsine moments on `[-2, 2]`: `C(k, k/2)` for even `k`, zero otherwise.
fn arcsine_moments<T: Scalar>(n: usize) -> Vec<T> {
    let mut m = vec![T::zero(); n + 1];
    let mut central = T::one();
    for k in (0..=n).step_by(2) {
        m[k] = central;
        let h = T::of_usize(k / 2 + 1);
        central = central * T::of_usize((k + 1) * (k + 2)) / (h * h);
    }
    m
}

/// `int s^j p(c s + b) beta(ds)` for `j = 0, 1, 2`.
fn beta_moments<T: Scalar>(p: &[T], b: T, c: T) -> [T; 3] {
    let q = compose_affine(p, c, b);
    let m = arcsine_moments::<T>(q.len() + 2);
    let at = |j: usize| q.iter().enumerate().map(|(i, &v)| v * m[i + j]).sum();
    [at(0), at(1), at(2)]
}

/// Endpoint residuals `(F1, F2)` and Jacobian `[[dF1/db, dF1/dc], [dF2/db, dF2/dc]]`.
fn endpoint_system<T: Scalar>(d1: &[T], d2: &[T], b: T, c: T) -> ([T; 2], [[T; 2]; 2]) {
    let [v0, v1, _] = beta_moments(d1, b, c);
    let [w0, w1, w2] = beta_moments(d2, b, c);
    let f = [c * v1 - T::of(2.0), v0];
    let jac = [[c * w1, v1 + c * w2], [w0, w1]];
    (f, jac)
}

fn sup_norm<T: Scalar>(f: &[T; 2]) -> T {
    f[0].abs().max(f[1].abs())
}

/// Outcome of the endpoint Newton iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportFit<T> {
    pub support: Support<T>,
    pub residuals: [T; 2],
    pub iterations: usize,
}

/// Default starting point: `b` at the minimum of `V` over a grid covering
/// all critical points, `c = 1`.
pub fn default_initial<T: Scalar>(v: &Potential<T>) -> Support<T> {
    let d = v.derivative();
    let lead = d.coeffs()[d.degree()];
    let radius = if d.degree() == 0 || lead == T::zero() {
        T::one()
    } else {
        T::one()
            + d.coeffs()[..d.degree()]
                .iter()
                .fold(T::zero(), |m, &a| m.max((a / lead).abs()))
    };
    let n = 2000;
    let mut best = (T::zero(), T::infinity());
    for j in 0..=n {
        let x = -radius + T::of(2.0) * radius * T::of_usize(j) / T::of_usize(n);
        let val = v.eval(x);
        if val < best.1 {
            best = (x, val);
        }
    }
    Support::new(best.0, T::one()).expect("finite grid point")
}

/// Solves the endpoint system by damped Newton with the exact Jacobian and
/// confirms the root is a local maximum of `H(c, b)`.
pub fn solve_support<T: Scalar>(v: &Potential<T>, initial: Support<T>, tol: T) -> Result<Support<T>> {
    fit_support(v, initial, tol).map(|f| f.support)
}

/// As [`solve_support`], also returning residuals and the iteration count.
pub fn fit_support<T: Scalar>(v: &Potential<T>, initial: Support<T>, tol: T) -> Result<SupportFit<T>> {
    if !v.is_admissible() {
        return Err(Error::Assumption(
            "potential must have even degree >= 2 and positive leading coefficient".into(),
        ));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let tol = tol.max(T::epsilon() * T::of(256.0));
    let d1 = v.derivative();
    let d2 = d1.derivative();
    let (d1, d2) = (d1.coeffs(), d2.coeffs());
    let (mut b, mut c) = (initial.center(), initial.scale());
    let (mut f, mut jac) = endpoint_system(d1, d2, b, c);
    let mut norm = sup_norm(&f);
    for it in 0..=MAX_NEWTON {
        if norm <= tol {
            check_maximum(d2, b, c)?;
            return Ok(SupportFit {
                support: Support::new(b, c)?,
                residuals: f,
                iterations: it,
            });
        }
        if it == MAX_NEWTON {
            break;
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == T::zero() || !det.is_finite() {
            break;
        }
        let db = (jac[1][1] * f[0] - jac[0][1] * f[1]) / det;
        let dc = (jac[0][0] * f[1] - jac[1][0] * f[0]) / det;
        let mut lambda = T::one();
        let mut accepted = false;
        for _ in 0..60 {
            let (nb, nc) = (b - lambda * db, c - lambda * dc);
            if nc > T::zero() {
                let (nf, nj) = endpoint_system(d1, d2, nb, nc);
                let nn = sup_norm(&nf);
                if nn < norm {
                    (b, c, f, jac, norm) = (nb, nc, nf, nj, nn);
                    accepted = true;
                    break;
                }
            }
            lambda = lambda * T::of(0.5);
        }
        if !accepted {
            break;
        }
    }
    Err(Error::NewtonDiverged {
        iterations: MAX_NEWTON,
        residual: norm.as_f64(),
    })
}

/// Hessian of `H(c, b)` must be negative definite at the root.
fn check_maximum<T: Scalar>(d2: &[T], b: T, c: T) -> Result<()> {
    let [w0, w1, w2] = beta_moments(d2, b, c);
    let half = T::of(0.5);
    let hcc = -T::one() / (c * c) - half * w2;
    let hcb = -half * w1;
    let hbb = -half * w0;
    if hcc < T::zero() && hcc * hbb - hcb * hcb > T::zero() {
        Ok(())
    } else {
        Err(Error::NotMaximum {
            b: b.as_f64(),
            c: c.as_f64(),
        })
    }
}

fn mass_tol<T: Scalar>() -> T {
    T::of(MASS_TOL).max(T::epsilon() * T::of(1e3))
}

/// `w = c^2 U_{b,c}(V')`, the density of the equilibrium measure against
/// `alpha_{b,c}`.
pub fn equilibrium_density<T: Scalar>(v: &Potential<T>, s: Support<T>) -> Result<ChebSeries<T>> {
    let c = s.scale();
    let dv = v.derivative().to_series(s);
    let w = apply(OperatorKind::U, &dv).scale(c * c);
    let mass = measures::integrate(&w, MeasureKind::Semicircle(s))?;
    if (mass - T::one()).abs() > mass_tol() {
        return Err(Error::MassMismatch { mass: mass.as_f64() });
    }
    let min = positivity_margin(&w);
    if min < -T::of(CLAMP_TOL) {
        return Err(Error::NegativeDensity { min: min.as_f64() });
    }
    Ok(w)
}

/// Minimum of a series over a dense Chebyshev grid of its support.
pub fn positivity_margin<T: Scalar>(w: &ChebSeries<T>) -> T {
    let s = w.support();
    let n = 16 * (w.degree() + 1) + 256;
    (0..=n)
        .map(|j| w.eval(s.from_local(T::of(2.0) * (T::PI() * T::of_usize(j) / T::of_usize(n)).cos())))
        .fold(T::infinity(), T::min)
}

/// Solved equilibrium problem.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSolution<T> {
    pub support: Support<T>,
    /// Density of `mu_V` against `alpha_{b,c}`.
    pub w: ChebSeries<T>,
    /// `E_V` by the spectral route.
    pub energy: T,
    /// Minimum of `w` on the support.
    pub positivity_margin: T,
    /// Endpoint-system residuals at the returned support.
    pub residuals: [T; 2],
    pub iterations: usize,
}

impl<T: Scalar> EquilibriumSolution<T> {
    pub fn measure(&self) -> DensityMeasure<T> {
        DensityMeasure::new(MeasureKind::Semicircle(self.support), self.w.clone())
            .expect("density shares the support")
    }

    pub fn mass(&self) -> T {
        self.measure().mass()
    }

    /// `2 int log|x - y| mu_V(dy) - V(x)`, constant on the support.
    pub fn effective_potential(&self, v: &Potential<T>, x: T) -> Result<T> {
        Ok(T::of(2.0) * log_potential(&self.measure(), x)? - v.eval(x))
    }
}

/// Full solve from the default starting point.
pub fn solve<T: Scalar>(v: &Potential<T>) -> Result<EquilibriumSolution<T>> {
    solve_with(v, default_initial(v), T::of(DEFAULT_TOL))
}

pub fn solve_with<T: Scalar>(v: &Potential<T>, initial: Support<T>, tol: T) -> Result<EquilibriumSolution<T>> {
    let fit = fit_support(v, initial, tol)?;
    let w = equilibrium_density(v, fit.support)?;
    let margin = positivity_margin(&w);
    let mut sol = EquilibriumSolution {
        support: fit.support,
        w,
        energy: T::zero(),
        positivity_margin: margin,
        residuals: fit.residuals,
        iterations: fit.iterations,
    };
    sol.energy = energy(v, &sol, EnergyRoute::Spectral)?;
    Ok(sol)
}

/// Independent ways of computing `E_V = min (int V dmu - iint log|x-y| dmu dmu)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyRoute {
    /// `-log c + int V dbeta - (c^2/2) Omega(V, V)` in coefficient space.
    Spectral,
    /// `int V dmu_V` by Gauss quadrature minus the log energy from moments.
    Quadrature,
    /// `int V~ dbeta - <N V~, V~> / 4 - log c` with both pairings by
    /// quadrature on the rescaled field.
    Variational,
}

impl EnergyRoute {
    pub const ALL: [EnergyRoute; 3] = [EnergyRoute::Spectral, EnergyRoute::Quadrature, EnergyRoute::Variational];
}

pub fn energy<T: Scalar>(v: &Potential<T>, sol: &EquilibriumSolution<T>, route: EnergyRoute) -> Result<T> {
    let s = sol.support;
    let c = s.scale();
    let vs = v.to_series(s);
    match route {
        EnergyRoute::Spectral => {
            let omega = measures::omega_form(&vs, &vs)?;
            Ok(-c.ln() + vs.coeff(0) - T::of(0.5) * c * c * omega)
        }
        EnergyRoute::Quadrature => {
            let rule = quadrature::semicircle::<T>((v.degree() + sol.w.degree()) / 2 + 2);
            let lin = rule.integrate(|t| {
                let x = s.from_local(t);
                v.eval(x) * sol.w.eval(x)
            });
            Ok(lin - log_energy(&sol.measure()))
        }
        EnergyRoute::Variational => {
            let rule = quadrature::arcsine::<T>(v.degree() + 2);
            let nv = apply(OperatorKind::N, &vs);
            let mean = rule.integrate(|t| v.eval(s.from_local(t)));
            let pair = rule.integrate(|t| {
                let x = s.from_local(t);
                nv.eval(x) * v.eval(x)
            });
            Ok(mean - T::of(0.25) * pair - c.ln())
        }
    }
}

/// Energies by all routes, failing if they spread by more than
/// [`ROUTE_TOL`].
pub fn energy_checked<T: Scalar>(v: &Potential<T>, sol: &EquilibriumSolution<T>) -> Result<[T; 3]> {
    let e = [
        energy(v, sol, EnergyRoute::Spectral)?,
        energy(v, sol, EnergyRoute::Quadrature)?,
        energy(v, sol, EnergyRoute::Variational)?,
    ];
    let gap = e.iter().fold(T::neg_infinity(), |m, &x| m.max(x)) - e.iter().fold(T::infinity(), |m, &x| m.min(x));
    if gap > T::of(ROUTE_TOL) {
        return Err(Error::RouteDisagreement { gap: gap.as_f64() });
    }
    Ok(e)
}

/// Residuals of the variational characterization on finite grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalReport<T> {
    /// Mean of `2 U^mu - V` over the interior grid.
    pub constant: T,
    /// Largest deviation of `2 U^mu - V` from its mean on the interior grid.
    pub equality_residual: T,
    /// Largest excess of `2 U^mu - V` over the constant off the support.
    pub exterior_violation: T,
    /// Smallest gap below the constant off the support.
    pub exterior_slack: T,
    /// Largest `|H mu - V'|` on the interior grid.
    pub hilbert_residual: T,
}

/// Checks equality of `2 U^mu - V` on an interior grid of `grid` points,
/// the inequality on `grid` exterior points on each side out to distance
/// `4c` from the endpoints, and `H mu_V = V'` on the interior grid.
pub fn verify_variational<T: Scalar>(
    v: &Potential<T>,
    sol: &EquilibriumSolution<T>,
    grid: usize,
) -> Result<VariationalReport<T>> {
    let grid = grid.max(2);
    let s = sol.support;
    let mu = sol.measure();
    let h = hilbert_series(&mu);
    let dv = v.derivative();
    let g = T::of_usize(grid);
    let interior: Vec<T> = (0..grid)
        .map(|j| s.from_local(T::of(-2.0) + T::of(4.0) * (T::of_usize(j) + T::of(0.5)) / g))
        .collect();
    let vals = interior
        .iter()
        .map(|&x| sol.effective_potential(v, x))
        .collect::<Result<Vec<T>>>()?;
    let constant = vals.iter().copied().sum::<T>() / g;
    let equality_residual = vals.iter().fold(T::zero(), |m, &x| m.max((x - constant).abs()));
    let hilbert_residual = interior
        .iter()
        .fold(T::zero(), |m, &x| m.max((h.eval(x) - dv.eval(x)).abs()));
    let mut exterior_violation = T::zero();
    let mut exterior_slack = T::infinity();
    for j in 1..=grid {
        let off = T::of(2.0) + T::of(4.0) * T::of_usize(j) / g;
        for x in [s.from_local(off), s.from_local(-off)] {
            let gap = constant - sol.effective_potential(v, x)?;
            exterior_violation = exterior_violation.max(-gap);
            exterior_slack = exterior_slack.min(gap);
        }
    }
    Ok(VariationalReport {
        constant,
        equality_residual,
        exterior_violation,
        exterior_slack,
        hilbert_residual,
    })
}

/// Signed measure `mu = u beta_{b,c}` of prescribed mass whose potential
/// matches `V`: `2 int log|x - y| mu(dy) = V(x) + C` on the support.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseSolution<T> {
    pub measure: DensityMeasure<T>,
    pub constant: T,
}

/// Builds `u` by evaluating, at Lobatto nodes of the local frame,
/// `u(s) = A - 1/2 int t V'(t) beta(dt) - s/2 int V' dbeta
///     + (4 - s^2)/2 int (V'(s) - V'(t)) / (s - t) beta(dt)`,
/// with the three integrals done by Gauss–Chebyshev quadrature.
pub fn inverse_problem<T: Scalar>(v: &ChebSeries<T>, mass: T) -> Result<InverseSolution<T>> {
    let s = v.support();
    let vl = v.local();
    let g = vl.differentiate();
    let dg = g.differentiate();
    let rule = quadrature::arcsine::<T>(v.degree() + 2);
    let half = T::of(0.5);
    let m1 = rule.integrate(|t| t * g.eval(t));
    let m0 = rule.integrate(|t| g.eval(t));
    let nodes = Support::<T>::unit().lobatto_nodes(v.degree() + 1);
    let values: Vec<T> = nodes
        .iter()
        .map(|&x| {
            let gx = g.eval(x);
            let q = rule.integrate(|t| {
                let d = x - t;
                if d.abs() <= T::epsilon() * T::of(16.0) {
                    dg.eval(x)
                } else {
                    (gx - g.eval(t)) / d
                }
            });
            mass - half * m1 - half * x * m0 + half * (T::of(4.0) - x * x) * q
        })
        .collect();
    let u = ChebSeries::analyze(&values, Support::unit())?.rescale(s);
    let measure = DensityMeasure::new(MeasureKind::Arcsine(s), u)?;
    let constant = -measures::integrate(v, MeasureKind::Arcsine(s))? + T::of(2.0) * mass * s.scale().ln();
    Ok(InverseSolution { measure, constant })
}

/// The same density in coefficient form, `u = A - N V / 2`.
pub fn inverse_problem_spectral<T: Scalar>(v: &ChebSeries<T>, mass: T) -> ChebSeries<T> {
    apply(OperatorKind::N, v).scale(-T::of(0.5)).add_constant(mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pot(c: &[f64]) -> Potential<f64> {
        Potential::new(c.to_vec()).unwrap()
    }

    #[test]
    fn solve_support_examples() {
        let q = pot(&[0.0, 0.0, 0.5]);
        let s = solve_support(&q, default_initial(&q), 1e-12).unwrap();
        assert_abs_diff_eq!(s.center(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.scale(), 1.0, epsilon = 1e-12);

        let quartic = pot(&[0.0, 0.0, 0.0, 0.0, 0.25]);
        let s = solve_support(&quartic, default_initial(&quartic), 1e-12).unwrap();
        assert_abs_diff_eq!(s.scale(), 3f64.powf(-0.25), epsilon = 1e-12);
        // Brute-force maximization of H(c, 0) on a grid as an oracle.
        let h = |c: f64| c.ln() - 0.5 * 0.25 * c.powi(4) * 6.0;
        let best = (1..20000).map(|i| i as f64 * 1e-4).fold((0.0, f64::NEG_INFINITY), |acc, c| {
            if h(c) > acc.1 {
                (c, h(c))
            } else {
                acc
            }
        });
        assert_abs_diff_eq!(best.0, s.scale(), epsilon = 2e-4);

        let shifted = pot(&[0.5, -1.0, 0.5]);
        let s = solve_support(&shifted, default_initial(&shifted), 1e-12).unwrap();
        assert_abs_diff_eq!(s.center(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.scale(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_inadmissible() {
        assert!(matches!(solve(&pot(&[0.0, 1.0])), Err(Error::Assumption(_))));
        assert!(matches!(solve(&pot(&[0.0, 0.0, -1.0])), Err(Error::Assumption(_))));
    }

    #[test]
    fn density_examples() {
        let sol = solve(&pot(&[0.0, 0.0, 0.5])).unwrap();
        assert_abs_diff_eq!(sol.w.coeff(0), 1.0, epsilon = 1e-12);
        assert!(sol.w.coeffs()[1..].iter().all(|a| a.abs() < 1e-12));

        let sol = solve(&pot(&[0.0, 0.0, 0.0, 0.0, 0.25])).unwrap();
        let c = sol.support.scale();
        for i in 0..9 {
            let x = -2.0 * c + 4.0 * c * i as f64 / 8.0;
            assert_abs_diff_eq!(sol.w.eval(x), c * c * (x * x + 2.0 * c * c), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(sol.mass(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn energy_routes_quadratic() {
        let v = pot(&[0.0, 0.0, 0.5]);
        let sol = solve(&v).unwrap();
        for e in energy_checked(&v, &sol).unwrap() {
            assert_abs_diff_eq!(e, 0.75, epsilon = 1e-12);
        }
        let v = pot(&[0.0, 0.3, 0.5]);
        let sol = solve(&v).unwrap();
        assert_abs_diff_eq!(sol.energy, 0.75 - 0.045, epsilon = 1e-12);
    }

    #[test]
    fn variational_quadratic() {
        let v = pot(&[0.0, 0.0, 0.5]);
        let sol = solve(&v).unwrap();
        let r = verify_variational(&v, &sol, 100).unwrap();
        assert!(r.equality_residual < 1e-8);
        assert!(r.hilbert_residual < 1e-8);
        assert!(r.exterior_violation < 1e-8);
        let x = 3.0;
        assert!(r.constant - sol.effective_potential(&v, x).unwrap() > 0.1);
    }

    #[test]
    fn inverse_routes_agree() {
        let s = Support::new(0.0, 1.0).unwrap();
        let v = ChebSeries::from_monomials(s, &[0.1, -0.4, 0.3, 0.2]);
        let inv = inverse_problem(&v, 1.0).unwrap();
        let spec = inverse_problem_spectral(&v, 1.0);
        for n in 0..=spec.degree() {
            assert_abs_diff_eq!(inv.measure.density().coeff(n), spec.coeff(n), epsilon = 1e-12);
        }
    }

    #[test]
    fn compose_affine_matches_eval() {
        let p = [1.0, -2.0, 0.5, 3.0];
        let q = compose_affine(&p, 0.7, -0.3);
        let pe = |x: f64| p.iter().rev().fold(0.0, |a, &v| a * x + v);
        let qe = |x: f64| q.iter().rev().fold(0.0, |a, &v| a * x + v);
        for &s in &[-1.0, 0.0, 0.4, 2.0] {
            assert_abs_diff_eq!(qe(s), pe(0.7 * s - 0.3), epsilon = 1e-12);
        }
    }
}
