//! Second-order expansion of the equilibrium energy of `V + t f + t^2 g`,
//! the first-order variation of the equilibrium measure, and the
//! linearized transport map, with finite-difference checks against full
//! re-solves.

use rayon::prelude::*;

use crate::cheb::{ChebSeries, Support};
use crate::equilibrium::{self, solve, EquilibriumSolution, Potential};
use crate::error::{Error, Result};
use crate::inequalities::wasserstein2;
use crate::measures::{omega_form, DensityMeasure, MeasureKind};
use crate::operators::{apply, OperatorKind};
use crate::scalar::Scalar;

/// Default step ladder for [`finite_difference_check`].
pub const DEFAULT_LADDER: [f64; 3] = [1e-2, 5e-3, 2.5e-3];
/// Tail tolerance of the quotient series in [`transport_linearization`].
pub const TAIL_TOL: f64 = 1e-8;
/// Extra degrees beyond `deg f + deg V` tried first for the quotient series.
pub const GUARD: usize = 8;
const MAX_QUOTIENT_DEGREE: usize = 4096;

/// `E_{V + t f + t^2 g} = e0 + a1 t + a2 t^2 + o(t^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyExpansion<T> {
    pub e0: T,
    pub a1: T,
    pub a2: T,
}

fn require_assumption<T: Scalar>(sol: &EquilibriumSolution<T>) -> Result<()> {
    if sol.positivity_margin > T::zero() {
        Ok(())
    } else {
        Err(Error::Assumption(format!(
            "equilibrium density must stay positive (minimum {})",
            sol.positivity_margin
        )))
    }
}

pub fn energy_expansion<T: Scalar>(v: &Potential<T>, f: &Potential<T>, g: &Potential<T>) -> Result<EnergyExpansion<T>> {
    let sol = solve(v)?;
    energy_expansion_with(&sol, f, g)
}

/// `a1 = int f dmu_V`, `a2 = int g dmu_V - (c^2 / 2) Omega_{b,c}(f, f)`.
pub fn energy_expansion_with<T: Scalar>(
    sol: &EquilibriumSolution<T>,
    f: &Potential<T>,
    g: &Potential<T>,
) -> Result<EnergyExpansion<T>> {
    require_assumption(sol)?;
    let s = sol.support;
    let mu = sol.measure();
    let fs = f.to_series(s);
    let gs = g.to_series(s);
    let c = s.scale();
    Ok(EnergyExpansion {
        e0: sol.energy,
        a1: mu.integrate(&fs)?,
        a2: mu.integrate(&gs)? - T::of(0.5) * c * c * omega_form(&fs, &fs)?,
    })
}

/// `Psi_f(x) = sqrt(4c^2 - (x-b)^2) / (2 pi) * (U_{b,c} f)(x)`, a primitive
/// of the first-order measure variation.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiPrimitive<T> {
    pub uf: ChebSeries<T>,
}

impl<T: Scalar> PsiPrimitive<T> {
    pub fn psi(&self, x: T) -> T {
        let s = self.uf.support();
        let r2 = T::of(4.0) * s.scale() * s.scale() - (x - s.center()).powi(2);
        if r2 <= T::zero() {
            return T::zero();
        }
        r2.sqrt() / (T::of(2.0) * T::PI()) * self.uf.eval(x)
    }
}

/// Signed measure `nu_f = -(1/2) (N f) beta_{b,c}` of total mass zero and its
/// primitive `Psi_f`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderMeasure<T> {
    pub nu: DensityMeasure<T>,
    pub psi: PsiPrimitive<T>,
}

pub fn first_order_measure<T: Scalar>(f: &Potential<T>, s: Support<T>) -> FirstOrderMeasure<T> {
    let fs = f.to_series(s);
    let density = apply(OperatorKind::N, &fs).scale(-T::of(0.5));
    FirstOrderMeasure {
        nu: DensityMeasure::new(MeasureKind::Arcsine(s), density).expect("finite density on the support"),
        psi: PsiPrimitive {
            uf: apply(OperatorKind::U, &fs),
        },
    }
}

/// Linearized transport map `zeta = -U_{b,c} f / U_{b,c} V'`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportLinearization<T> {
    pub zeta: ChebSeries<T>,
    /// `int zeta^2 dmu_V`, the limit of `W_2^2(mu_{V+tf}, mu_V) / t^2`.
    pub zeta_sq_mean: T,
    /// Degree at which the quotient series resolved.
    pub degree: usize,
}

pub fn transport_linearization<T: Scalar>(v: &Potential<T>, f: &Potential<T>) -> Result<TransportLinearization<T>> {
    let sol = solve(v)?;
    transport_linearization_with(v, &sol, f)
}

/// Node-wise division re-analyzed at `deg f + deg V + GUARD`, doubling the
/// degree until the last two coefficients fall below `TAIL_TOL` times the
/// largest.
pub fn transport_linearization_with<T: Scalar>(
    v: &Potential<T>,
    sol: &EquilibriumSolution<T>,
    f: &Potential<T>,
) -> Result<TransportLinearization<T>> {
    require_assumption(sol)?;
    let s = sol.support;
    let uf = apply(OperatorKind::U, &f.to_series(s));
    let uv = apply(OperatorKind::U, &v.derivative().to_series(s));
    let margin = equilibrium::positivity_margin(&uv);
    if !(margin > T::of(TAIL_TOL) * uv.max_abs_coeff()) {
        return Err(Error::Assumption(format!(
            "denominator U(V') has margin {margin} on the support"
        )));
    }
    let mut k = f.degree() + v.degree() + GUARD;
    loop {
        let zeta = ChebSeries::interpolate(s, k, |x| -uf.eval(x) / uv.eval(x))?;
        let max = zeta.max_abs_coeff();
        let tail = zeta.coeff(k).abs().max(zeta.coeff(k - 1).abs());
        if tail <= T::of(TAIL_TOL) * max {
            let zeta = zeta.trimmed();
            let zeta_sq_mean = sol.measure().integrate(&zeta.multiply(&zeta)?)?;
            return Ok(TransportLinearization {
                zeta,
                zeta_sq_mean,
                degree: k,
            });
        }
        if k >= MAX_QUOTIENT_DEGREE {
            return Err(Error::Unresolved {
                degree: k,
                ratio: (tail / max).as_f64(),
            });
        }
        k *= 2;
    }
}

/// `W_2^2(mu_{V+tf}, mu_V) / t^2` next to its predicted limit
/// `int zeta^2 dmu_V`.
pub fn transport_check<T: Scalar>(v: &Potential<T>, f: &Potential<T>, t: T, grid: usize) -> Result<(T, T)> {
    if t == T::zero() || !t.is_finite() {
        return Err(Error::InvalidArgument("step must be finite and nonzero".into()));
    }
    let sol = solve(v)?;
    let lin = transport_linearization_with(v, &sol, f)?;
    let moved = equilibrium::solve_with(&v.add_scaled(f, t), sol.support, T::of(equilibrium::DEFAULT_TOL))?;
    let w = wasserstein2(&moved.measure(), &sol.measure(), grid)?;
    Ok((w * w / (t * t), lin.zeta_sq_mean))
}

/// Finite-difference estimates of `a1`, `a2` from full solves at `+-t`,
/// `+-t/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdReport<T> {
    pub t: T,
    pub expansion: EnergyExpansion<T>,
    /// Symmetric first differences at `t` and `t/2`.
    pub a1_fd: [T; 2],
    /// Symmetric second differences divided by 2, at `t` and `t/2`.
    pub a2_fd: [T; 2],
    /// `(4 a(t/2) - a(t)) / 3`.
    pub a1_richardson: T,
    pub a2_richardson: T,
    /// `|a_fd - a|` at `t` and `t/2`.
    pub a1_error: [T; 2],
    pub a2_error: [T; 2],
}

impl<T: Scalar> FdReport<T> {
    /// Error reduction of the `a2` estimate when `t` is halved.
    pub fn a2_decay(&self) -> T {
        self.a2_error[0] / self.a2_error[1]
    }
}

pub fn finite_difference_check<T: Scalar>(
    v: &Potential<T>,
    f: &Potential<T>,
    g: &Potential<T>,
    t: T,
) -> Result<FdReport<T>> {
    if t == T::zero() || !t.is_finite() {
        return Err(Error::InvalidArgument("step must be finite and nonzero".into()));
    }
    let sol = solve(v)?;
    let expansion = energy_expansion_with(&sol, f, g)?;
    let half = T::of(0.5) * t;
    let steps = [t, -t, half, -half];
    let energies = steps
        .par_iter()
        .map(|&h| {
            let vt = v.add_scaled(f, h).add_scaled(g, h * h);
            equilibrium::solve_with(&vt, sol.support, T::of(equilibrium::DEFAULT_TOL)).map(|s| s.energy)
        })
        .collect::<Result<Vec<T>>>()?;
    let e0 = sol.energy;
    let two = T::of(2.0);
    let a1 = |ep: T, em: T, h: T| (ep - em) / (two * h);
    let a2 = |ep: T, em: T, h: T| (ep - two * e0 + em) / (two * h * h);
    let a1_fd = [a1(energies[0], energies[1], t), a1(energies[2], energies[3], half)];
    let a2_fd = [a2(energies[0], energies[1], t), a2(energies[2], energies[3], half)];
    let rich = |a: [T; 2]| (T::of(4.0) * a[1] - a[0]) / T::of(3.0);
    Ok(FdReport {
        t,
        expansion,
        a1_fd,
        a2_fd,
        a1_richardson: rich(a1_fd),
        a2_richardson: rich(a2_fd),
        a1_error: a1_fd.map(|a| (a - expansion.a1).abs()),
        a2_error: a2_fd.map(|a| (a - expansion.a2).abs()),
    })
}

/// [`finite_difference_check`] over a ladder of steps.
pub fn fd_ladder<T: Scalar>(
    v: &Potential<T>,
    f: &Potential<T>,
    g: &Potential<T>,
    ladder: &[T],
) -> Result<Vec<FdReport<T>>> {
    ladder.iter().map(|&t| finite_difference_check(v, f, g, t)).collect()
}
