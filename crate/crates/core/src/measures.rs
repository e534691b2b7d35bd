//! Arcsine and semicircle laws on a support, the `Omega` pairing, and
//! measures with a Chebyshev density against either law.

use crate::cheb::{ChebSeries, Support};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Mass tolerance for [`DensityMeasure::probability`].
pub const MASS_TOL: f64 = 1e-8;
/// Negative density values above this are treated as rounding and clamped.
pub const CLAMP_TOL: f64 = 1e-10;

/// Reference measure on a support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureKind<T> {
    /// `beta_{b,c}`, density `1 / (pi sqrt(4c^2 - (x-b)^2))`.
    Arcsine(Support<T>),
    /// `alpha_{b,c}`, density `sqrt(4c^2 - (x-b)^2) / (2 pi c^2)`.
    Semicircle(Support<T>),
}

impl<T: Scalar> MeasureKind<T> {
    pub fn support(&self) -> Support<T> {
        match *self {
            MeasureKind::Arcsine(s) | MeasureKind::Semicircle(s) => s,
        }
    }

    /// Lebesgue density of the reference measure at `x` (zero off support).
    pub fn weight(&self, x: T) -> T {
        let s = self.support();
        let r2 = T::of(4.0) - s.to_local(x).powi(2);
        if r2 <= T::zero() {
            return T::zero();
        }
        match self {
            MeasureKind::Arcsine(_) => T::one() / (T::PI() * s.scale() * r2.sqrt()),
            MeasureKind::Semicircle(_) => r2.sqrt() / (T::of(2.0) * T::PI() * s.scale()),
        }
    }
}

/// Integral of a series against the arcsine or semicircle law, in closed form.
///
/// Against the arcsine law only `phi_0` survives. Against the semicircle law,
/// `phi_n = (psi_n - psi_{n-2}) / 2` leaves `phi_0 -> 1` and `phi_2 -> -1/2`.
pub fn integrate<T: Scalar>(f: &ChebSeries<T>, m: MeasureKind<T>) -> Result<T> {
    if f.support() != m.support() {
        return Err(Error::SupportMismatch);
    }
    Ok(integrate_coeffs(f.coeffs(), &m))
}

fn integrate_coeffs<T: Scalar>(a: &[T], m: &MeasureKind<T>) -> T {
    let a0 = a.first().copied().unwrap_or_else(T::zero);
    match m {
        MeasureKind::Arcsine(_) => a0,
        MeasureKind::Semicircle(_) => a0 - T::of(0.5) * a.get(2).copied().unwrap_or_else(T::zero),
    }
}

/// `<f, g>` in `L^2(beta_{b,c})`.
pub fn inner_beta<T: Scalar>(f: &ChebSeries<T>, g: &ChebSeries<T>) -> Result<T> {
    f.check_support(g)?;
    Ok(inner_beta_coeffs(f.coeffs(), g.coeffs()))
}

pub(crate) fn inner_beta_coeffs<T: Scalar>(a: &[T], b: &[T]) -> T {
    let tail: T = a.iter().zip(b).skip(1).map(|(&x, &y)| x * y).sum();
    a[0] * b[0] + T::of(0.5) * tail
}

/// `Omega_{b,c}(f, g)`, the `omega_{b,c}` integral of the product of the
/// difference quotients of `f` and `g`, computed as `sum n a_n b_n / (4 c^2)`.
pub fn omega_form<T: Scalar>(f: &ChebSeries<T>, g: &ChebSeries<T>) -> Result<T> {
    f.check_support(g)?;
    let c = f.support().scale();
    Ok(omega_local(f.coeffs(), g.coeffs()) / (c * c))
}

/// The same pairing in the local frame, `sum n a_n b_n / 4`.
pub(crate) fn omega_local<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .enumerate()
        .skip(1)
        .map(|(n, (&x, &y))| T::of_usize(n) * x * y)
        .sum::<T>()
        * T::of(0.25)
}

/// Measure `u d(base)` with `u` a Chebyshev series on the base support.
/// Signed densities are allowed; [`probability`](Self::probability) checks
/// positivity and unit mass.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMeasure<T> {
    base: MeasureKind<T>,
    density: ChebSeries<T>,
}

impl<T: Scalar> DensityMeasure<T> {
    pub fn new(base: MeasureKind<T>, density: ChebSeries<T>) -> Result<Self> {
        if density.support() != base.support() {
            return Err(Error::SupportMismatch);
        }
        if density.coeffs().iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite("density coefficients"));
        }
        Ok(Self { base, density })
    }

    /// As [`new`](Self::new), additionally requiring unit mass and a density
    /// that is nonnegative up to [`CLAMP_TOL`].
    pub fn probability(base: MeasureKind<T>, density: ChebSeries<T>) -> Result<Self> {
        let m = Self::new(base, density)?;
        m.check_probability()?;
        Ok(m)
    }

    pub fn arcsine(s: Support<T>) -> Self {
        Self {
            base: MeasureKind::Arcsine(s),
            density: ChebSeries::constant(s, T::one()),
        }
    }

    pub fn semicircle(s: Support<T>) -> Self {
        Self {
            base: MeasureKind::Semicircle(s),
            density: ChebSeries::constant(s, T::one()),
        }
    }

    pub fn base(&self) -> MeasureKind<T> {
        self.base
    }

    pub fn support(&self) -> Support<T> {
        self.base.support()
    }

    pub fn density(&self) -> &ChebSeries<T> {
        &self.density
    }

    pub fn mass(&self) -> T {
        integrate_coeffs(self.density.coeffs(), &self.base)
    }

    /// Smallest value of the density on a fine grid including the endpoints.
    pub fn min_density(&self) -> T {
        let s = self.support();
        let n = 8 * (self.density.degree() + 1) + 64;
        (0..=n)
            .map(|j| {
                let x = s.from_local(T::of(2.0) * (T::PI() * T::of_usize(j) / T::of_usize(n)).cos());
                self.density.eval(x)
            })
            .fold(T::infinity(), T::min)
    }

    pub fn check_probability(&self) -> Result<()> {
        let mass = self.mass();
        if (mass - T::one()).abs() > T::of(MASS_TOL) {
            return Err(Error::NotProbability { mass: mass.as_f64() });
        }
        let min = self.min_density();
        if min < -T::of(CLAMP_TOL) {
            return Err(Error::NegativeDensity { min: min.as_f64() });
        }
        Ok(())
    }

    /// `int f dmu` for a series on the same support, exact.
    pub fn integrate(&self, f: &ChebSeries<T>) -> Result<T> {
        let prod = f.multiply(&self.density)?;
        Ok(integrate_coeffs(prod.coeffs(), &self.base))
    }

    /// Lebesgue density at `x`.
    pub fn lebesgue_density(&self, x: T) -> T {
        self.base.weight(x) * self.density.eval(x)
    }

    /// Moments `m_n = int phi_n dmu` for `n = 0..=deg`, where `deg` is the
    /// highest index with a possibly nonzero moment.
    pub fn phi_moments(&self) -> Vec<T> {
        let u = self.density.coeffs();
        let half = T::of(0.5);
        match self.base {
            MeasureKind::Arcsine(_) => {
                let mut m: Vec<T> = u.iter().map(|&a| half * a).collect();
                m[0] = u[0];
                m
            }
            MeasureKind::Semicircle(_) => {
                // int phi_k d alpha: 1 at k = 0, -1/2 at k = 2, else 0.
                let i = |k: usize| match k {
                    0 => T::one(),
                    2 => -half,
                    _ => T::zero(),
                };
                let deg = u.len() + 1;
                (0..=deg)
                    .map(|n| {
                        u.iter()
                            .enumerate()
                            .map(|(m, &a)| half * a * (i(n.abs_diff(m)) + i(n + m)))
                            .sum()
                    })
                    .collect()
            }
        }
    }

    /// Density against the uniform measure `dtheta / pi` under
    /// `x = b + 2c cos(theta)`, as cosine-series coefficients.
    fn theta_density(&self) -> Vec<T> {
        match self.base {
            MeasureKind::Arcsine(_) => self.density.coeffs().to_vec(),
            MeasureKind::Semicircle(s) => {
                // d alpha = 2 sin^2(theta) dtheta / pi = (phi_0 - phi_2) dtheta / pi.
                let k = ChebSeries::new(s, vec![T::one(), T::zero(), -T::one()]);
                self.density.multiply(&k).expect("same support").into_coeffs()
            }
        }
    }

    /// Cumulative distribution function, in closed form through the cosine
    /// substitution. Clamped to 0 and 1 off the support.
    pub fn cdf(&self, x: T) -> T {
        let s = self.support().to_local(x) / T::of(2.0);
        if s <= -T::one() {
            return T::zero();
        }
        if s >= T::one() {
            return self.mass();
        }
        cdf_theta(&self.theta_density(), s.acos())
    }

    /// Quantile function `F^{-1}(p)` by safeguarded Newton in `theta`.
    pub fn quantile(&self, p: T) -> Result<T> {
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::InvalidArgument(format!("quantile level {p} outside (0, 1)")));
        }
        self.check_probability()?;
        let c = self.theta_density();
        Ok(self.quantile_unchecked(&c, p))
    }

    /// Quantiles at many levels, checking the measure once.
    pub fn quantiles(&self, ps: &[T]) -> Result<Vec<T>> {
        if let Some(&p) = ps.iter().find(|&&p| !(p > T::zero() && p < T::one())) {
            return Err(Error::InvalidArgument(format!("quantile level {p} outside (0, 1)")));
        }
        self.check_probability()?;
        let c = self.theta_density();
        Ok(ps.iter().map(|&p| self.quantile_unchecked(&c, p)).collect())
    }

    fn quantile_unchecked(&self, c: &[T], p: T) -> T {
        // F(theta) decreases from 1 at theta = 0 to 0 at theta = pi.
        let (mut lo, mut hi) = (T::zero(), T::PI());
        let mut theta = T::PI() * (T::one() - p);
        let tol = T::epsilon() * T::of(4.0);
        for _ in 0..200 {
            let f = cdf_theta(c, theta) - p;
            if f.abs() <= tol {
                break;
            }
            if f > T::zero() {
                lo = theta;
            } else {
                hi = theta;
            }
            let d = -density_theta(c, theta).max(T::zero()) / T::PI();
            let newton = theta - f / d;
            theta = if d < T::zero() && newton > lo && newton < hi {
                newton
            } else {
                T::of(0.5) * (lo + hi)
            };
            if hi - lo <= tol {
                break;
            }
        }
        self.support().from_local(T::of(2.0) * theta.cos())
    }

    /// Same measure on another support with the same coefficients.
    pub fn rescaled(&self, to: Support<T>) -> Self {
        let base = match self.base {
            MeasureKind::Arcsine(_) => MeasureKind::Arcsine(to),
            MeasureKind::Semicircle(_) => MeasureKind::Semicircle(to),
        };
        Self {
            base,
            density: self.density.rescale(to),
        }
    }
}

/// `(1/pi) [c_0 (pi - theta) - sum c_n sin(n theta) / n]`.
fn cdf_theta<T: Scalar>(c: &[T], theta: T) -> T {
    let tail: T = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &a)| {
            let n_t = T::of_usize(n);
            a * (n_t * theta).sin() / n_t
        })
        .sum();
    (c[0] * (T::PI() - theta) - tail) / T::PI()
}

fn density_theta<T: Scalar>(c: &[T], theta: T) -> T {
    c.iter()
        .enumerate()
        .map(|(n, &a)| a * (T::of_usize(n) * theta).cos())
        .sum()
}
