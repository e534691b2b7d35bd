//! Chebyshev series on an arbitrary interval.
//!
//! A [`Support`] `(b, c)` names the interval `[b - 2c, b + 2c]`. Functions on
//! it are stored as coefficient vectors in the basis
//! `phi_n(x) = T_n((x - b) / (2c))`, the first-kind Chebyshev polynomials in
//! half-argument form. The same polynomials with second-kind `U_n` are written
//! `psi_n`; they only appear transiently, through [`phi_to_psi`] and
//! [`psi_to_phi`].

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative drop tolerance used by [`ChebSeries::trimmed`].
pub const DEFAULT_DROP_TOL: f64 = 1e-14;

/// Interval `[b - 2c, b + 2c]`, stored by center `b` and quarter-width `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support<T> {
    b: T,
    c: T,
}

impl<T: Scalar> Support<T> {
    pub fn new(b: T, c: T) -> Result<Self> {
        if !b.is_finite() || !c.is_finite() || c <= T::zero() {
            return Err(Error::InvalidSupport {
                b: b.as_f64(),
                c: c.as_f64(),
            });
        }
        Ok(Self { b, c })
    }

    /// The reference interval `[-2, 2]`.
    pub fn unit() -> Self {
        Self {
            b: T::zero(),
            c: T::one(),
        }
    }

    pub fn center(&self) -> T {
        self.b
    }

    pub fn scale(&self) -> T {
        self.c
    }

    pub fn lower(&self) -> T {
        self.b - T::of(2.0) * self.c
    }

    pub fn upper(&self) -> T {
        self.b + T::of(2.0) * self.c
    }

    /// Affine map onto the reference interval, `x -> (x - b) / c`.
    pub fn to_local(&self, x: T) -> T {
        (x - self.b) / self.c
    }

    pub fn from_local(&self, s: T) -> T {
        self.c * s + self.b
    }

    /// Closed-interval membership with a relative slack of a few ulps.
    pub fn contains(&self, x: T) -> bool {
        let s = self.to_local(x);
        s.abs() <= T::of(2.0) * (T::one() + T::of(8.0) * T::epsilon())
    }

    /// `K + 1` Chebyshev–Gauss–Lobatto nodes `b + 2c cos(j pi / K)`, from the
    /// upper endpoint down. For `K = 0` the single node is the center.
    pub fn lobatto_nodes(&self, k: usize) -> Vec<T> {
        if k == 0 {
            return vec![self.b];
        }
        let table = cos_table::<T>(k);
        (0..=k)
            .map(|j| self.b + T::of(2.0) * self.c * table[j])
            .collect()
    }
}

/// `cos(pi m / k)` for `m = 0..2k`, so products `n j` can be reduced mod `2k`.
fn cos_table<T: Scalar>(k: usize) -> Vec<T> {
    let k_t = T::of_usize(k);
    (0..2 * k)
        .map(|m| (T::PI() * T::of_usize(m) / k_t).cos())
        .collect()
}

/// Finite Chebyshev series `sum_n a_n phi_n(x)` on a [`Support`].
#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries<T> {
    support: Support<T>,
    coeffs: Vec<T>,
}

impl<T: Scalar> ChebSeries<T> {
    /// Wraps a coefficient vector; an empty vector is read as the zero series.
    pub fn new(support: Support<T>, mut coeffs: Vec<T>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { support, coeffs }
    }

    pub fn zero(support: Support<T>) -> Self {
        Self::new(support, vec![T::zero()])
    }

    pub fn constant(support: Support<T>, value: T) -> Self {
        Self::new(support, vec![value])
    }

    /// The basis function `phi_n` itself.
    pub fn basis(support: Support<T>, n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        Self::new(support, coeffs)
    }

    /// The coordinate function `x = b + 2c phi_1`.
    pub fn identity(support: Support<T>) -> Self {
        Self::new(
            support,
            vec![support.center(), T::of(2.0) * support.scale()],
        )
    }

    /// Exact conversion of `sum_k p_k x^k` by Horner's scheme in series
    /// arithmetic.
    pub fn from_monomials(support: Support<T>, monomials: &[T]) -> Self {
        let x = Self::identity(support);
        let mut acc = Self::zero(support);
        for &p in monomials.iter().rev() {
            acc = acc.mul_same(&x);
            acc.coeffs[0] = acc.coeffs[0] + p;
        }
        acc.trim_exact_zeros()
    }

    /// Interpolates samples taken at the `K + 1` Lobatto nodes of `support`
    /// (in the order returned by [`Support::lobatto_nodes`]).
    pub fn analyze(values: &[T], support: Support<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySamples);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("samples"));
        }
        let k = values.len() - 1;
        if k == 0 {
            return Ok(Self::new(support, vec![values[0]]));
        }
        let table = cos_table::<T>(k);
        let half = T::of(0.5);
        let scale = T::of(2.0) / T::of_usize(k);
        let coeffs = (0..=k)
            .map(|n| {
                let mut acc = T::zero();
                for (j, &v) in values.iter().enumerate() {
                    let term = v * table[(n * j) % (2 * k)];
                    acc = acc + if j == 0 || j == k { half * term } else { term };
                }
                let a = scale * acc;
                if n == 0 || n == k {
                    half * a
                } else {
                    a
                }
            })
            .collect();
        Ok(Self::new(support, coeffs))
    }

    /// Samples `f` at `K + 1` Lobatto nodes and interpolates.
    pub fn interpolate<F: FnMut(T) -> T>(support: Support<T>, k: usize, mut f: F) -> Result<Self> {
        let values: Vec<T> = support.lobatto_nodes(k).into_iter().map(&mut f).collect();
        Self::analyze(&values, support)
    }

    pub fn support(&self) -> Support<T> {
        self.support
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `phi_n`, zero past the stored degree.
    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).copied().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Clenshaw evaluation. Points outside the support are extrapolated.
    pub fn eval(&self, x: T) -> T {
        clenshaw_t(&self.coeffs, self.support.to_local(x) / T::of(2.0))
    }

    pub fn evaluate(&self, x: T) -> Result<T> {
        if !x.is_finite() {
            return Err(Error::NonFinite("evaluation point"));
        }
        Ok(self.eval(x))
    }

    /// True when `x` lies outside the support, i.e. [`eval`](Self::eval)
    /// would extrapolate.
    pub fn extrapolates(&self, x: T) -> bool {
        !self.support.contains(x)
    }

    /// Derivative with respect to the physical variable `x`.
    ///
    /// Uses `T_n' = n U_{n-1}` followed by re-expansion of each `U_m` in the
    /// first-kind basis, and the chain-rule factor `1 / (2c)`.
    pub fn differentiate(&self) -> Self {
        let k = self.degree();
        if k == 0 {
            return Self::zero(self.support);
        }
        // d/du sum a_n T_n = sum_{m>=0} (m+1) a_{m+1} U_m, and
        // U_m = 2 (T_m + T_{m-2} + ...) with T_0 counted once.
        let mut d = vec![T::zero(); k];
        for m in (0..k).rev() {
            let carry = if m + 2 < k { d[m + 2] } else { T::zero() };
            d[m] = carry + T::of(2.0) * T::of_usize(m + 1) * self.coeffs[m + 1];
        }
        d[0] = d[0] * T::of(0.5);
        let chain = T::one() / (T::of(2.0) * self.support.scale());
        Self::new(self.support, d.into_iter().map(|v| v * chain).collect())
    }

    /// Exact product via `2 phi_n phi_m = phi_|n-m| + phi_{n+m}`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_support(other)?;
        Ok(self.mul_same(other))
    }

    fn mul_same(&self, other: &Self) -> Self {
        let (p, q) = (self.degree(), other.degree());
        let mut out = vec![T::zero(); p + q + 1];
        let half = T::of(0.5);
        for (n, &a) in self.coeffs.iter().enumerate() {
            if a == T::zero() {
                continue;
            }
            for (m, &b) in other.coeffs.iter().enumerate() {
                let h = half * a * b;
                out[n.abs_diff(m)] = out[n.abs_diff(m)] + h;
                out[n + m] = out[n + m] + h;
            }
        }
        Self::new(self.support, out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_support(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_support(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|n| f(self.coeff(n), other.coeff(n))).collect();
        Self::new(self.support, coeffs)
    }

    pub fn scale(&self, k: T) -> Self {
        Self::new(self.support, self.coeffs.iter().map(|&a| a * k).collect())
    }

    pub fn add_constant(&self, v: T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0] + v;
        out
    }

    /// Affine pullback onto another support: the result `g` on `to` satisfies
    /// `g(x') = f(x)` whenever `x'` and `x` have the same local coordinate.
    /// Coefficients are unchanged, so integrals against matched measures
    /// (`beta_{b,c}` to `beta_{b',c'}`, likewise for the semicircle) agree.
    pub fn rescale(&self, to: Support<T>) -> Self {
        Self::new(to, self.coeffs.clone())
    }

    /// The same function re-expressed in the basis of another support.
    /// Exact (up to rounding) for the polynomial the series represents.
    pub fn reexpand(&self, to: Support<T>) -> Self {
        if to == self.support {
            return self.clone();
        }
        let k = self.degree();
        let values: Vec<T> = to.lobatto_nodes(k).into_iter().map(|x| self.eval(x)).collect();
        Self::analyze(&values, to).expect("finite samples of a finite series")
    }

    /// Series on the reference support `(0, 1)` with the same coefficients.
    pub fn local(&self) -> Self {
        self.rescale(Support::unit())
    }

    /// Drops trailing coefficients below `rel_tol * max |a_n|`.
    pub fn trim(&self, rel_tol: T) -> Self {
        let max = self.coeffs.iter().fold(T::zero(), |m, a| m.max(a.abs()));
        let cut = rel_tol * max;
        let mut len = self.coeffs.len();
        while len > 1 && self.coeffs[len - 1].abs() <= cut {
            len -= 1;
        }
        Self::new(self.support, self.coeffs[..len].to_vec())
    }

    /// [`trim`](Self::trim) with [`DEFAULT_DROP_TOL`].
    pub fn trimmed(&self) -> Self {
        self.trim(T::of(DEFAULT_DROP_TOL))
    }

    fn trim_exact_zeros(mut self) -> Self {
        while self.coeffs.len() > 1 && *self.coeffs.last().unwrap() == T::zero() {
            self.coeffs.pop();
        }
        self
    }

    /// Pads with zeros (or truncates) to exactly `len` coefficients.
    pub fn resized(&self, len: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len.max(1), T::zero());
        Self::new(self.support, coeffs)
    }

    pub(crate) fn check_support(&self, other: &Self) -> Result<()> {
        if self.support != other.support {
            return Err(Error::SupportMismatch);
        }
        Ok(())
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, a| m.max(a.abs()))
    }
}

/// Clenshaw recurrence for `sum a_n T_n(u)`.
pub fn clenshaw_t<T: Scalar>(coeffs: &[T], u: T) -> T {
    let two_u = u + u;
    let (mut b1, mut b2) = (T::zero(), T::zero());
    for &a in coeffs.iter().skip(1).rev() {
        let b0 = a + two_u * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + u * b1 - b2
}

/// Clenshaw recurrence for `sum c_n U_n(u)`.
pub fn clenshaw_u<T: Scalar>(coeffs: &[T], u: T) -> T {
    let two_u = u + u;
    let (mut b1, mut b2) = (T::zero(), T::zero());
    for &a in coeffs.iter().rev() {
        let b0 = a + two_u * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    b1
}

/// First-kind coefficients to second-kind ones:
/// `phi_0 = psi_0`, `phi_1 = psi_1 / 2`, `phi_n = (psi_n - psi_{n-2}) / 2`.
pub fn phi_to_psi<T: Scalar>(phi: &[T]) -> Vec<T> {
    let half = T::of(0.5);
    let mut psi = vec![T::zero(); phi.len().max(1)];
    for (n, &a) in phi.iter().enumerate() {
        match n {
            0 => psi[0] = psi[0] + a,
            _ => {
                psi[n] = psi[n] + half * a;
                if n >= 2 {
                    psi[n - 2] = psi[n - 2] - half * a;
                }
            }
        }
    }
    psi
}

/// Second-kind coefficients to first-kind ones:
/// `psi_m = 2 (phi_m + phi_{m-2} + ...)` with `phi_0` counted once.
pub fn psi_to_phi<T: Scalar>(psi: &[T]) -> Vec<T> {
    let n = psi.len().max(1);
    let mut phi = vec![T::zero(); n];
    // Suffix sums over indices of equal parity.
    let mut acc = [T::zero(), T::zero()];
    for m in (0..psi.len()).rev() {
        acc[m % 2] = acc[m % 2] + psi[m];
        phi[m] = T::of(2.0) * acc[m % 2];
    }
    phi[0] = phi[0] * T::of(0.5);
    phi
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit() -> Support<f64> {
        Support::unit()
    }

    fn grid(s: Support<f64>, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| s.lower() + (s.upper() - s.lower()) * (i as f64 + 0.5) / n as f64)
            .collect()
    }

    #[test]
    fn support_rejects_bad_scale() {
        assert!(Support::new(0.0, 0.0).is_err());
        assert!(Support::new(0.0, -1.0).is_err());
        assert!(Support::new(f64::NAN, 1.0).is_err());
        assert!(Support::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn analyze_constant() {
        for k in 0..6 {
            let f = ChebSeries::analyze(&vec![1.0; k + 1], unit()).unwrap();
            assert_abs_diff_eq!(f.coeff(0), 1.0, epsilon = 1e-15);
            for n in 1..=k {
                assert_abs_diff_eq!(f.coeff(n), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn analyze_identity_and_square() {
        // Oracle: T_1(x/2) = x/2 and T_2(x/2) = x^2/2 - 1 on a grid.
        for &x in &grid(unit(), 11) {
            assert_abs_diff_eq!(2.0 * (x / 2.0), x, epsilon = 1e-15);
            assert_abs_diff_eq!(2.0 + 2.0 * (2.0 * (x / 2.0).powi(2) - 1.0), x * x, epsilon = 1e-14);
        }
        let nodes = unit().lobatto_nodes(5);
        let lin = ChebSeries::analyze(&nodes, unit()).unwrap();
        let sq: Vec<f64> = nodes.iter().map(|x| x * x).collect();
        let sq = ChebSeries::analyze(&sq, unit()).unwrap();
        let want_lin = [0.0, 2.0, 0.0, 0.0, 0.0, 0.0];
        let want_sq = [2.0, 0.0, 2.0, 0.0, 0.0, 0.0];
        for n in 0..6 {
            assert_abs_diff_eq!(lin.coeff(n), want_lin[n], epsilon = 1e-14);
            assert_abs_diff_eq!(sq.coeff(n), want_sq[n], epsilon = 1e-14);
        }
    }

    #[test]
    fn analyze_errors() {
        assert_eq!(ChebSeries::<f64>::analyze(&[], unit()), Err(Error::EmptySamples));
        assert!(matches!(
            ChebSeries::analyze(&[1.0, f64::NAN], unit()),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn evaluate_examples() {
        let phi3 = ChebSeries::basis(unit(), 3);
        assert_abs_diff_eq!(phi3.evaluate(2.0).unwrap(), 1.0, epsilon = 1e-15);
        let phi2 = ChebSeries::basis(unit(), 2);
        assert_abs_diff_eq!(phi2.evaluate(0.0).unwrap(), -1.0, epsilon = 1e-15);
        let sq = ChebSeries::from_monomials(unit(), &[0.0, 0.0, 1.0]);
        assert_abs_diff_eq!(sq.evaluate(1.5).unwrap(), 2.25, epsilon = 1e-14);
        assert!(phi2.evaluate(f64::NAN).is_err());
        assert!(phi2.extrapolates(2.5));
        assert!(!phi2.extrapolates(2.0));
    }

    #[test]
    fn differentiate_examples() {
        let c = ChebSeries::constant(unit(), 3.0).differentiate();
        assert_eq!(c.coeffs(), &[0.0]);
        let x = ChebSeries::identity(unit()).differentiate();
        assert_abs_diff_eq!(x.coeff(0), 1.0, epsilon = 1e-15);
        assert_eq!(x.degree(), 0);

        // Finite-difference oracle for phi_3' at 10 interior points.
        let phi3 = ChebSeries::basis(unit(), 3);
        let d = phi3.differentiate();
        let h = 1e-5;
        for i in 0..10 {
            let x = -1.8 + 3.6 * i as f64 / 9.0;
            let fd = (phi3.eval(x + h) - phi3.eval(x - h)) / (2.0 * h);
            assert_abs_diff_eq!(d.eval(x), fd, epsilon = 1e-8);
            // (3/2) psi_2 = (3/2) (x^2 - 1)
            assert_abs_diff_eq!(d.eval(x), 1.5 * (x * x - 1.0), epsilon = 1e-13);
        }
    }

    #[test]
    fn differentiate_on_shifted_support() {
        let s = Support::new(1.5, 0.3).unwrap();
        let f = ChebSeries::from_monomials(s, &[0.5, -1.0, 0.25, 2.0]);
        let d = f.differentiate();
        for &x in &grid(s, 9) {
            assert_abs_diff_eq!(d.eval(x), -1.0 + 0.5 * x + 6.0 * x * x, epsilon = 1e-12);
        }
    }

    #[test]
    fn multiply_examples() {
        let phi1 = ChebSeries::basis(unit(), 1);
        let p = phi1.multiply(&phi1).unwrap();
        assert_eq!(p.coeffs(), &[0.5, 0.0, 0.5]);

        let f = ChebSeries::new(unit(), vec![0.3, -1.0, 2.0]);
        let one = ChebSeries::constant(unit(), 1.0);
        assert_eq!(f.multiply(&one).unwrap().coeffs(), f.coeffs());

        let x = ChebSeries::identity(unit());
        let xx = x.multiply(&x).unwrap();
        for &t in &grid(unit(), 13) {
            assert_abs_diff_eq!(xx.eval(t), t * t, epsilon = 1e-14);
        }

        let other = ChebSeries::constant(Support::new(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(f.multiply(&other), Err(Error::SupportMismatch));
    }

    #[test]
    fn rescale_examples() {
        let x = ChebSeries::identity(unit());
        assert_eq!(x.rescale(unit()), x);

        // Pullback of x from (0,1) onto (0,2) is x/2.
        let to = Support::new(0.0, 2.0).unwrap();
        let g = x.rescale(to);
        for &t in &grid(to, 17) {
            assert_abs_diff_eq!(g.eval(t), t / 2.0, epsilon = 1e-14);
        }

        // phi_2 from (0,1) onto (1,1) is T_2((x-1)/2).
        let to = Support::new(1.0, 1.0).unwrap();
        let g = ChebSeries::basis(unit(), 2).rescale(to);
        for &t in &grid(to, 17) {
            let u = (t - 1.0) / 2.0;
            assert_abs_diff_eq!(g.eval(t), 2.0 * u * u - 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn reexpand_preserves_function() {
        let from = Support::new(-0.5, 0.7).unwrap();
        let to = Support::new(2.0, 3.0).unwrap();
        let f = ChebSeries::from_monomials(from, &[1.0, 0.5, -0.25, 0.125, 0.3]);
        let g = f.reexpand(to);
        assert_eq!(g.support(), to);
        for &t in &grid(to, 21) {
            assert_abs_diff_eq!(g.eval(t), f.eval(t), epsilon = 1e-9 * f.eval(t).abs().max(1.0));
        }
    }

    #[test]
    fn psi_conversions_are_inverse() {
        let phi = vec![0.7, -0.2, 1.5, 0.25, -3.0, 0.5];
        let back = psi_to_phi(&phi_to_psi(&phi));
        for (a, b) in phi.iter().zip(&back) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
        // psi_2 = x^2 - 1 = 2 phi_2 + phi_0
        assert_eq!(psi_to_phi(&[0.0, 0.0, 1.0]), vec![1.0, 0.0, 2.0]);
        for &x in &grid(unit(), 9) {
            let u = x / 2.0;
            let psi = phi_to_psi(&phi);
            assert_abs_diff_eq!(clenshaw_u(&psi, u), clenshaw_t(&phi, u), epsilon = 1e-12);
        }
    }

    #[test]
    fn trim_drops_tail() {
        let f = ChebSeries::new(unit(), vec![1.0, 0.5, 1e-16, 0.0]);
        assert_eq!(f.trimmed().coeffs(), &[1.0, 0.5]);
        assert_eq!(ChebSeries::zero(unit()).trimmed().degree(), 0);
    }

    #[test]
    fn works_in_single_precision() {
        let s = Support::<f32>::new(0.0, 1.0).unwrap();
        let x = ChebSeries::identity(s);
        let xx = x.multiply(&x).unwrap();
        assert!((xx.eval(1.5f32) - 2.25).abs() < 1e-5);
        let d = xx.differentiate();
        assert!((d.eval(0.75f32) - 1.5).abs() < 1e-5);
    }
}
