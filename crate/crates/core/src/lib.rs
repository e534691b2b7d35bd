//! Chebyshev-coefficient calculus for logarithmic potentials on an interval.
//!
//! Functions on a support `[b - 2c, b + 2c]` are finite Chebyshev series
//! ([`ChebSeries`]). On top of that representation the crate provides the
//! arcsine and semicircle laws ([`measures`]), the operator calculus and the
//! logarithmic kernel ([`operators`], [`logkernel`]), an equilibrium-measure
//! solver for polynomial external fields ([`equilibrium`]), free Poincaré
//! constants, Wasserstein distances and entropy deficits ([`inequalities`]),
//! perturbation expansions ([`perturbation`]) and a Metropolis sampler for
//! the log-gas ([`loggas`]).
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the precision.

pub mod cheb;
pub mod equilibrium;
pub mod error;
pub mod inequalities;
pub mod logkernel;
pub mod loggas;
pub mod measures;
pub mod operators;
pub mod perturbation;
pub mod quadrature;
pub mod scalar;

pub use cheb::{ChebSeries, Support};
pub use equilibrium::{EnergyRoute, EquilibriumSolution, Potential};
pub use error::{Error, Result};
pub use measures::{DensityMeasure, MeasureKind};
pub use operators::{OperatorKind, SpectralOperatorMatrix};
pub use scalar::Scalar;

pub type Support64 = Support<f64>;
pub type ChebSeries64 = ChebSeries<f64>;
pub type Potential64 = Potential<f64>;
pub type DensityMeasure64 = DensityMeasure<f64>;
pub type MeasureKind64 = MeasureKind<f64>;
pub type EquilibriumSolution64 = EquilibriumSolution<f64>;
pub type SpectralOperatorMatrix64 = SpectralOperatorMatrix<f64>;

pub type Support32 = Support<f32>;
pub type ChebSeries32 = ChebSeries<f32>;
pub type Potential32 = Potential<f32>;
pub type DensityMeasure32 = DensityMeasure<f32>;
pub type EquilibriumSolution32 = EquilibriumSolution<f32>;
