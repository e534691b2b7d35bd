//! Job documents: TOML with the fields below, unknown keys rejected.

use std::path::Path;

use clap::ValueEnum;
use logpot_core::{ChebSeries64, DensityMeasure64, MeasureKind, Potential64, Support64};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Solve,
    Energy,
    Poincare,
    Deficit,
    Perturb,
    Sample,
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Semicircle,
    Arcsine,
}

/// Density against a reference law on `[b - 2c, b + 2c]`, as Chebyshev
/// coefficients `phi_n((x - b) / c)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub base: Base,
    pub density: Vec<f64>,
    #[serde(default)]
    pub b: f64,
    #[serde(default = "one")]
    pub c: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasSpec {
    pub n: usize,
    pub sweeps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thin: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chains: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// Monomial coefficients `v_0, v_1, ...` of `V(x) = sum v_k x^k`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub potential: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureSpec>,
    #[serde(default, alias = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// Finite-difference steps for `perturb`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gas: Option<GasSpec>,
    /// Output directory, overridden by `--out`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

pub const DEFAULT_K: usize = 64;
pub const DEFAULT_GRID: usize = 201;

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

impl JobSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| parse_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| parse_err(e.to_string()))
    }

    /// Checks the fields `command` needs and that every number is finite.
    pub fn validate(&self, command: Command) -> Result<(), CliError> {
        if let Some(c) = self.command {
            if c != command {
                return Err(parse_err(format!("job is for {c:?} but {command:?} was requested")));
            }
        }
        let mut numbers: Vec<f64> = self.potential.clone();
        numbers.extend(self.f.iter().flatten());
        numbers.extend(self.g.iter().flatten());
        numbers.extend(self.tol.iter().chain(&self.rho));
        numbers.extend(self.steps.iter().flatten());
        if let Some(m) = &self.measure {
            numbers.extend(m.density.iter().chain([&m.b, &m.c]));
        }
        if let Some(g) = &self.gas {
            numbers.extend(g.step.iter());
        }
        if numbers.iter().any(|v| !v.is_finite()) {
            return Err(parse_err("all numbers must be finite"));
        }
        if command == Command::Selftest {
            return Ok(());
        }
        if self.potential.is_empty() {
            return Err(parse_err("missing field `potential`"));
        }
        let require = |ok: bool, field: &str| {
            if ok {
                Ok(())
            } else {
                Err(parse_err(format!("{command:?} needs field `{field}`")))
            }
        };
        match command {
            Command::Deficit => {
                require(self.measure.is_some(), "measure")?;
                require(self.rho.is_some(), "rho")?;
            }
            Command::Perturb => require(self.f.is_some(), "f")?,
            Command::Sample => require(self.gas.is_some(), "gas")?,
            _ => {}
        }
        if let Some(steps) = &self.steps {
            if steps.is_empty() || steps.contains(&0.0) {
                return Err(parse_err("`steps` must be nonempty and nonzero"));
            }
        }
        if let Some(tol) = self.tol {
            if tol <= 0.0 {
                return Err(parse_err("`tol` must be positive"));
            }
        }
        if matches!(self.grid, Some(g) if g < 2) {
            return Err(parse_err("`grid` must be at least 2"));
        }
        Ok(())
    }

    pub fn potential(&self) -> Result<Potential64, CliError> {
        let v = Potential64::new(self.potential.clone()).map_err(|e| parse_err(format!("potential: {e}")))?;
        if !v.is_admissible() {
            return Err(parse_err("potential must have even degree >= 2 and a positive leading coefficient"));
        }
        Ok(v)
    }

    /// Perturbation directions need not be admissible on their own.
    pub fn direction(coeffs: Option<&Vec<f64>>) -> Result<Potential64, CliError> {
        match coeffs {
            Some(c) => Potential64::new(c.clone()).map_err(|e| parse_err(format!("perturbation: {e}"))),
            None => Ok(Potential64::zero()),
        }
    }

    pub fn measure(&self) -> Result<Option<DensityMeasure64>, CliError> {
        let Some(m) = &self.measure else { return Ok(None) };
        let s = Support64::new(m.b, m.c).map_err(|e| parse_err(format!("measure: {e}")))?;
        let kind = match m.base {
            Base::Semicircle => MeasureKind::Semicircle(s),
            Base::Arcsine => MeasureKind::Arcsine(s),
        };
        let mu = DensityMeasure64::new(kind, ChebSeries64::new(s, m.density.clone()))
            .map_err(|e| parse_err(format!("measure: {e}")))?;
        mu.check_probability().map_err(|e| parse_err(format!("measure: {e}")))?;
        Ok(Some(mu))
    }

    pub fn k(&self) -> usize {
        self.k.unwrap_or(DEFAULT_K)
    }

    pub fn grid(&self) -> usize {
        self.grid.unwrap_or(DEFAULT_GRID)
    }
}
