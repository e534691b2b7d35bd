use std::fs;
use std::path::Path;

use logpot_core::equilibrium::{self, energy, verify_variational, EnergyRoute};
use logpot_core::inequalities::{
    deficit_with, energy_functional, fisher_information, poincare_refinement, wasserstein2, DeficitKind, DEFICIT_GRID,
};
use logpot_core::loggas::{ks_distance, sample_chains, write_positions_csv, GasConfig};
use logpot_core::perturbation::{
    energy_expansion_with, finite_difference_check, transport_check, transport_linearization_with, DEFAULT_LADDER,
};
use logpot_core::{ChebSeries64, EquilibriumSolution64, MeasureKind, Potential64};

use crate::job::JobSpec;
use crate::report::{write_csv, Results};
use crate::CliError;

fn solve(job: &JobSpec, v: &Potential64) -> Result<EquilibriumSolution64, CliError> {
    Ok(match job.tol {
        Some(tol) => equilibrium::solve_with(v, equilibrium::default_initial(v), tol)?,
        None => equilibrium::solve(v)?,
    })
}

fn support_results(r: &mut Results, sol: &EquilibriumSolution64) {
    let s = sol.support;
    r.float("b", s.center())
        .float("c", s.scale())
        .float("lower", s.lower())
        .float("upper", s.upper())
        .float("energy", sol.energy);
}

pub fn solve_cmd(job: &JobSpec, dir: &Path) -> Result<Results, CliError> {
    let v = job.potential()?;
    let sol = solve(job, &v)?;
    let mut r = Results::default();
    support_results(&mut r, &sol);
    r.float("mass", sol.mass())
        .float("positivity_margin", sol.positivity_margin)
        .int("iterations", sol.iterations)
        .floats("residuals", &sol.residuals)
        .floats("density_coeffs", sol.w.coeffs());

    let mu = sol.measure();
    let grid = job.grid();
    let (lo, hi) = (sol.support.lower(), sol.support.upper());
    write_csv(
        dir,
        "density.csv",
        &["x", "density", "cdf"],
        (0..grid).map(|j| {
            let x = lo + (hi - lo) * j as f64 / (grid - 1) as f64;
            vec![x, mu.lebesgue_density(x), mu.cdf(x)]
        }),
    )?;
    let ps: Vec<f64> = (0..grid).map(|j| (j as f64 + 0.5) / grid as f64).collect();
    let qs = mu.quantiles(&ps)?;
    write_csv(dir, "quantile.csv", &["p", "quantile"], ps.iter().zip(&qs).map(|(&p, &q)| vec![p, q]))?;
    Ok(r)
}

pub fn energy_cmd(job: &JobSpec) -> Result<Results, CliError> {
    let v = job.potential()?;
    let sol = solve(job, &v)?;
    let mut r = Results::default();
    support_results(&mut r, &sol);
    let mut routes = Vec::new();
    for route in EnergyRoute::ALL {
        let e = energy(&v, &sol, route)?;
        r.float(&format!("{route:?}").to_lowercase(), e);
        routes.push(e);
    }
    let spread = routes.iter().fold(0.0f64, |m, e| m.max((e - routes[0]).abs()));
    r.float("route_spread", spread);
    let var = verify_variational(&v, &sol, job.grid.unwrap_or(100))?;
    let mut t = Results::default();
    t.float("constant", var.constant)
        .float("equality_residual", var.equality_residual)
        .float("exterior_violation", var.exterior_violation)
        .float("exterior_slack", var.exterior_slack)
        .float("hilbert_residual", var.hilbert_residual);
    r.table("variational", t);
    Ok(r)
}

/// Weight `w` of `mu = w alpha_{b,c}`: the job's measure if given, else the
/// equilibrium density of the potential.
fn weight(job: &JobSpec) -> Result<ChebSeries64, CliError> {
    match job.measure()? {
        Some(m) => match m.base() {
            MeasureKind::Semicircle(_) => Ok(m.density().clone()),
            MeasureKind::Arcsine(_) => Err(CliError::Parse("poincare needs a semicircle-base measure".into())),
        },
        None => {
            let v = job.potential()?;
            Ok(solve(job, &v)?.w)
        }
    }
}

pub fn poincare_cmd(job: &JobSpec, dir: &Path) -> Result<Results, CliError> {
    let w = weight(job)?;
    let (rep, gap) = poincare_refinement(&w, job.k())?;
    let c = w.support().scale();
    let mut r = Results::default();
    r.int("k", rep.k)
        .float("rho_p", rep.rho_p)
        .float("rho_p2", rep.rho_p2)
        .float("rho_p4", rep.rho_p4)
        .float("spread", rep.spread())
        .float("refinement_gap", gap)
        .float("semicircle_bound", 1.0 / (2.0 * c * c));
    write_csv(
        dir,
        "eigen.csv",
        &["n", "lambda_n"],
        rep.eigenvalues.iter().enumerate().map(|(n, &l)| vec![(n + 1) as f64, l]),
    )?;
    Ok(r)
}

pub fn deficit_cmd(job: &JobSpec) -> Result<Results, CliError> {
    let v = job.potential()?;
    let sol = solve(job, &v)?;
    let nu = job.measure()?.expect("validated");
    let rho = job.rho.expect("validated");
    let mut r = Results::default();
    r.float("rho", rho)
        .float("energy_gap", energy_functional(&v, &nu)? - sol.energy)
        .float("w2", wasserstein2(&nu, &sol.measure(), job.grid.unwrap_or(DEFICIT_GRID))?)
        .float("fisher", fisher_information(&v, &nu)?);
    for kind in [DeficitKind::Transport, DeficitKind::Lsi, DeficitKind::Hwi] {
        let d = deficit_with(&v, &sol, &nu, rho, kind)?;
        let mut t = Results::default();
        t.float("lhs", d.lhs).float("rhs", d.rhs).float("deficit", d.deficit);
        r.table(&format!("{kind:?}").to_lowercase(), t);
    }
    Ok(r)
}

pub fn perturb_cmd(job: &JobSpec) -> Result<Results, CliError> {
    let v = job.potential()?;
    let f = JobSpec::direction(job.f.as_ref())?;
    let g = JobSpec::direction(job.g.as_ref())?;
    let sol = solve(job, &v)?;
    let e = energy_expansion_with(&sol, &f, &g)?;
    let mut r = Results::default();
    r.float("e0", e.e0).float("a1", e.a1).float("a2", e.a2);
    let steps = job.steps.clone().unwrap_or_else(|| DEFAULT_LADDER.to_vec());
    let mut fd = Vec::new();
    for &t in &steps {
        let rep = finite_difference_check(&v, &f, &g, t)?;
        let mut row = Results::default();
        row.float("t", t)
            .floats("a1_fd", &rep.a1_fd)
            .floats("a2_fd", &rep.a2_fd)
            .float("a1_richardson", rep.a1_richardson)
            .float("a2_richardson", rep.a2_richardson)
            .floats("a1_error", &rep.a1_error)
            .floats("a2_error", &rep.a2_error);
        fd.push(row);
    }
    r.tables("finite_difference", fd);
    let lin = transport_linearization_with(&v, &sol, &f)?;
    let t = steps.iter().copied().fold(f64::INFINITY, |m, t| m.min(t.abs()));
    let (ratio, _) = transport_check(&v, &f, t, job.grid.unwrap_or(256))?;
    let mut z = Results::default();
    z.float("zeta_sq_mean", lin.zeta_sq_mean)
        .int("degree", lin.degree)
        .floats("zeta_coeffs", lin.zeta.coeffs())
        .float("t", t)
        .float("w2_ratio", ratio);
    r.table("transport", z);
    Ok(r)
}

pub fn sample_cmd(job: &JobSpec, dir: &Path, seed: Option<u64>) -> Result<Results, CliError> {
    let v = job.potential()?;
    let gas = job.gas.as_ref().expect("validated");
    let base = GasConfig::new(gas.n, gas.sweeps, 0);
    let cfg = GasConfig {
        step: gas.step.unwrap_or(base.step),
        burn_in: gas.burn_in.unwrap_or(base.burn_in),
        thin: gas.thin.unwrap_or(base.thin),
        ..base
    };
    let first = seed.or(gas.seed).unwrap_or(0);
    let seeds: Vec<u64> = (0..gas.chains.unwrap_or(1) as u64).map(|i| first.wrapping_add(i)).collect();
    let sol = solve(job, &v)?;
    let chains = sample_chains(&v, &cfg, &seeds)?;
    let mut ks_pooled = Vec::new();
    let mut ks_final = Vec::new();
    for c in &chains {
        ks_pooled.push(ks_distance(&c.pooled, &sol)?);
        ks_final.push(ks_distance(&c.positions, &sol)?);
    }
    let mut sorted = ks_pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let mut r = Results::default();
    r.int("n", cfg.n)
        .int("sweeps", cfg.sweeps)
        .int("burn_in", cfg.burn_in)
        .int("thin", cfg.thin)
        .float("step", cfg.step)
        .ints("seeds", &seeds)
        .floats("acceptance", &chains.iter().map(|c| c.acceptance).collect::<Vec<_>>())
        .floats("ks_pooled", &ks_pooled)
        .floats("ks_final", &ks_final)
        .float("ks_median", sorted[sorted.len() / 2]);
    let mut all = Vec::new();
    for c in &chains {
        all.extend_from_slice(&c.positions);
    }
    let mut file = fs::File::create(dir.join("positions.csv"))?;
    write_positions_csv(&mut file, &all)?;
    Ok(r)
}
