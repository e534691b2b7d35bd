//! Fast invariant checks bundled with the binary.

use logpot_core::equilibrium::{energy_checked, inverse_problem, solve, verify_variational};
use logpot_core::inequalities::{deficit_with, inf_convolution, poincare_constant, DeficitKind};
use logpot_core::logkernel::{log_energy, log_potential};
use logpot_core::measures::{inner_beta, integrate, omega_form};
use logpot_core::operators::{apply, OperatorKind};
use logpot_core::perturbation::energy_expansion;
use logpot_core::{ChebSeries64, DensityMeasure64, MeasureKind, Potential64, Support64};

use crate::report::Results;

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn pot(c: &[f64]) -> Potential64 {
    Potential64::new(c.to_vec()).expect("finite")
}

fn eigen_identities() -> Check {
    let u = Support64::unit();
    for n in 1..=40 {
        let phi = ChebSeries64::basis(u, n);
        let nf = apply(OperatorKind::N, &phi);
        let lf = apply(OperatorKind::L, &phi);
        let ef = apply(OperatorKind::E, &phi);
        let back = apply(OperatorKind::V, &apply(OperatorKind::U, &phi));
        let err = (nf.coeff(n) - n as f64).abs()
            + (lf.coeff(n) - (n * n) as f64).abs()
            + (ef.coeff(n) - 1.0 / n as f64).abs()
            + (back.coeff(n) - 1.0).abs();
        ensure(err < 1e-10, || format!("n = {n}: error {err:e}"))?;
    }
    Ok(())
}

fn quadratic_closed_form() -> Check {
    let sol = solve(&pot(&[0.0, 0.0, 0.5])).map_err(e)?;
    let (b, c) = (sol.support.center(), sol.support.scale());
    ensure(b.abs() < 1e-10 && (c - 1.0).abs() < 1e-10 && (sol.energy - 0.75).abs() < 1e-10, || {
        format!("(b, c, E) = ({b}, {c}, {})", sol.energy)
    })
}

fn quartic_closed_form() -> Check {
    let v = pot(&[0.0, 0.0, 0.0, 0.0, 0.25]);
    let sol = solve(&v).map_err(e)?;
    let c = sol.support.scale();
    ensure((c - 3f64.powf(-0.25)).abs() < 1e-10, || format!("c = {c}"))?;
    ensure((sol.mass() - 1.0).abs() < 1e-10, || format!("mass {}", sol.mass()))?;
    let r = energy_checked(&v, &sol).map_err(e)?;
    let spread = r.iter().fold(0.0f64, |m, x| m.max((x - r[0]).abs()));
    ensure(spread < 1e-8, || format!("energy routes spread {spread:e}"))
}

fn log_kernel_identities() -> Check {
    let u = Support64::unit();
    let en = log_energy(&DensityMeasure64::semicircle(u));
    ensure((en + 0.25).abs() < 1e-12, || format!("semicircle log-energy {en}"))?;
    let beta = DensityMeasure64::arcsine(u);
    for x in [-1.5f64, 0.0, 0.7, 3.0, -5.0] {
        let want = if x * x < 4.0 { 0.0 } else { ((x.abs() + (x * x - 4.0f64).sqrt()) / 2.0).ln() };
        let got = log_potential(&beta, x).map_err(e)?;
        ensure((got - want).abs() < 1e-8, || format!("arcsine potential at {x}: {got}"))?;
    }
    Ok(())
}

fn inverse_problem_constant() -> Check {
    let s = Support64::new(0.3, 1.2).map_err(e)?;
    let v = ChebSeries64::new(s, vec![0.2, -0.5, 0.8, 0.3]);
    let inv = inverse_problem(&v, 1.0).map_err(e)?;
    for j in 0..20 {
        let x = s.from_local(-1.9 + 3.8 * j as f64 / 19.0);
        let d = 2.0 * log_potential(&inv.measure, x).map_err(e)? - v.eval(x) - inv.constant;
        ensure(d.abs() < 1e-7, || format!("potential off by {d:e} at {x}"))?;
    }
    Ok(())
}

fn integration_by_parts() -> Check {
    let u = Support64::unit();
    let f = ChebSeries64::new(u, vec![0.3, -0.2, 0.5, 0.1, -0.4]);
    let g = ChebSeries64::new(u, vec![-0.1, 0.6, 0.2, -0.3]);
    let x = ChebSeries64::identity(u);
    let pi = |h: &ChebSeries64| integrate(h, MeasureKind::Arcsine(u)).unwrap();
    let (f1, g1) = (f.differentiate(), g.differentiate());
    let n = |h: &ChebSeries64| apply(OperatorKind::N, h);
    let lhs = inner_beta(&n(&f), &g1).map_err(e)? + inner_beta(&n(&g), &f1).map_err(e)?;
    let rhs = pi(&f1) * pi(&x.multiply(&g1).map_err(e)?) + pi(&x.multiply(&f1).map_err(e)?) * pi(&g1);
    ensure((lhs - rhs).abs() < 1e-10, || format!("{lhs} vs {rhs}"))?;
    let pairing = inner_beta(&n(&f), &g).map_err(e)? - 2.0 * omega_form(&f, &g).map_err(e)?;
    ensure(pairing.abs() < 1e-12, || format!("N/Omega pairing off by {pairing:e}"))
}

fn variational() -> Check {
    for c in [vec![0.0, 0.0, 0.5], vec![0.0, 0.0, 0.0, 0.0, 0.25], vec![0.5, -1.0, 0.5]] {
        let v = pot(&c);
        let sol = solve(&v).map_err(e)?;
        let r = verify_variational(&v, &sol, 50).map_err(e)?;
        let worst = r.equality_residual.max(r.hilbert_residual).max(r.exterior_violation);
        ensure(worst < 1e-6, || format!("{c:?}: residual {worst:e}"))?;
    }
    Ok(())
}

fn poincare() -> Check {
    let u = Support64::unit();
    let r = poincare_constant(&ChebSeries64::constant(u, 1.0), 32).map_err(e)?;
    ensure((r.rho_p - 0.5).abs() < 1e-10, || format!("rho_P(1) = {}", r.rho_p))?;
    let r = poincare_constant(&ChebSeries64::new(u, vec![1.0, 0.3, -0.1]), 48).map_err(e)?;
    ensure(r.spread() < 1e-6 && r.rho_p <= 0.5, || format!("{r:?}"))
}

fn arcsine_gap() -> Check {
    let u = Support64::unit();
    let affine = ChebSeries64::new(u, vec![0.4, -0.9]);
    let curved = ChebSeries64::new(u, vec![0.4, -0.9, 0.5]);
    let half_var = |f: &ChebSeries64| {
        let c = f.coeffs();
        0.25 * c.iter().skip(1).map(|a| a * a).sum::<f64>()
    };
    let gap = omega_form(&affine, &affine).map_err(e)? - half_var(&affine);
    ensure(gap.abs() < 1e-12, || format!("affine gap {gap:e}"))?;
    let gap = omega_form(&curved, &curved).map_err(e)? - half_var(&curved);
    ensure(gap > 1e-3, || format!("curved gap {gap:e}"))
}

fn expansion() -> Check {
    let r = energy_expansion(&pot(&[0.0, 0.0, 0.5]), &pot(&[0.0, 1.0]), &Potential64::zero()).map_err(e)?;
    ensure(
        (r.e0 - 0.75).abs() < 1e-9 && r.a1.abs() < 1e-9 && (r.a2 + 0.5).abs() < 1e-9,
        || format!("{r:?}"),
    )
}

fn deficits_at_equilibrium() -> Check {
    let v = pot(&[0.0, 0.0, 0.5]);
    let sol = solve(&v).map_err(e)?;
    let mu = sol.measure();
    for kind in [DeficitKind::Transport, DeficitKind::Lsi, DeficitKind::Hwi] {
        let d = deficit_with(&v, &sol, &mu, 0.5, kind).map_err(e)?;
        ensure(d.deficit.abs() < 1e-8, || format!("{kind:?} deficit {}", d.deficit))?;
    }
    Ok(())
}

fn inf_convolution_quadratic() -> Check {
    let ys: Vec<f64> = (0..=2000).map(|j| -5.0 + j as f64 * 5e-3).collect();
    let fy: Vec<f64> = ys.iter().map(|y| y * y).collect();
    let xs: Vec<f64> = (0..=20).map(|j| -1.0 + 0.1 * j as f64).collect();
    let q = inf_convolution(&fy, &ys, 0.5, &xs).map_err(e)?;
    let worst = xs.iter().zip(&q).fold(0.0f64, |m, (x, v)| m.max((v - x * x / 1.5).abs()));
    ensure(worst < 1e-8, || format!("error {worst:e}"))
}

pub const CHECKS: [(&str, fn() -> Check); 12] = [
    ("eigen-identities", eigen_identities),
    ("quadratic closed form", quadratic_closed_form),
    ("quartic closed form", quartic_closed_form),
    ("log-kernel identities", log_kernel_identities),
    ("inverse problem", inverse_problem_constant),
    ("integration by parts", integration_by_parts),
    ("variational residuals", variational),
    ("Poincare constants", poincare),
    ("arcsine spectral gap", arcsine_gap),
    ("energy expansion", expansion),
    ("deficits at equilibrium", deficits_at_equilibrium),
    ("inf-convolution", inf_convolution_quadratic),
];

/// Runs every check, printing one line each, and returns the results table
/// with the number of failures.
pub fn run() -> (Results, usize) {
    let mut failed = Vec::new();
    for (name, check) in CHECKS {
        match check() {
            Ok(()) => println!("PASS {name}"),
            Err(msg) => {
                println!("FAIL {name}: {msg}");
                failed.push(name.to_string());
            }
        }
    }
    let passed = CHECKS.len() - failed.len();
    println!("selftest: {passed} passed, {} failed", failed.len());
    let mut r = Results::default();
    r.int("passed", passed).int("failed", failed.len());
    r.0.insert(
        "failures".into(),
        toml::Value::Array(failed.iter().cloned().map(toml::Value::String).collect()),
    );
    (r, failed.len())
}
