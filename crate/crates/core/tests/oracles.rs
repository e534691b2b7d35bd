//! Library routes checked against independent quadrature and closed forms.

mod common;

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use common::*;
use logpot_core::equilibrium::{solve, solve_with, DEFAULT_TOL};
use logpot_core::inequalities::wasserstein2;
use logpot_core::logkernel::{hilbert_transform, log_energy};
use logpot_core::loggas::{energy_delta, gas_energy};
use logpot_core::measures::omega_form;
use logpot_core::operators::{apply, OperatorKind};
use logpot_core::perturbation::{first_order_measure, transport_check};
use logpot_core::{ChebSeries64, DensityMeasure64, MeasureKind, Potential64, Support64};

fn pot(c: &[f64]) -> Potential64 {
    Potential64::new(c.to_vec()).unwrap()
}

#[test]
fn equilibrium_energies_match_nested_quadrature() {
    for coeffs in [vec![0.0, 0.0, 0.0, 0.0, 0.25], vec![0.3, -0.4, 0.7, 0.1, 0.2]] {
        let v = pot(&coeffs);
        let sol = solve(&v).unwrap();
        let (b, c) = (sol.support.center(), sol.support.scale());
        let w = sol.w.clone();
        let wf = |x: f64| w.eval(x);
        let potential = de(
            |t| {
                let x = b + 2.0 * c * t.cos();
                v.eval(x) * wf(x) * 2.0 * t.sin().powi(2) / PI
            },
            0.0,
            PI,
        );
        let e = potential - semicircle_log_energy(wf, b, c);
        assert!((e - sol.energy).abs() < 1e-8, "{coeffs:?}: {e} vs {}", sol.energy);
    }
}

#[test]
fn quartic_support_maximizes_h() {
    let v = pot(&[0.0, 0.0, 0.0, 0.0, 0.25]);
    let sol = solve(&v).unwrap();
    let h = |c: f64, b: f64| c.ln() - 0.5 * arcsine_mean(|x| v.eval(x), b, c, 32);
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..=100 {
        let b = -0.5 + 0.01 * i as f64;
        for j in 0..=500 {
            let c = 0.5 + 0.001 * j as f64;
            let val = h(c, b);
            if val > best.0 {
                best = (val, c, b);
            }
        }
    }
    assert!((best.1 - sol.support.scale()).abs() <= 1e-3);
    assert!((best.2 - sol.support.center()).abs() <= 1e-2);
}

#[test]
fn hilbert_transform_matches_principal_value() {
    let s = Support64::new(0.3, 0.8).unwrap();
    let (lo, hi) = (s.lower(), s.upper());
    let cases = [
        DensityMeasure64::new(MeasureKind::Semicircle(s), ChebSeries64::new(s, vec![1.1, 0.4, 0.2, -0.1])).unwrap(),
        DensityMeasure64::new(MeasureKind::Arcsine(s), ChebSeries64::new(s, vec![1.0, -0.3, 0.25])).unwrap(),
    ];
    for mu in &cases {
        let rho = |y: f64| mu.lebesgue_density(y);
        for j in 1..10 {
            let x = lo + (hi - lo) * j as f64 / 10.0;
            // p.v. int 2 rho(y) / (x - y) dy with the singular part removed
            // through the density at x in theta form.
            let u = |y: f64| rho(y) / mu.base().weight(y);
            let base = mu.base();
            let g = |t: f64| {
                let y = s.center() + 2.0 * s.scale() * t.cos();
                let jac = base.weight(y) * 2.0 * s.scale() * t.sin();
                let d = x - y;
                if d.abs() < 1e-14 {
                    0.0
                } else {
                    2.0 * (u(y) - u(x)) / d * jac
                }
            };
            let cut = s.to_local(x) / 2.0;
            let smooth = de_split(g, cut.acos());
            let singular = 2.0 * u(x) * base_pv(base, s, x);
            let oracle = smooth + singular;
            let lib = hilbert_transform(mu, x).unwrap();
            assert!((lib - oracle).abs() < 1e-8, "x = {x}: {lib} vs {oracle}");
        }
    }
}

/// `p.v. int weight(y) / (x - y) dy` for the two reference laws.
fn base_pv(base: MeasureKind<f64>, s: Support64, x: f64) -> f64 {
    match base {
        MeasureKind::Arcsine(_) => 0.0,
        MeasureKind::Semicircle(_) => (x - s.center()) / (2.0 * s.scale() * s.scale()),
    }
}

#[test]
fn semicircle_energy_by_quadrature() {
    let spectral = log_energy(&DensityMeasure64::semicircle(Support64::unit()));
    assert_abs_diff_eq!(spectral, semicircle_log_energy(|_| 1.0, 0.0, 1.0), epsilon = 1e-8);
}

#[test]
fn u_on_second_kind_basis() {
    // Test-only closed form of U on psi_n.
    let u_psi = |n: usize, x: f64| {
        let phi_next = 2.0 * (((n + 1) as f64) * (x / 2.0).acos()).cos();
        let num = if n % 2 == 1 { 2.0 - phi_next } else { x - phi_next };
        num / (4.0 - x * x)
    };
    let u = Support64::unit();
    for n in 0..20 {
        let lib = apply(OperatorKind::U, &ChebSeries64::new(u, psi_in_phi(n)));
        for j in 0..9 {
            let x = -1.8 + 3.6 * j as f64 / 8.0;
            let want = u_psi(n, x);
            assert!((lib.eval(x) - want).abs() < 1e-10 * (1.0 + want.abs()), "n = {n}, x = {x}");
        }
    }
}

#[test]
fn omega_pairing_matches_double_integral() {
    let mut r = rng(21);
    let m = 96;
    for _ in 0..5 {
        let s = Support64::new(uniform(&mut r, -1.0, 1.0), uniform(&mut r, 0.5, 1.5)).unwrap();
        let f = ChebSeries64::new(s, random_coeffs(&mut r, 6));
        let g = ChebSeries64::new(s, random_coeffs(&mut r, 5));
        let (df, dg) = (f.differentiate(), g.differentiate());
        let dd = |h: &ChebSeries64, dh: &ChebSeries64, x: f64, y: f64| {
            if (x - y).abs() < 1e-9 {
                dh.eval(0.5 * (x + y))
            } else {
                (h.eval(x) - h.eval(y)) / (x - y)
            }
        };
        // omega in theta coordinates is (1 - cos t cos u) / pi^2 dt du.
        let (mut total, mut mass) = (0.0, 0.0);
        for i in 0..m {
            let t = (i as f64 + 0.5) * PI / m as f64;
            for j in 0..m {
                let u = (j as f64 + 0.5) * PI / m as f64;
                let wt = (1.0 - t.cos() * u.cos()) / (m * m) as f64;
                let (x, y) = (s.from_local(2.0 * t.cos()), s.from_local(2.0 * u.cos()));
                total += wt * dd(&f, &df, x, y) * dd(&g, &dg, x, y);
                mass += wt;
            }
        }
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(omega_form(&f, &g).unwrap(), total, epsilon = 1e-10);
    }
}

#[test]
fn first_order_measure_primitive() {
    let mut r = rng(22);
    let s = Support64::new(0.4, 0.7).unwrap();
    let f = pot(&[0.2, -0.5, 0.3, 0.8]);
    let m = first_order_measure(&f, s);
    for _ in 0..5 {
        let phi = ChebSeries64::new(s, random_coeffs(&mut r, 6));
        let dphi = phi.differentiate();
        let lhs = m.nu.integrate(&phi).unwrap();
        let rhs = -de(
            |t| {
                let x = s.center() + 2.0 * s.scale() * t.cos();
                dphi.eval(x) * m.psi.psi(x) * 2.0 * s.scale() * t.sin()
            },
            0.0,
            PI,
        );
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
    }
}

#[test]
fn first_order_measure_predicts_cdf_change() {
    let v = pot(&[0.0, 0.0, 0.0, 0.0, 0.25]);
    let f = pot(&[0.0, 0.7, 0.5, 0.3]);
    let sol = solve(&v).unwrap();
    let m = first_order_measure(&f, sol.support);
    let t = 1e-4;
    let plus = solve_with(&v.add_scaled(&f, t), sol.support, DEFAULT_TOL).unwrap().measure();
    let minus = solve_with(&v.add_scaled(&f, -t), sol.support, DEFAULT_TOL).unwrap().measure();
    for j in 1..10 {
        let x = sol.support.lower() + (sol.support.upper() - sol.support.lower()) * j as f64 / 10.0;
        let fd = (plus.cdf(x) - minus.cdf(x)) / (2.0 * t);
        assert!((fd - m.psi.psi(x)).abs() < 1e-6, "x = {x}: {fd} vs {}", m.psi.psi(x));
    }
}

#[test]
fn wasserstein_between_centered_semicircles() {
    for (c1, c2) in [(1.0, 0.7), (0.5, 1.3)] {
        let a = DensityMeasure64::semicircle(Support64::new(0.0, c1).unwrap());
        let b = DensityMeasure64::semicircle(Support64::new(0.0, c2).unwrap());
        assert_abs_diff_eq!(wasserstein2(&a, &b, 256).unwrap(), (c1 - c2).abs(), epsilon = 1e-10);
    }
}

#[test]
fn transport_ratio_for_even_perturbation_has_linear_term() {
    // V = x^2/2 + t x^2 has support scale (1 + 2t)^(-1/2), so the ratio is
    // ((1 - (1 + 2t)^(-1/2)) / t)^2 = 1 - 3t + O(t^2).
    let v = pot(&[0.0, 0.0, 0.5]);
    let f = pot(&[0.0, 0.0, 1.0]);
    for t in [1e-3, -1e-3, 1e-2] {
        let (ratio, limit) = transport_check(&v, &f, t, 256).unwrap();
        let exact = ((1.0 - (1.0 + 2.0 * t).powf(-0.5)) / t).powi(2);
        assert_abs_diff_eq!(limit, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ratio, exact, epsilon = 1e-9);
    }
    let (up, _) = transport_check(&v, &f, 1e-3, 256).unwrap();
    let (down, _) = transport_check(&v, &f, -1e-3, 256).unwrap();
    assert!((0.5 * (up + down) - 1.0).abs() < 1e-5);
}

#[test]
fn gas_delta_is_full_energy_difference() {
    let v = pot(&[0.0, 0.3, 0.5, 0.0, 0.1]);
    let mut r = rng(23);
    let mut x: Vec<f64> = (0..60).map(|_| uniform(&mut r, -2.0, 2.0)).collect();
    for _ in 0..20 {
        let i = (uniform(&mut r, 0.0, 60.0) as usize).min(59);
        let y = x[i] + uniform(&mut r, -0.1, 0.1);
        let before = gas_energy(&v, &x);
        let delta = energy_delta(&v, &x, i, y);
        x[i] = y;
        let after = gas_energy(&v, &x);
        assert!((after - before - delta).abs() < 1e-9 * (1.0 + before.abs()));
    }
}
