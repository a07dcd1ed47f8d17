mod common;

use besq::{
    besq_neg1_lifetime, besq_step, euler_neg1_absorption, nu_levy_density, nu_tail_amplitude,
    nu_tail_lifetime, BesqError, BesqPath, EulerConfig,
};
use common::{ks, mean_se, rng};
use statrs::distribution::{ChiSquared, ContinuousCDF, InverseGamma};

#[test]
fn euler_absorption_matches_inverse_gamma() {
    let mut r = rng(1);
    let cfg = EulerConfig { dt: 1e-4, absorb_tol: 1e-8 };
    let xs: Vec<f64> = (0..10_000).map(|_| euler_neg1_absorption(1.0, &cfg, &mut r).unwrap()).collect();
    let law = InverseGamma::new(1.5, 0.5).unwrap();
    let d = ks(xs, |x| law.cdf(x));
    assert!(d <= 0.02, "KS {d}");
}

#[test]
fn exact_lifetime_moments_and_median() {
    let mut r = rng(2);
    let inv: Vec<f64> = (0..40_000).map(|_| 1.0 / besq_neg1_lifetime(2.0, &mut r).unwrap()).collect();
    let (m, se) = mean_se(&inv);
    assert!((m - 1.5).abs() < 3.0 * se, "{m} +- {se}");

    // Median for a = 1 from the density, integrated on a fine grid.
    let dens = |x: f64| 0.5f64.powf(1.5) / statrs::function::gamma::gamma(1.5) * x.powf(-2.5) * (-0.5 / x).exp();
    let (mut acc, mut x, h) = (0.0, 1e-6, 1e-5);
    while acc < 0.5 {
        acc += 0.5 * h * (dens(x) + dens(x + h));
        x += h;
    }
    let mut s: Vec<f64> = (0..40_001).map(|_| besq_neg1_lifetime(1.0, &mut r).unwrap()).collect();
    s.sort_by(f64::total_cmp);
    assert!((s[20_000] - x).abs() < 0.03 * x, "{} vs {x}", s[20_000]);

    // Scale family.
    let mut r1 = rng(3);
    let mut r2 = rng(3);
    for _ in 0..100 {
        let a = besq_neg1_lifetime(1.0, &mut r1).unwrap();
        let b = besq_neg1_lifetime(7.0, &mut r2).unwrap();
        assert!((b - 7.0 * a).abs() <= 1e-12 * b);
    }
    assert!(matches!(besq_neg1_lifetime(0.0, &mut r1), Err(BesqError::InvalidArgument(_))));
}

#[test]
fn besq0_laplace_and_absorption() {
    let mut r = rng(4);
    let (x, t) = (1.0, 0.5);
    let ys: Vec<f64> = (0..40_000).map(|_| besq_step(0, x, t, &mut r).unwrap()).collect();
    for lam in [0.5, 1.0, 2.0] {
        let e: Vec<f64> = ys.iter().map(|y| (-lam * y).exp()).collect();
        let (m, se) = mean_se(&e);
        let exact = (-lam * x / (2.0 * t * lam + 1.0)).exp();
        assert!((m - exact).abs() < 3.0 * se, "lambda {lam}: {m} vs {exact}");
    }
    let hit: Vec<f64> = ys.iter().map(|&y| (y == 0.0) as u8 as f64).collect();
    let (p, se) = mean_se(&hit);
    assert!((p - (-1.0f64).exp()).abs() < 3.0 * se);
}

#[test]
fn besq1_and_besq5_marginals() {
    let mut r = rng(5);
    let ys: Vec<f64> = (0..20_000).map(|_| besq_step(1, 0.0, 1.0, &mut r).unwrap()).collect();
    let chi1 = ChiSquared::new(1.0).unwrap();
    assert!(ks(ys, |y| chi1.cdf(y)) < 0.015);
    let zs: Vec<f64> = (0..20_000).map(|_| besq_step(5, 2.0, 0.3, &mut r).unwrap()).collect();
    let (m, se) = mean_se(&zs);
    assert!((m - 3.5).abs() < 3.0 * se);
}

#[test]
fn small_step_limit_and_errors() {
    let mut r = rng(6);
    for d in [-1, 0, 1, 5] {
        let y = besq_step(d, 2.0, 1e-12, &mut r).unwrap();
        assert!((y - 2.0).abs() < 1e-4, "delta {d}: {y}");
        assert!(besq_step(d, -1.0, 1.0, &mut r).is_err());
        assert!(besq_step(d, 1.0, -1.0, &mut r).is_err());
    }
    assert!(besq_step(2, 1.0, 1.0, &mut r).is_err());
}

#[test]
fn paths_respect_absorption() {
    let mut r = rng(7);
    for d in [-1, 0] {
        let p = BesqPath::simulate(d, 0.05, 0.01, 2000, &EulerConfig::default(), &mut r).unwrap();
        assert_eq!(p.values[0], 0.05);
        assert!(p.absorbed);
        let first = p.values.iter().position(|&v| v == 0.0).unwrap();
        assert!(p.values[first..].iter().all(|&v| v == 0.0));
    }
    let p = BesqPath::simulate(5, 0.0, 0.01, 100, &EulerConfig::default(), &mut r).unwrap();
    assert!(!p.absorbed && p.values.iter().all(|&v| v >= 0.0));
}

#[test]
fn closed_form_tails() {
    assert!((nu_tail_lifetime(1.0).unwrap() - 0.22508).abs() < 1e-5);
    assert!((nu_tail_amplitude(1.0).unwrap() - 0.84628).abs() < 1e-5);
    assert!(nu_tail_lifetime(0.0).is_err() && nu_levy_density(-1.0).is_err());
    // Integrate the density over [1, inf) with x = e^s and Simpson's rule.
    let (a, b, n) = (0.0f64, 60.0f64, 6000usize);
    let h = (b - a) / n as f64;
    let g = |s: f64| nu_levy_density(s.exp()).unwrap() * s.exp();
    let mut acc = g(a) + g(b);
    for k in 1..n {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * g(a + k as f64 * h);
    }
    let integral = acc * h / 3.0;
    assert!((integral - nu_tail_lifetime(1.0).unwrap()).abs() < 1e-10);
}
