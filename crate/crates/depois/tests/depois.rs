use depois::*;
use ip_core::{IntervalPartition, RankedSimplexPoint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skewer_evolve::{evolve, EvolutionTrace, EvolveParams, Mode};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn point(v: &[f64]) -> RankedSimplexPoint {
    RankedSimplexPoint::new(v.to_vec()).unwrap()
}

fn synthetic(levels: Vec<f64>, masses: &[f64]) -> EvolutionTrace {
    let states: Vec<IntervalPartition> =
        masses
        .iter()
        .map(|&m| {
            if m > 0.0 {
                IntervalPartition::finite_marked(vec![m / 4.0, 3.0 * m / 4.0]).unwrap()
            } else {
                IntervalPartition::empty()
            }
        })
        .collect();
    EvolutionTrace {
        mode: Mode::Type1,
        levels,
        mass_series: masses.to_vec(),
        states,
        trunc_z: 1e-4,
        mass_floor: 0.0,
        seed: None,
    }
}

#[test]
fn constant_mass_clock() {
    let levels = uniform_levels(2.0, 0.01);
    let masses = vec![2.5; levels.len()];
    let d = depoissonize(&synthetic(levels, &masses), &[0.0, 0.1, 0.3, 0.7]).unwrap();
    assert!(!d.truncated);
    for (u, rho) in d.u.iter().zip(&d.rho) {
        assert!((rho - u * 2.5).abs() < 1e-12, "{u} {rho}");
    }
    for s in &d.states {
        assert!((s.total_mass() - 1.0).abs() < 1e-9);
        assert_eq!(s.blocks(), &[0.25, 0.75]);
    }
}

#[test]
fn clock_matches_closed_form_and_truncates() {
    // mass(y) = 1 - y: the clock is -ln(1 - y), and the mass is gone at y = 1.
    let levels = uniform_levels(1.0, 1e-4);
    let masses: Vec<f64> = levels.iter().map(|y| 1.0 - y).collect();
    let d = depoissonize(&synthetic(levels, &masses), &[0.5, 1.0, 2.0, 50.0]).unwrap();
    assert!(d.truncated);
    assert_eq!(d.u, vec![0.5, 1.0, 2.0]);
    for (u, rho) in d.u.iter().zip(&d.rho) {
        assert!((rho - (1.0 - (-u).exp())).abs() < 1e-4, "{u} {rho}");
    }
    assert!(d.rho.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn scaling_leaves_output_unchanged() {
    let beta = IntervalPartition::finite_marked(vec![0.3, 0.5, 0.2]).unwrap();
    let levels = uniform_levels(0.5, 0.005);
    let trace = evolve(&beta, Mode::Type0, &levels, &EvolveParams::default(), &mut rng(1)).unwrap();
    let c = 3.7;
    let scaled = EvolutionTrace {
        levels: trace.levels.iter().map(|y| c * y).collect(),
        states: trace.states.iter().map(|s| s.scale(c).unwrap()).collect(),
        mass_series: trace.mass_series.iter().map(|m| c * m).collect(),
        ..trace.clone()
    };
    let u = [0.05, 0.1, 0.2];
    let a = depoissonize(&trace, &u).unwrap();
    let b = depoissonize(&scaled, &u).unwrap();
    assert_eq!(a.states.len(), 3);
    for k in 0..3 {
        assert!((b.rho[k] - c * a.rho[k]).abs() < 1e-9);
        let (x, y) = (&a.states[k], &b.states[k]);
        assert_eq!(x.len(), y.len());
        for (p, q) in x.blocks().iter().zip(y.blocks()) {
            assert!((p - q).abs() < 1e-12);
        }
        assert!((x.total_diversity().unwrap() - y.total_diversity().unwrap()).abs() < 1e-9);
    }
}

#[test]
fn initial_clock_speed_is_initial_mass() {
    let beta = IntervalPartition::finite_marked(vec![1.2, 0.8]).unwrap();
    let levels = uniform_levels(0.02, 1e-4);
    let trace = evolve(&beta, Mode::Type1, &levels, &EvolveParams::default(), &mut rng(2)).unwrap();
    let d = depoissonize(&trace, &[1e-3]).unwrap();
    let slope = d.rho[0] / 1e-3;
    assert!((slope - 2.0).abs() < 0.05, "{slope}");
}

#[test]
fn chunked_trace_reaches_target() {
    let beta = IntervalPartition::finite_marked(vec![1.0]).unwrap();
    let tr = trace_until(&beta, Mode::Type0, 0.4, 0.01, 0.1, &EvolveParams::default(), &mut rng(3)).unwrap();
    assert!(tr.levels.windows(2).all(|w| (w[1] - w[0] - 0.01).abs() < 1e-9));
    assert_eq!(tr.states.len(), tr.levels.len());
    let d = depoissonize(&tr, &[0.1, 0.4]).unwrap();
    assert!(!d.truncated);
    // A tiny type-1 block dies long before u = 5.
    let tiny = IntervalPartition::finite_marked(vec![1e-3]).unwrap();
    let tr = trace_until(&tiny, Mode::Type1, 5.0, 0.01, 0.1, &EvolveParams::default(), &mut rng(4)).unwrap();
    assert!(depoissonize(&tr, &[0.1, 5.0]).unwrap().truncated);
}

#[test]
fn generator_examples() {
    let x = point(&[1.0]);
    assert_eq!(ekp_generator(SymPoly::Single(1), &x, 0.0).unwrap(), -2.0);
    assert_eq!(ekp_generator(SymPoly::Single(0), &x, 0.5).unwrap(), 0.0);
    let h = point(&[0.5, 0.5]);
    // 12 q_1 - 12 q_2 - 3 q_1 with q_1 = 1/2 and q_2 = 1/4.
    assert!((ekp_generator(SymPoly::Single(2), &h, 0.0).unwrap() - 1.5).abs() < 1e-12);
    // The theta term adds -2 theta (m + 1) q_m.
    assert!((ekp_generator(SymPoly::Single(1), &x, 0.5).unwrap() + 4.0).abs() < 1e-12);
    assert!(ekp_generator(SymPoly::Single(1), &x, -1.0).is_err());
}

/// `2 B f` from finite differences of `f` on the support of `x`, for the
/// operator `sum x_i(d_ij - x_j) D_ij - sum (theta x_i + 1/2) D_i`.
fn numeric_generator(f: &dyn Fn(&[f64]) -> f64, x: &[f64], theta: f64) -> f64 {
    let h = 1e-4;
    let n = x.len();
    let at = |i: usize, di: f64, j: usize, dj: f64| {
        let mut y = x.to_vec();
        y[i] += di;
        y[j] += dj;
        f(&y)
    };
    let mut total = 0.0;
    for i in 0..n {
        let d1 = (at(i, h, i, 0.0) - at(i, -h, i, 0.0)) / (2.0 * h);
        total -= (theta * x[i] + 0.5) * d1;
        for j in 0..n {
            let d2 = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) / (4.0 * h * h);
            let a = x[i] * (f64::from(i == j) - x[j]);
            total += a * d2;
        }
    }
    2.0 * total
}

fn raw_q(k: u32, y: &[f64]) -> f64 {
    if k == 0 {
        1.0
    } else {
        y.iter().map(|v| v.powi(k as i32 + 1)).sum()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn generator_matches_finite_differences(
        w in prop::collection::vec(0.05..1.0f64, 1..5),
        a in 1u32..4,
        b in 0u32..4,
        theta in prop::sample::select(vec![0.0, 0.5, 1.3]),
    ) {
        let s: f64 = w.iter().sum();
        let x: Vec<f64> = w.iter().map(|v| v / s).collect();
        let p = point(&x);
        let single = ekp_generator(SymPoly::Single(a), &p, theta).unwrap();
        let num = numeric_generator(&|y| raw_q(a, y), &x, theta);
        prop_assert!((single - num).abs() < 1e-5 * (1.0 + num.abs()), "{} vs {}", single, num);
        let prod = ekp_generator(SymPoly::Product(a, b), &p, theta).unwrap();
        let num = numeric_generator(&|y| raw_q(a, y) * raw_q(b, y), &x, theta);
        prop_assert!((prod - num).abs() < 1e-5 * (1.0 + num.abs()), "{} vs {}", prod, num);
    }
}

#[test]
fn parse_test_functions() {
    assert_eq!(SymPoly::parse("q3").unwrap(), SymPoly::Single(3));
    assert_eq!(SymPoly::parse("q1*q2").unwrap(), SymPoly::Product(1, 2));
    for bad in ["", "x1", "q1*q2*q3", "q-1", "q1+q2"] {
        assert!(SymPoly::parse(bad).is_err(), "{bad}");
    }
}

#[test]
fn difference_quotient_small_run() {
    let p = EvolveParams::default();
    let x = point(&[1.0]);
    let r = generator_check(&x, SymPoly::Single(1), 0.0, 0.01, 3000, 0.1, &p, &mut rng(5)).unwrap();
    assert!(r.pass, "{r:?}");
    let x = point(&[0.6, 0.4]);
    let r = generator_check(&x, SymPoly::Single(1), 0.5, 0.01, 3000, 0.1, &p, &mut rng(6)).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn quotients_trend_with_u() {
    // The quotient is -2 + O(u); check each step is within its noise of the
    // previous one and the extrapolation 2 Q(u/2) - Q(u) stays near -2.
    let p = EvolveParams::default();
    let x = point(&[1.0]);
    let reps: Vec<GeneratorReport> = [0.04, 0.02]
        .iter()
        .enumerate()
        .map(|(i, &u)| generator_check(&x, SymPoly::Single(1), 0.0, u, 2000, 0.0, &p, &mut rng(7 + i as u64)).unwrap())
        .collect();
    let extrapolated = 2.0 * reps[1].quotient - reps[0].quotient;
    let se = (4.0 * reps[1].se.powi(2) + reps[0].se.powi(2)).sqrt();
    assert!((extrapolated + 2.0).abs() < 3.0 * se + 0.05, "{extrapolated} se {se}");
}

#[test]
fn errors() {
    let trace = synthetic(vec![0.0, 0.1], &[1.0, 1.0]);
    assert!(depoissonize(&trace, &[0.2, 0.1]).is_err());
    assert!(depoissonize(&synthetic(vec![0.0], &[1.0]), &[0.1]).is_err());
    assert!(depoissonize(&synthetic(vec![0.0, 0.1], &[0.0, 1.0]), &[0.1]).is_err());
    let p = EvolveParams::default();
    assert!(generator_sample(&point(&[1.0]), SymPoly::Single(1), 0.3, 0.01, &p, &mut rng(0)).is_err());
    assert!(generator_sample(&point(&[1.0]), SymPoly::Single(1), 0.0, 0.0, &p, &mut rng(0)).is_err());
}
