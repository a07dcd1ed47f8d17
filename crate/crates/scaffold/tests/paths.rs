mod common;

use besq::SpindlePool;
use common::{ks2, mean_se, rng};
use scaffold::stream::{hitting_time, increment, inverse_local_time, SplitPath};
use scaffold::{
    drift, inverse_laplace_exponent, inverse_local_time_exponent, laplace_exponent, ScaffoldError, ScaffoldParams,
    Scaffolding,
};

fn toy() -> Scaffolding {
    // 0 -> -0.5 (t=0.5), jump to 0.5, down through 0 at t=1, -1 at t=2, jump to -0.8, -1.8 at t=3.
    Scaffolding::from_jumps(0.0, -1.0, 3.0, &[(0.5, 1.0, 0), (2.0, 0.2, 1)], SpindlePool::global()).unwrap()
}

#[test]
fn toy_path_values_and_hits() {
    let p = toy();
    assert_eq!(p.value_before(0.5).unwrap(), -0.5);
    assert_eq!(p.value(0.5).unwrap(), 0.5);
    assert!((p.value(1.5).unwrap() + 0.5).abs() < 1e-12);
    assert!((p.value(3.0).unwrap() + 1.8).abs() < 1e-12);
    assert!((p.hitting_time(-1.0).unwrap() - 2.0).abs() < 1e-12);
    assert!((p.hitting_time(-1.5).unwrap() - 2.7).abs() < 1e-12);
    assert_eq!(p.hitting_time(-5.0), None);
    assert!(p.value(3.5).is_err());
    assert_eq!(p.to_csv().lines().count(), 3);
}

#[test]
fn toy_local_time() {
    let p = toy();
    // The band (-0.25, -0.15) is crossed twice at unit speed.
    assert!((p.local_time(-0.25, 3.0, 0.1).unwrap() - 2.0).abs() < 1e-9);
    assert!((p.local_time(-0.25, 0.3, 0.1).unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(p.local_time(4.0, 3.0, 0.1).unwrap(), 0.0);
    assert!(p.local_time(0.0, 1.0, 0.0).is_err());
}

#[test]
fn toy_biclades() {
    let p = toy();
    let b = p.decompose_biclades(0.0);
    assert_eq!(b.len(), 2);
    assert!(b[0].complete && !b[1].complete);
    assert!((b[0].end - 1.0).abs() < 1e-12);
    let s = b[0].stats;
    assert!((s.j_minus - 0.5).abs() < 1e-12 && (s.j_plus - 0.5).abs() < 1e-12);
    assert!((s.zeta_plus - 0.5).abs() < 1e-12 && (s.zeta_minus - 0.5).abs() < 1e-12);
    assert!(s.m0 > 0.0);
    assert!(b[1].stats.degenerate);
    assert_eq!(b[1].crossing, None);
    let far = p.decompose_biclades(10.0);
    assert_eq!(far.len(), 1);
    assert!(!far[0].complete);
}

#[test]
fn sampled_biclades_are_consistent() {
    let pool = SpindlePool::global();
    let mut r = rng(11);
    let params = ScaffoldParams { horizon: 1.0, trunc_z: 1e-3, initial: 0.0 };
    let mut complete = 0;
    for _ in 0..20 {
        let p = Scaffolding::sample(&params, pool, &mut r).unwrap();
        for y in [-0.2, 0.0, 0.1] {
            let pieces = p.decompose_biclades(y);
            let total: f64 = pieces.iter().map(|b| b.end - b.start).sum();
            assert!((total - 1.0).abs() < 1e-9);
            for b in pieces.iter().filter(|b| b.complete) {
                complete += 1;
                let k = b.crossing.unwrap();
                let e = p.events[k];
                assert!((b.stats.j() - e.zeta).abs() < 1e-12 * e.zeta.max(1.0));
                let (lo, up) = p.split_spindle(k, y).unwrap();
                assert!((lo.lifetime() - b.stats.j_minus).abs() < 1e-9);
                assert!((up.lifetime() - b.stats.j_plus).abs() < 1e-9);
                assert!((lo.values().last().unwrap() - b.stats.m0).abs() < 1e-9 * b.stats.m0.max(1.0));
                assert_eq!(lo.values().last(), up.values().first());
            }
            let passages = pieces.len() - 1;
            // With a band far narrower than the smallest jump, occupation counts passages.
            let lt = p.local_time(y, 1.0, 1e-9).unwrap() * drift(1e-3).abs();
            assert!((lt - passages as f64).abs() <= 2.0 + 1e-6, "{lt} vs {passages}");
        }
    }
    assert!(complete > 100);
}

#[test]
fn skewer_masses_match_spindles() {
    let pool = SpindlePool::global();
    let p = Scaffolding::sample(&ScaffoldParams { trunc_z: 1e-3, ..Default::default() }, pool, &mut rng(5)).unwrap();
    let y = 0.05;
    let alive = p.events.iter().filter(|e| e.birth < y && y < e.top()).count();
    let m = p.skewer_masses(y);
    assert!(m.len() <= alive);
    assert!(m.iter().all(|&x| x > 0.0));
}

#[test]
fn increments_have_mean_zero() {
    let mut r = rng(9);
    let xs: Vec<f64> = (0..5000).map(|_| increment(1.0, 1e-3, &mut r)).collect();
    let (m, se) = mean_se(&xs);
    assert!(m.abs() < 3.0 * se, "{m} +- {se}");
    let p = Scaffolding::sample(&ScaffoldParams { horizon: 0.0, ..Default::default() }, SpindlePool::global(), &mut r);
    assert!(p.unwrap().events.is_empty());
}

#[test]
fn one_sided_local_times_agree() {
    let mut r = rng(12);
    let p = Scaffolding::sample(&ScaffoldParams { trunc_z: 1e-3, ..Default::default() }, SpindlePool::global(), &mut r)
        .unwrap();
    for y in [-0.1, 0.0, 0.05] {
        let h = 1e-3;
        let up = p.local_time(y, 1.0, h).unwrap();
        let down = p.local_time(y - h, 1.0, h).unwrap();
        // Each crossing contributes 1/|drift| to both; only jumps landing inside a band differ.
        assert!((up - down).abs() <= 3.0 / drift(1e-3).abs() + 1e-9, "{up} vs {down}");
    }
}

#[test]
fn exact_and_split_increments_agree() {
    let mut r = rng(3);
    let n = 5000;
    let exact: Vec<f64> = (0..n).map(|_| increment(1.0, 1e-3, &mut r)).collect();
    let split = SplitPath::new(1e-3, 2e-2);
    let approx: Vec<f64> = (0..n).map(|_| split.increment(1.0, &mut r)).collect();
    let d = ks2(exact, approx);
    assert!(d < 0.035, "two-sample KS {d}");
}

#[test]
fn laplace_transform_of_one_time_marginal() {
    let split = SplitPath::new(1e-4, 1e-2);
    let mut r = rng(8);
    let xs: Vec<f64> = (0..100_000).map(|_| split.increment(1.0, &mut r)).collect();
    for lam in [0.5, 1.0, 2.0] {
        let m = xs.iter().map(|x| (-lam * x).exp()).sum::<f64>() / xs.len() as f64;
        let rel = (m.ln() - laplace_exponent(lam)).abs() / laplace_exponent(lam);
        assert!(rel < 0.02, "lambda {lam}: relative error {rel}");
    }
}

#[test]
fn hitting_time_laplace() {
    let target = (-inverse_laplace_exponent(1.0)).exp();
    assert!((target - 0.3127).abs() < 1e-4);
    let split = SplitPath::new(1e-4, 1e-2);
    let mut r = rng(21);
    let hits: Vec<f64> =
        (0..20_000).map(|_| if split.hits_before_killing(1.0, 1.0, &mut r) { 1.0 } else { 0.0 }).collect();
    let (m, se) = mean_se(&hits);
    assert!((m - target).abs() < 3.0 * se, "{m} +- {se}");

    // Storage-free exact simulation at a coarse truncation.
    let ts: Vec<f64> = (0..4000).map(|_| hitting_time(1.0, 1e-2, 30.0, &mut r).map_or(0.0, |t| (-t).exp())).collect();
    let (m, se) = mean_se(&ts);
    assert!((m - target).abs() < 3.0 * se + 0.02, "{m} +- {se}");
}

#[test]
fn inverse_local_time_exponent_matches() {
    let z = 1e-3;
    let k = 13;
    let ell = k as f64 / drift(z).abs();
    let mut r = rng(4);
    let xs: Vec<f64> =
        (0..4000).map(|_| inverse_local_time(k, z, 10.0, &mut r).map_or(0.0, |t| (-t).exp())).collect();
    let (m, _) = mean_se(&xs);
    let exponent = -m.ln() / ell;
    let rel = (exponent / inverse_local_time_exponent(1.0) - 1.0).abs();
    assert!(rel < 0.05, "exponent {exponent} vs {}", inverse_local_time_exponent(1.0));
}

#[test]
fn rejects_bad_parameters() {
    let pool = SpindlePool::global();
    let bad = ScaffoldParams { trunc_z: 0.0, ..Default::default() };
    assert!(matches!(Scaffolding::sample(&bad, pool, &mut rng(0)), Err(ScaffoldError::InvalidArgument(_))));
    assert!(Scaffolding::from_jumps(0.0, -1.0, 1.0, &[(0.5, 1.0, 0), (0.4, 1.0, 0)], pool).is_err());
    assert!(Scaffolding::from_jumps(0.0, -1.0, 1.0, &[(0.5, 1.0, usize::MAX)], pool).is_err());
    assert!(toy().split_spindle(0, 2.0).is_err());
}
