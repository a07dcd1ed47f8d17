use kernel_lab::{catalogue, closed_form, len_tail_constant, ClosedForm, Kind};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn form(name: &str, params: &[(&str, f64)]) -> ClosedForm {
    let m: BTreeMap<String, f64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    closed_form(name, &m).unwrap()
}

/// `int_0^inf f`, mapped onto (0, 1) for double-exponential quadrature.
fn integral(f: impl Fn(f64) -> f64) -> f64 {
    let g = |t: f64| {
        let b = t / (1.0 - t);
        f(b) / ((1.0 - t) * (1.0 - t))
    };
    quadrature::double_exponential::integrate(g, 0.0, 1.0, 1e-11).integral
}

#[test]
fn examples() {
    let phi = form("phi", &[("y", 0.5)]);
    assert!((phi.eval(1.0) - (2f64.sqrt() - 1.0)).abs() < 1e-12);
    let iv = form("clade_zeta_given_m0_cdf", &[("a", 2.0)]);
    assert!((iv.eval(1.0) - (-1f64).exp()).abs() < 1e-12);
    let vi = form("clade_zeta_given_jplus_cdf", &[("y", 1.0)]);
    assert!((vi.eval(2.0) - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((len_tail_constant() - 0.9529).abs() < 1e-4);
    assert!((form("clade_j_tail", &[]).eval(1.0) - 0.6752).abs() < 1e-4);
    assert!((form("clade_m0_tail", &[]).eval(4.0) - 0.2821).abs() < 1e-4);
    assert!((form("clade_zeta_tail", &[]).eval(2.0) - 0.5).abs() < 1e-12);
    assert!((form("psi", &[]).eval(1.0) - 0.797_884_560_8).abs() < 1e-9);
    assert!((form("inv_local_time_exponent", &[]).eval(1.0) - 1.2902).abs() < 5e-4);
    assert!((form("psi_inv", &[]).eval(1.0) - 1.1624).abs() < 1e-4);
    assert!((form("nu_lifetime_tail", &[]).eval(1.0) - 0.22508).abs() < 1e-5);
    assert!((form("nu_amplitude_tail", &[]).eval(1.0) - 0.84628).abs() < 1e-5);
    assert!((form("entrance_survival", &[("a", 1.0)]).eval(0.5) - 0.6321).abs() < 1e-4);
}

#[test]
fn densities_integrate_to_one() {
    let cases: Vec<(ClosedForm, f64)> = vec![
        (form("lmb_density", &[("a", 1.0), ("y", 1.0)]), 0.0),
        (form("lmb_density", &[("a", 1.0), ("y", 0.25)]), 0.0),
        (form("lmb_density", &[("a", 3.0), ("y", 0.1)]), 0.0),
        (form("q1_density", &[("y", 0.5)]), 0.0),
        (form("clade_jplus_given_m0_density", &[("a", 2.0)]), 0.0),
        (form("clade_m0_given_zeta_density", &[("z", 0.7)]), 0.0),
        // The BESQ(0) transition has an atom at 0.
        (form("besq0_density", &[("a", 1.0), ("y", 0.5)]), (-1f64).exp()),
        (form("besq0_density", &[("a", 2.0), ("y", 0.1)]), (-10f64).exp()),
    ];
    for (f, atom) in cases {
        assert_eq!(f.kind, Kind::Density);
        let total = integral(|x| f.eval(x)) + atom;
        assert!((total - 1.0).abs() < 1e-6, "{f:?}: {total}");
    }
}

#[test]
fn laplace_identities() {
    for (a, y) in [(1.0, 1.0), (1.0, 0.5), (0.3, 0.25)] {
        let d = form("lmb_density", &[("a", a), ("y", y)]);
        let l = form("lmb_laplace", &[("a", a), ("y", y)]);
        assert!((l.eval(0.0) - 1.0).abs() < 1e-12);
        for lam in [0.5, 1.0, 2.0] {
            let numeric = integral(|b| (-lam * b).exp() * d.eval(b));
            assert!((numeric - l.eval(lam)).abs() < 1e-6, "a={a} y={y} lambda={lam}");
        }
        let q = form("besq0_density", &[("a", a), ("y", y)]);
        let lap = form("besq0_laplace", &[("a", a), ("y", y)]);
        for lam in [0.5, 2.0] {
            let numeric = integral(|b| (-lam * b).exp() * q.eval(b)) + (-a / (2.0 * y)).exp();
            assert!((numeric - lap.eval(lam)).abs() < 1e-6);
        }
    }
    // int_1^inf of the Levy density is the lifetime tail at 1.
    let lev = form("nu_levy_density", &[]);
    let tail = integral(|x| lev.eval(1.0 + x));
    assert!((tail - form("nu_lifetime_tail", &[]).eval(1.0)).abs() < 1e-9);
    // Phi^y is the Laplace exponent of Pi^y.
    let pi = form("pi_density", &[("y", 0.5)]);
    let num = integral(|x| (1.0 - (-x).exp()) * pi.eval(x));
    assert!((num - form("phi", &[("y", 0.5)]).eval(1.0)).abs() < 1e-6);
}

#[test]
fn lookup_errors() {
    let empty = BTreeMap::new();
    assert!(closed_form("nope", &empty).is_err());
    assert!(closed_form("phi", &empty).is_err());
    let mut bad = BTreeMap::new();
    bad.insert("y".to_string(), -1.0);
    assert!(closed_form("phi", &bad).is_err());
    bad.insert("z".to_string(), 1.0);
    assert!(closed_form("psi", &bad).is_err());
    assert!(catalogue().len() > 20);
}

proptest! {
    #[test]
    fn tails_decrease(x in 1e-3f64..1e3, r in 1.01f64..10.0) {
        for (name, params) in catalogue() {
            if !params.is_empty() {
                continue;
            }
            let f = form(name, &[]);
            if f.kind == Kind::Tail {
                prop_assert!(f.eval(x * r) < f.eval(x));
            }
        }
    }

    #[test]
    fn cdfs_are_monotone_in_unit_range(x in 1e-3f64..1e3, r in 1.01f64..10.0, p in 0.1f64..5.0) {
        for (name, key) in [
            ("clade_zeta_given_m0_cdf", "a"),
            ("clade_m0_given_jplus_cdf", "y"),
            ("clade_zeta_given_jplus_cdf", "y"),
        ] {
            let f = form(name, &[(key, p)]);
            let (lo, hi) = (f.eval(x), f.eval(x * r));
            prop_assert!((0.0..=1.0).contains(&lo) && lo <= hi && hi <= 1.0);
        }
    }
}
