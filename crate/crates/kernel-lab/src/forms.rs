//! Closed-form laws, evaluated by name.

use crate::{invalid, Result};
use statrs::function::gamma::{gamma, ln_gamma};
use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Density,
    Cdf,
    Tail,
    Laplace,
    Exponent,
    Probability,
}

type Eval = fn(&[f64], f64) -> f64;

struct Entry {
    name: &'static str,
    params: &'static [&'static str],
    kind: Kind,
    support: (f64, f64),
    eval: Eval,
}

/// A catalogue entry with its parameters bound.
#[derive(Clone)]
pub struct ClosedForm {
    pub name: &'static str,
    pub kind: Kind,
    /// Interval the argument lives on.
    pub support: (f64, f64),
    params: Vec<f64>,
    eval: Eval,
}

impl std::fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClosedForm").field("name", &self.name).field("params", &self.params).finish()
    }
}

impl ClosedForm {
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(&self.params, x)
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }
}

/// `ln I_1(x)`, switching to the large-argument expansion where `I_1` overflows.
pub fn ln_bessel_i1(x: f64) -> f64 {
    if x < 500.0 {
        puruspe::In(1, x).ln()
    } else {
        let mu = 4.0;
        let s = 1.0 - (mu - 1.0) / (8.0 * x) + (mu - 1.0) * (mu - 9.0) / (2.0 * (8.0 * x).powi(2));
        x - 0.5 * (2.0 * PI * x).ln() + s.ln()
    }
}

/// Continuous part of the BESQ(0) transition from `a` at time `y`.
pub fn besq0_density(a: f64, y: f64, b: f64) -> f64 {
    if !(b > 0.0) || !(a > 0.0) {
        return 0.0;
    }
    let u = (a * b).sqrt() / y;
    (0.5 * (a / b).ln() - (a + b) / (2.0 * y) + ln_bessel_i1(u)).exp() / (2.0 * y)
}

/// Density of the leftmost block `L^y` of a type-1 evolution from `{(0, a)}`,
/// given survival to `y`.
pub fn lmb_density(a: f64, y: f64, b: f64) -> f64 {
    if !(b > 0.0) {
        return 0.0;
    }
    let u = (a * b).sqrt() / y;
    // 1 - cosh u + u sinh u, by its series near 0 to avoid cancellation.
    let bracket = if u < 1e-2 {
        let u2 = u * u;
        u2 / 2.0 + u2 * u2 / 8.0 + u2 * u2 * u2 / 144.0
    } else {
        1.0 - u.cosh() + u * u.sinh()
    };
    if bracket.is_finite() {
        let pre = y.sqrt() / (2.0 * PI).sqrt() * b.powf(-1.5) * (-b / (2.0 * y)).exp() / (a / (2.0 * y)).exp_m1();
        return pre * bracket;
    }
    // For large u the bracket is u e^u / 2 to relative order 1/u.
    let ln = 0.5 * y.ln() - 0.5 * (2.0 * PI).ln() - 1.5 * b.ln() - b / (2.0 * y) - ln_expm1(a / (2.0 * y))
        + (u - 1.0).ln()
        + u
        - 2f64.ln();
    ln.exp()
}

fn ln_expm1(x: f64) -> f64 {
    if x > 30.0 {
        x
    } else {
        x.exp_m1().ln()
    }
}

/// `E exp(-lambda L^y)`.
pub fn lmb_laplace(a: f64, y: f64, lambda: f64) -> f64 {
    let d = 2.0 * y * lambda + 1.0;
    d.sqrt() * ((-lambda * a / d).exp() - (-a / (2.0 * y)).exp()) / (-(-a / (2.0 * y)).exp_m1())
}

/// `Phi^y(lambda) = (lambda + 1/2y)^{1/2} - (1/2y)^{1/2}`.
pub fn phi_y(y: f64, lambda: f64) -> f64 {
    (lambda + 0.5 / y).sqrt() - (0.5 / y).sqrt()
}

/// Levy density of the inverse-Gaussian subordinator `R^y`.
pub fn pi_y_density(y: f64, x: f64) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    x.powf(-1.5) * (-x / (2.0 * y)).exp() / (2.0 * PI.sqrt())
}

fn gamma_half_density(rate: f64, x: f64) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    (rate / (PI * x)).sqrt() * (-rate * x).exp()
}

/// `3 / (2^{2/3} pi^{1/3} Gamma(2/3))`, the constant of the clade length tail.
pub fn len_tail_constant() -> f64 {
    3.0 / (2f64.powf(2.0 / 3.0) * PI.cbrt() * gamma(2.0 / 3.0))
}

fn pos(x: f64) -> bool {
    x > 0.0
}

const INF: f64 = f64::INFINITY;

static CATALOGUE: &[Entry] = &[
    Entry { name: "psi", params: &[], kind: Kind::Exponent, support: (0.0, INF), eval: |_, l| (2.0 / PI).sqrt() * l.powf(1.5) },
    Entry { name: "psi_inv", params: &[], kind: Kind::Exponent, support: (0.0, INF), eval: |_, t| (PI / 2.0).cbrt() * t.powf(2.0 / 3.0) },
    Entry {
        name: "inv_local_time_exponent",
        params: &[],
        kind: Kind::Exponent,
        support: (0.0, INF),
        eval: |_, t| 3.0 * (t / (4.0 * PI)).cbrt(),
    },
    Entry { name: "aggregate_mass_exponent", params: &[], kind: Kind::Exponent, support: (0.0, INF), eval: |_, l| l.sqrt() },
    Entry { name: "phi", params: &["y"], kind: Kind::Exponent, support: (0.0, INF), eval: |p, l| phi_y(p[0], l) },
    Entry { name: "pi_density", params: &["y"], kind: Kind::Density, support: (0.0, INF), eval: |p, x| pi_y_density(p[0], x) },
    Entry { name: "lmb_density", params: &["a", "y"], kind: Kind::Density, support: (0.0, INF), eval: |p, b| lmb_density(p[0], p[1], b) },
    Entry { name: "lmb_laplace", params: &["a", "y"], kind: Kind::Laplace, support: (0.0, INF), eval: |p, l| lmb_laplace(p[0], p[1], l) },
    Entry {
        name: "entrance_survival",
        params: &["a"],
        kind: Kind::Probability,
        support: (0.0, INF),
        eval: |p, y| -(-p[0] / (2.0 * y)).exp_m1(),
    },
    Entry { name: "besq0_density", params: &["a", "y"], kind: Kind::Density, support: (0.0, INF), eval: |p, b| besq0_density(p[0], p[1], b) },
    Entry { name: "besq0_atom", params: &["a"], kind: Kind::Probability, support: (0.0, INF), eval: |p, y| (-p[0] / (2.0 * y)).exp() },
    Entry {
        name: "besq0_laplace",
        params: &["a", "y"],
        kind: Kind::Laplace,
        support: (0.0, INF),
        eval: |p, l| (-l * p[0] / (2.0 * p[1] * l + 1.0)).exp(),
    },
    Entry {
        name: "q1_density",
        params: &["y"],
        kind: Kind::Density,
        support: (0.0, INF),
        eval: |p, b| gamma_half_density(0.5 / p[0], b),
    },
    Entry { name: "clade_m0_tail", params: &[], kind: Kind::Tail, support: (0.0, INF), eval: |_, a| 1.0 / (PI * a).sqrt() },
    Entry { name: "clade_zeta_tail", params: &[], kind: Kind::Tail, support: (0.0, INF), eval: |_, z| 1.0 / (2.0 * z).sqrt() },
    Entry {
        name: "clade_jplus_given_m0_density",
        params: &["a"],
        kind: Kind::Density,
        support: (0.0, INF),
        eval: |p, j| {
            if !pos(j) {
                return 0.0;
            }
            let b = p[0] / 2.0;
            (1.5 * b.ln() - ln_gamma(1.5) - 2.5 * j.ln() - b / j).exp()
        },
    },
    Entry {
        name: "clade_zeta_given_m0_cdf",
        params: &["a"],
        kind: Kind::Cdf,
        support: (0.0, INF),
        eval: |p, z| if pos(z) { (-p[0] / (2.0 * z)).exp() } else { 0.0 },
    },
    Entry {
        name: "clade_m0_given_jplus_cdf",
        params: &["y"],
        kind: Kind::Cdf,
        support: (0.0, INF),
        eval: |p, a| if pos(a) { -(-a / (2.0 * p[0])).exp_m1() } else { 0.0 },
    },
    Entry {
        name: "clade_zeta_given_jplus_cdf",
        params: &["y"],
        kind: Kind::Cdf,
        support: (0.0, INF),
        eval: |p, z| if z > p[0] { ((z - p[0]) / z).sqrt() } else { 0.0 },
    },
    Entry {
        name: "clade_m0_given_zeta_density",
        params: &["z"],
        kind: Kind::Density,
        support: (0.0, INF),
        eval: |p, a| {
            if !pos(a) {
                return 0.0;
            }
            p[0].sqrt() * a.powf(-1.5) * -(-a / (2.0 * p[0])).exp_m1() / (2.0 * PI).sqrt()
        },
    },
    Entry { name: "clade_len_tail", params: &[], kind: Kind::Tail, support: (0.0, INF), eval: |_, x| len_tail_constant() * x.powf(-1.0 / 3.0) },
    Entry { name: "clade_j_tail", params: &[], kind: Kind::Tail, support: (0.0, INF), eval: |_, y| 3.0 / (PI * SQRT_2) / y.sqrt() },
    Entry { name: "nu_lifetime_tail", params: &[], kind: Kind::Tail, support: (0.0, INF), eval: |_, y| y.powf(-1.5) / (PI * SQRT_2) },
    Entry {
        name: "nu_amplitude_tail",
        params: &[],
        kind: Kind::Tail,
        support: (0.0, INF),
        eval: |_, m| 1.5 / PI.sqrt() * m.powf(-1.5),
    },
    Entry {
        name: "nu_levy_density",
        params: &[],
        kind: Kind::Density,
        support: (0.0, INF),
        eval: |_, x| 3.0 / (2.0 * PI * SQRT_2) * x.powf(-2.5),
    },
    Entry {
        name: "pseudo_survival",
        params: &["rho"],
        kind: Kind::Probability,
        support: (0.0, INF),
        eval: |p, y| 1.0 / (2.0 * y * p[0] + 1.0),
    },
];

/// Names and parameter names of every catalogue entry.
pub fn catalogue() -> Vec<(&'static str, &'static [&'static str])> {
    CATALOGUE.iter().map(|e| (e.name, e.params)).collect()
}

/// Look up `name` and bind its parameters. Every listed parameter must be given
/// and positive; extra keys are rejected.
pub fn closed_form(name: &str, params: &BTreeMap<String, f64>) -> Result<ClosedForm> {
    let Some(e) = CATALOGUE.iter().find(|e| e.name == name) else {
        return invalid(format!("unknown closed form `{name}`"));
    };
    if let Some(k) = params.keys().find(|k| !e.params.contains(&k.as_str())) {
        return invalid(format!("`{name}` takes no parameter `{k}`"));
    }
    let mut bound = Vec::with_capacity(e.params.len());
    for p in e.params {
        match params.get(*p) {
            Some(&v) if v > 0.0 && v.is_finite() => bound.push(v),
            Some(v) => return invalid(format!("parameter `{p}` must be positive, got {v}")),
            None => return invalid(format!("`{name}` needs parameter `{p}`")),
        }
    }
    Ok(ClosedForm { name: e.name, kind: e.kind, support: e.support, params: bound, eval: e.eval })
}
