use crate::{invalid, Result};
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};

/// Euler parameters for BESQ(-1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerConfig {
    /// Largest sub-step; near 0 the step shrinks to `x / 10`.
    pub dt: f64,
    /// The path is declared absorbed once it falls to this level.
    pub absorb_tol: f64,
}

impl Default for EulerConfig {
    fn default() -> Self {
        Self { dt: 1e-4, absorb_tol: 1e-8 }
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn chi2_4<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Gamma(2, scale 2)
    Gamma::new(2.0, 2.0).unwrap().sample(rng)
}

/// One Euler sub-step from `x > 0`; returns (new value, elapsed time), with the
/// value set to 0 on absorption.
fn euler_substep<R: Rng + ?Sized>(x: f64, max_h: f64, cfg: &EulerConfig, rng: &mut R) -> (f64, f64) {
    let h = cfg.dt.min(x / 10.0).min(max_h);
    let next = x - h + 2.0 * (x * h).sqrt() * normal(rng);
    if next <= cfg.absorb_tol {
        (0.0, h)
    } else {
        (next, h)
    }
}

fn check(delta: i32, x: f64, t: f64) -> Result<()> {
    if !matches!(delta, -1 | 0 | 1 | 5) {
        return invalid(format!("unsupported dimension {delta}"));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return invalid("start must be finite and nonnegative");
    }
    if !(t >= 0.0) {
        return invalid("time step must be nonnegative");
    }
    Ok(())
}

/// One transition of BESQ(`delta`) over time `t`, using the default Euler settings
/// for `delta = -1`.
pub fn besq_step<R: Rng + ?Sized>(delta: i32, x: f64, t: f64, rng: &mut R) -> Result<f64> {
    besq_step_with(delta, x, t, &EulerConfig::default(), rng)
}

pub fn besq_step_with<R: Rng + ?Sized>(
    delta: i32,
    x: f64,
    t: f64,
    cfg: &EulerConfig,
    rng: &mut R,
) -> Result<f64> {
    check(delta, x, t)?;
    if t == 0.0 {
        return Ok(x);
    }
    Ok(match delta {
        0 => {
            if x == 0.0 {
                return Ok(0.0);
            }
            let n: f64 = Poisson::new(x / (2.0 * t)).unwrap().sample(rng);
            if n == 0.0 {
                0.0
            } else {
                Gamma::new(n, 2.0 * t).unwrap().sample(rng)
            }
        }
        1 => {
            let z = x.sqrt() + t.sqrt() * normal(rng);
            z * z
        }
        5 => {
            let z = x.sqrt() + t.sqrt() * normal(rng);
            z * z + t * chi2_4(rng)
        }
        _ => {
            let (mut v, mut left) = (x, t);
            while v > 0.0 && left > 0.0 {
                let (nv, h) = euler_substep(v, left, cfg, rng);
                v = nv;
                left -= h;
            }
            v
        }
    })
}

/// Absorption time of the Euler BESQ(-1) started at `a`.
pub fn euler_neg1_absorption<R: Rng + ?Sized>(a: f64, cfg: &EulerConfig, rng: &mut R) -> Result<f64> {
    if !(a > 0.0) {
        return invalid("start must be positive");
    }
    let (mut v, mut t) = (a, 0.0);
    while v > 0.0 {
        let (nv, h) = euler_substep(v, f64::INFINITY, cfg, rng);
        v = nv;
        t += h;
    }
    Ok(t)
}

/// Exact absorption time of BESQ(-1) from `a`: InverseGamma(3/2, a/2).
pub fn besq_neg1_lifetime<R: Rng + ?Sized>(a: f64, rng: &mut R) -> Result<f64> {
    if !(a > 0.0) {
        return invalid("start must be positive");
    }
    let g: f64 = Gamma::new(1.5, 1.0).unwrap().sample(rng);
    Ok(0.5 * a / g)
}

/// Values at `times` (increasing, inside `(0, duration)`) of a BESQ(5) bridge from
/// `start` at time 0 to 0 at `duration`.
///
/// BESQ(-1) from `a` given its absorption time is this bridge, and so is the
/// unit-lifetime spindle with `start = 0`.
pub fn besq5_bridge_to_zero<R: Rng + ?Sized>(
    start: f64,
    duration: f64,
    times: &[f64],
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(start >= 0.0) || !(duration > 0.0) {
        return invalid("bridge needs start >= 0 and duration > 0");
    }
    let mut out = Vec::with_capacity(times.len());
    let (mut s, mut x) = (0.0, start);
    for &t in times {
        if !(t > s && t < duration) {
            return invalid("bridge times must increase inside (0, duration)");
        }
        let dt = t - s;
        let u = duration - t;
        // A 5-dim Brownian bridge to the origin, squared.
        let r = u / (u + dt);
        let v = dt * r;
        let z = x.sqrt() * r + v.sqrt() * normal(rng);
        x = z * z + v * chi2_4(rng);
        s = t;
        out.push(x);
    }
    Ok(out)
}

/// A BESQ path on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BesqPath {
    pub delta: i32,
    pub start: f64,
    pub dt: f64,
    pub values: Vec<f64>,
    pub absorbed: bool,
}

impl BesqPath {
    pub fn simulate<R: Rng + ?Sized>(
        delta: i32,
        start: f64,
        dt: f64,
        n_steps: usize,
        cfg: &EulerConfig,
        rng: &mut R,
    ) -> Result<Self> {
        check(delta, start, dt)?;
        if !(dt > 0.0) {
            return invalid("grid step must be positive");
        }
        let mut values = Vec::with_capacity(n_steps + 1);
        values.push(start);
        let mut x = start;
        for _ in 0..n_steps {
            if x == 0.0 && delta <= 0 {
                values.push(0.0);
                continue;
            }
            x = besq_step_with(delta, x, dt, cfg, rng)?;
            values.push(x);
        }
        let absorbed = delta <= 0 && x == 0.0;
        Ok(Self { delta, start, dt, values, absorbed })
    }
}
