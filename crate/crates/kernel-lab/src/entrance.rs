//! Path-free samplers for the type-1 entrance law and the transition kernels.

use crate::{invalid, Result};
use ip_core::{concatenate, IntervalPartition};
use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma, Poisson};
use statrs::function::gamma::gamma_lr;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    /// Jumps of the subordinators below this go to dust.
    pub eps: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        Self { eps: 1e-7 }
    }
}

/// Jumps of a subordinator with Levy density `x^{-3/2} e^{-tilt x} / (2 sqrt pi)`
/// over local time `[0, duration]`, in time order.
///
/// Jumps above `eps` come from thinning the untilted Poisson process; the rest
/// enter as their expected mass. `tilt = 0` is the Stable(1/2) subordinator with
/// Laplace exponent `sqrt(lambda)`; `tilt = 1/2y` is `R^y`.
pub fn subordinator_jumps<R: Rng + ?Sized>(
    tilt: f64,
    duration: f64,
    eps: f64,
    rng: &mut R,
) -> IntervalPartition {
    let rate = duration / (PI * eps).sqrt();
    let n: f64 = if rate > 0.0 { Poisson::new(rate).unwrap().sample(rng) } else { 0.0 };
    let mut jumps: Vec<(f64, f64)> = Vec::with_capacity(n as usize);
    for _ in 0..n as u64 {
        let u: f64 = 1.0 - rng.random::<f64>();
        let x = eps / (u * u);
        if tilt == 0.0 || rng.random::<f64>() < (-tilt * x).exp() {
            jumps.push((rng.random::<f64>() * duration, x));
        }
    }
    jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
    let dust = duration * small_jump_mass(tilt, eps);
    let (marks, blocks): (Vec<f64>, Vec<f64>) = jumps.into_iter().unzip();
    let total = blocks.iter().sum::<f64>() + dust;
    IntervalPartition::with_marks(blocks, total, marks, duration).expect("sorted positive jumps")
}

/// `int_0^eps x Pi(dx)` per unit local time.
fn small_jump_mass(tilt: f64, eps: f64) -> f64 {
    if tilt == 0.0 {
        (eps / PI).sqrt()
    } else {
        0.5 / tilt.sqrt() * gamma_lr(0.5, tilt * eps)
    }
}

/// Leftmost block `L^y` given survival: `Gamma(N - 1/2, 1/2y)` with
/// `N ~ Poisson(a/2y)` conditioned on `N >= 1`.
pub fn sample_lmb<R: Rng + ?Sized>(a: f64, y: f64, rng: &mut R) -> f64 {
    let mu = a / (2.0 * y);
    let n = loop {
        // Poisson conditioned to be positive; for small means start from 1 directly.
        if mu < 1.0 {
            let mut k = 1u64;
            let mut p = mu / (mu.exp() - 1.0);
            let mut u: f64 = rng.random::<f64>();
            while u > p {
                u -= p;
                k += 1;
                p *= mu / k as f64;
            }
            break k;
        }
        let k: f64 = Poisson::new(mu).unwrap().sample(rng);
        if k >= 1.0 {
            break k as u64;
        }
    };
    Gamma::new(n as f64 - 0.5, 2.0 * y).unwrap().sample(rng)
}

fn check(a: f64, y: f64) -> Result<()> {
    if !(a > 0.0 && y > 0.0 && a.is_finite() && y.is_finite()) {
        return invalid("need a > 0 and y > 0");
    }
    Ok(())
}

/// Jumps of `R^y` up to an independent `S^y ~ Exp((2y)^{-1/2})`.
pub fn sample_remainder<R: Rng + ?Sized>(y: f64, params: &KernelParams, rng: &mut R) -> IntervalPartition {
    let s: f64 = Exp::new((2.0 * y).powf(-0.5)).unwrap().sample(rng);
    subordinator_jumps(0.5 / y, s, params.eps, rng)
}

/// State at level `y` of a type-1 evolution from `{(0, a)}`.
pub fn sample_entrance_type1<R: Rng + ?Sized>(
    a: f64,
    y: f64,
    params: &KernelParams,
    rng: &mut R,
) -> Result<IntervalPartition> {
    check(a, y)?;
    if rng.random::<f64>() < (-a / (2.0 * y)).exp() {
        return Ok(IntervalPartition::empty());
    }
    let l = sample_lmb(a, y, rng);
    let rest = sample_remainder(y, params, rng);
    let head = IntervalPartition::with_marks(vec![l], l, vec![0.0], 0.0)?;
    Ok(concatenate(&[head, rest]))
}

/// Type-1 kernel: independent entrance laws per block, in block order. Dust in
/// `beta` is not carried.
pub fn sample_kernel_type1<R: Rng + ?Sized>(
    beta: &IntervalPartition,
    y: f64,
    params: &KernelParams,
    rng: &mut R,
) -> Result<IntervalPartition> {
    if !(y > 0.0) {
        return invalid("level must be positive");
    }
    let parts =
        beta.blocks().iter().map(|&a| sample_entrance_type1(a, y, params, rng)).collect::<Result<Vec<_>>>()?;
    Ok(concatenate(&parts))
}

/// Type-0 kernel: an independent immigration part, then the type-1 kernel.
pub fn sample_kernel_type0<R: Rng + ?Sized>(
    beta: &IntervalPartition,
    y: f64,
    params: &KernelParams,
    rng: &mut R,
) -> Result<IntervalPartition> {
    if !(y > 0.0) {
        return invalid("level must be positive");
    }
    let left = sample_remainder(y, params, rng);
    let right = sample_kernel_type1(beta, y, params, rng)?;
    Ok(concatenate(&[left, right]))
}
