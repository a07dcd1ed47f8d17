//! Poisson-Dirichlet interval partitions from a Stable(1/2) subordinator.

use crate::entrance::subordinator_jumps;
use crate::{invalid, Result};
use ip_core::{concatenate, IntervalPartition};
use rand::Rng;
use rand_distr::{Beta, Distribution, Exp};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pdip {
    /// `PDIP(1/2, 0)`.
    Zero,
    /// `PDIP(1/2, 1/2)`.
    Half,
}

/// The Stable(1/2) subordinator run until it passes an independent `Exp(rate)`
/// level `S`: the jumps before the passage, with local-time marks, and the
/// leftover `S - Y(T-)`.
pub fn stable_ladder<R: Rng + ?Sized>(rate: f64, eps: f64, rng: &mut R) -> (IntervalPartition, f64) {
    let s: f64 = Exp::new(rate).unwrap().sample(rng);
    let jump_rate = 1.0 / (PI * eps).sqrt();
    let creep = (eps / PI).sqrt();
    let wait = Exp::new(jump_rate).unwrap();
    let (mut t, mut y) = (0.0, 0.0);
    let (mut blocks, mut marks) = (Vec::new(), Vec::new());
    loop {
        let dt: f64 = wait.sample(rng);
        if y + creep * dt >= s {
            // Passage by the dust drift, an artifact of the cutoff.
            t += (s - y) / creep;
            y = s;
            break;
        }
        t += dt;
        y += creep * dt;
        let u: f64 = 1.0 - rng.random::<f64>();
        let x = eps / (u * u);
        if y + x > s {
            break;
        }
        blocks.push(x);
        marks.push(t);
        y += x;
    }
    let p = IntervalPartition::with_marks(blocks, y, marks, t).expect("ordered jumps");
    (p, s - y)
}

/// A PDIP sample of total mass 1.
pub fn sample_pdip<R: Rng + ?Sized>(variant: Pdip, eps: f64, rng: &mut R) -> Result<IntervalPartition> {
    if !(eps > 0.0) {
        return invalid("eps must be positive");
    }
    loop {
        let (beta, leftover) = stable_ladder(1.0, eps, rng);
        let p = match variant {
            Pdip::Half => beta,
            Pdip::Zero if leftover > 0.0 => {
                concatenate(&[IntervalPartition::with_marks(vec![leftover], leftover, vec![0.0], 0.0)?, beta])
            }
            Pdip::Zero => beta,
        };
        if p.total_mass() > 0.0 {
            return Ok(p.normalize()?);
        }
    }
}

/// Unnormalized Stable(1/2) jump partition over local time `[0, duration]`; its
/// total diversity is `duration`.
pub fn stable_partition<R: Rng + ?Sized>(duration: f64, eps: f64, rng: &mut R) -> IntervalPartition {
    subordinator_jumps(0.0, duration, eps, rng)
}

/// The `n` largest masses of `PD(alpha, theta)`, by stick-breaking. Breaking
/// stops once the unbroken rest is below the `n`-th largest piece, since every
/// later piece is smaller than the rest.
pub fn pd_stick_breaking<R: Rng + ?Sized>(alpha: f64, theta: f64, n: usize, rng: &mut R) -> Vec<f64> {
    let mut rest = 1.0;
    let mut top: Vec<f64> = Vec::with_capacity(n + 1);
    let mut i = 1.0;
    while n > 0 && (top.len() < n || rest > top[n - 1]) {
        let w: f64 = Beta::new(1.0 - alpha, theta + i * alpha).unwrap().sample(rng);
        let piece = rest * w;
        rest -= piece;
        let k = top.partition_point(|&t| t >= piece);
        if k < n {
            top.insert(k, piece);
            top.truncate(n);
        }
        i += 1.0;
    }
    top
}
