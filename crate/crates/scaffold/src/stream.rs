//! Storage-free simulation of the truncated scaffolding.
//!
//! After a downward passage through a level the path sits exactly on that level,
//! so the bi-clades about a level are i.i.d. cycles. Each passage adds `1 / |drift|`
//! to the local time (the occupation density of a piece with slope `drift`), so a
//! rate per unit local time is `|drift|` times a probability per cycle.

use crate::{drift, jump_rate, sample_jump};
use besq::SpindlePool;
use rand::Rng;
use rand_distr::{Distribution, Exp, Poisson};

/// `X(t) - X(0)`.
pub fn increment<R: Rng + ?Sized>(t: f64, trunc_z: f64, rng: &mut R) -> f64 {
    let mean = jump_rate(trunc_z) * t;
    let n: f64 = if mean > 0.0 { Poisson::new(mean).unwrap().sample(rng) } else { 0.0 };
    let mut s = 0.0;
    for _ in 0..n as u64 {
        s += sample_jump(trunc_z, rng);
    }
    drift(trunc_z) * t + s
}

/// First time the path from 0 reaches `-depth`, or `None` if after `t_max`.
pub fn hitting_time<R: Rng + ?Sized>(depth: f64, trunc_z: f64, t_max: f64, rng: &mut R) -> Option<f64> {
    let d = drift(trunc_z);
    let wait = Exp::new(jump_rate(trunc_z)).unwrap();
    let (mut t, mut x) = (0.0, 0.0);
    loop {
        let dt: f64 = wait.sample(rng);
        let y = x + d * dt;
        if y <= -depth {
            let hit = t + (-depth - x) / d;
            return (hit <= t_max).then_some(hit);
        }
        t += dt;
        if t > t_max {
            return None;
        }
        x = y + sample_jump(trunc_z, rng);
    }
}

/// Time until the local time at the start level reaches `k / |drift|`, that is,
/// until the `k`-th downward passage through it; `None` after `t_max`.
pub fn inverse_local_time<R: Rng + ?Sized>(k: u64, trunc_z: f64, t_max: f64, rng: &mut R) -> Option<f64> {
    let d = drift(trunc_z);
    let wait = Exp::new(jump_rate(trunc_z)).unwrap();
    let (mut t, mut x, mut seen) = (0.0, 0.0, 0u64);
    while seen < k {
        let dt: f64 = wait.sample(rng);
        let y = x + d * dt;
        if x > 0.0 && y <= 0.0 {
            seen += 1;
            if seen == k {
                let hit = t + x / -d;
                return (hit <= t_max).then_some(hit);
            }
        }
        t += dt;
        if t > t_max {
            return None;
        }
        x = y + sample_jump(trunc_z, rng);
    }
    Some(0.0)
}

/// When to stop following a cycle before it ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleCaps {
    /// Abandon the anti-clade once it is deeper than this.
    pub depth_cap: f64,
    /// Follow the clade until it ends, or until its height exceeds this and the
    /// cycle has lasted `len_cap`.
    pub height_cap: f64,
    pub len_cap: f64,
}

impl Default for CycleCaps {
    fn default() -> Self {
        Self { depth_cap: f64::INFINITY, height_cap: f64::INFINITY, len_cap: f64::INFINITY }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub j_minus: f64,
    pub j_plus: f64,
    pub m0: f64,
}

/// One cycle: a bi-clade about level 0 started right after a downward passage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cycle {
    /// Duration, or the time followed if the cycle was cut short.
    pub len: f64,
    pub complete: bool,
    /// `None` if the anti-clade was abandoned before any jump crossed the level.
    pub crossing: Option<Crossing>,
    pub zeta_minus: f64,
    /// Clade height; a lower bound unless `complete`.
    pub zeta_plus: f64,
}

pub struct CycleSampler {
    trunc_z: f64,
    d: f64,
    wait: Exp<f64>,
    pool: &'static SpindlePool,
    caps: CycleCaps,
}

impl CycleSampler {
    pub fn new(trunc_z: f64, pool: &'static SpindlePool, caps: CycleCaps) -> Self {
        Self { trunc_z, d: drift(trunc_z), wait: Exp::new(jump_rate(trunc_z)).unwrap(), pool, caps }
    }

    /// Local time carried by one cycle.
    pub fn local_time_per_cycle(&self) -> f64 {
        1.0 / self.d.abs()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Cycle {
        let (d, z) = (self.d, self.trunc_z);
        let (mut t, mut x, mut low) = (0.0, 0.0f64, 0.0f64);
        // Anti-clade: below 0 until a jump crosses.
        let crossing = loop {
            let dt: f64 = self.wait.sample(rng);
            t += dt;
            x += d * dt;
            low = low.min(x);
            if -low > self.caps.depth_cap {
                return Cycle { len: t, complete: false, crossing: None, zeta_minus: -low, zeta_plus: 0.0 };
            }
            let zeta = sample_jump(z, rng);
            if x + zeta > 0.0 {
                let shape = self.pool.sample_index(rng);
                let m0 = self.pool.scaled_value(shape, zeta, -x);
                let c = Crossing { j_minus: -x, j_plus: x + zeta, m0 };
                x += zeta;
                break c;
            }
            x += zeta;
        };
        let mut high = x;
        // Clade: above 0 until it creeps back down.
        loop {
            if high >= self.caps.height_cap && t >= self.caps.len_cap {
                return Cycle { len: t, complete: false, crossing: Some(crossing), zeta_minus: -low, zeta_plus: high };
            }
            let dt: f64 = self.wait.sample(rng);
            if x + d * dt <= 0.0 {
                t += x / -d;
                return Cycle { len: t, complete: true, crossing: Some(crossing), zeta_minus: -low, zeta_plus: high };
            }
            t += dt;
            x += d * dt + sample_jump(z, rng);
            high = high.max(x);
        }
    }
}

/// The truncated path with its jumps in `(z, z1]` replaced by a Brownian motion of
/// the same mean and variance. Jumps above `z1` stay exact.
///
/// The neglected third cumulant is `(3/(2 pi sqrt 2)) (2/3) z1^{3/2} / 6` per unit
/// time and `lambda^3`, so `z1 = 1e-2` is far below Monte Carlo noise while the
/// number of simulated jumps drops by `(z1/z)^{3/2}`.
#[derive(Debug, Clone, Copy)]
pub struct SplitPath {
    drift: f64,
    sigma: f64,
    big_rate: f64,
    z1: f64,
}

impl SplitPath {
    /// Panics unless `0 < trunc_z < z1`.
    pub fn new(trunc_z: f64, z1: f64) -> Self {
        assert!(trunc_z > 0.0 && z1 > trunc_z, "need 0 < trunc_z < z1");
        let c = 3.0 / (2.0 * std::f64::consts::PI * std::f64::consts::SQRT_2);
        let var = 2.0 * c * (z1.sqrt() - trunc_z.sqrt());
        Self { drift: drift(z1), sigma: var.sqrt(), big_rate: jump_rate(z1), z1 }
    }

    /// `X(t) - X(0)`.
    pub fn increment<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        let n: f64 = Poisson::new(self.big_rate * t).unwrap().sample(rng);
        let z: f64 = rng.sample(rand_distr::StandardNormal);
        let mut s = self.drift * t + self.sigma * t.sqrt() * z;
        for _ in 0..n as u64 {
            s += sample_jump(self.z1, rng);
        }
        s
    }

    /// Whether the path from 0 reaches `-depth` before an independent `Exp(theta)`
    /// time; the mean is `E exp(-theta T_{-depth})`.
    pub fn hits_before_killing<R: Rng + ?Sized>(&self, depth: f64, theta: f64, rng: &mut R) -> bool {
        let total = self.big_rate + theta;
        let wait = Exp::new(total).unwrap();
        let s2 = self.sigma * self.sigma;
        let mut x = 0.0;
        loop {
            let tau: f64 = wait.sample(rng);
            let z: f64 = rng.sample(rand_distr::StandardNormal);
            let y = x + self.drift * tau + self.sigma * tau.sqrt() * z;
            if y <= -depth {
                return true;
            }
            // Brownian bridge from x to y dips below -depth with this probability.
            let p = (-2.0 * (x + depth) * (y + depth) / (s2 * tau)).exp();
            if rng.random::<f64>() < p {
                return true;
            }
            if rng.random::<f64>() * total < theta {
                return false;
            }
            x = y + sample_jump(self.z1, rng);
        }
    }
}

/// Settings for a run of i.i.d. cycles at a reference scale `a0 = scale * trunc_z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurveyConfig {
    pub trunc_z: f64,
    pub scale: f64,
    /// Anti-clades deeper than `depth * a0` are abandoned.
    pub depth: f64,
    /// Clades are followed to `height * a0` and time `a0^{3/2}`.
    pub height: f64,
    pub cycles: usize,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        Self { trunc_z: 1e-4, scale: 100.0, depth: 300.0, height: 64.0, cycles: 100_000 }
    }
}

/// One row of a conditional distribution check: `P(stat <= point)` vs the exact value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub point: f64,
    pub empirical: f64,
    pub exact: f64,
    pub count: usize,
}

/// A sample of cycles with estimators for the scale-free clade laws.
///
/// Cut-short cycles are counted on the large side of every tail they leave
/// undecided, so tails are biased up by at most the abandoned fraction.
#[derive(Debug, Clone)]
pub struct CladeSurvey {
    pub a0: f64,
    pub x0: f64,
    pub lt_per_cycle: f64,
    pub cycles: Vec<Cycle>,
}

impl CladeSurvey {
    pub fn run<R: Rng + ?Sized>(cfg: &SurveyConfig, pool: &'static SpindlePool, rng: &mut R) -> Self {
        let a0 = cfg.scale * cfg.trunc_z;
        let x0 = a0.powf(1.5);
        let caps = CycleCaps { depth_cap: cfg.depth * a0, height_cap: cfg.height * a0, len_cap: x0 };
        let s = CycleSampler::new(cfg.trunc_z, pool, caps);
        let cycles = (0..cfg.cycles).map(|_| s.sample(rng)).collect();
        Self { a0, x0, lt_per_cycle: s.local_time_per_cycle(), cycles }
    }

    pub fn complete(&self) -> usize {
        self.cycles.iter().filter(|c| c.complete).count()
    }

    fn rate(&self, hits: usize) -> f64 {
        hits as f64 / self.cycles.len() as f64 / self.lt_per_cycle
    }

    /// `nu{len > 1}`, estimated at `x0` and rescaled by `x0^{1/3}`.
    pub fn len_rate(&self) -> f64 {
        let n = self.cycles.iter().filter(|c| c.len > self.x0).count();
        self.rate(n) * self.x0.cbrt()
    }

    /// `nu{J > 1}`, estimated at `a0` and rescaled by `a0^{1/2}`.
    pub fn j_rate(&self) -> f64 {
        let n = self
            .cycles
            .iter()
            .filter(|c| c.crossing.map_or(true, |x| x.j_minus + x.j_plus > self.a0))
            .count();
        self.rate(n) * self.a0.sqrt()
    }

    /// `nu{m0 > a}` from the count above `a0` and the `a^{-1/2}` scaling.
    pub fn m0_rate_at(&self, a: f64) -> f64 {
        let n = self.cycles.iter().filter(|c| c.crossing.map_or(true, |x| x.m0 > self.a0)).count();
        self.rate(n) * (self.a0 / a).sqrt()
    }

    /// `nu{zeta+ > z}`, scaled the same way.
    pub fn zeta_plus_rate_at(&self, z: f64) -> f64 {
        let n = self.cycles.iter().filter(|c| c.crossing.is_none() || c.zeta_plus > self.a0).count();
        self.rate(n) * (self.a0 / z).sqrt()
    }

    /// `P(m0 <= c a0 | m0 > a0) = 1 - c^{-1/2}`.
    pub fn m0_tail(&self, factors: &[f64]) -> Vec<GridPoint> {
        let vals: Vec<f64> = self.cycles.iter().map(|c| c.crossing.map_or(f64::INFINITY, |x| x.m0)).collect();
        self.tail(&vals, factors)
    }

    /// `P(zeta+ <= c a0 | zeta+ > a0) = 1 - c^{-1/2}`.
    pub fn zeta_plus_tail(&self, factors: &[f64]) -> Vec<GridPoint> {
        let vals: Vec<f64> =
            self.cycles.iter().map(|c| if c.crossing.is_none() { f64::INFINITY } else { c.zeta_plus }).collect();
        self.tail(&vals, factors)
    }

    fn tail(&self, vals: &[f64], factors: &[f64]) -> Vec<GridPoint> {
        let sel: Vec<f64> = vals.iter().copied().filter(|&v| v > self.a0).collect();
        factors
            .iter()
            .map(|&c| GridPoint {
                point: c,
                empirical: frac(&sel, |v| v <= c * self.a0),
                exact: 1.0 - c.powf(-0.5),
                count: sel.len(),
            })
            .collect()
    }

    /// `P(zeta+ <= r m0 | m0) = exp(-1/(2r))`, pooled over `m0` in `[a0, 16 a0]`.
    pub fn zeta_given_m0(&self, ratios: &[f64]) -> Vec<GridPoint> {
        let sel: Vec<f64> = self
            .cycles
            .iter()
            .filter_map(|c| c.crossing.filter(|x| x.m0 >= self.a0 && x.m0 <= 16.0 * self.a0).map(|x| c.zeta_plus / x.m0))
            .collect();
        ratios
            .iter()
            .map(|&r| GridPoint { point: r, empirical: frac(&sel, |v| v <= r), exact: (-0.5 / r).exp(), count: sel.len() })
            .collect()
    }

    fn by_overshoot(&self, f: impl Fn(&Cycle, &Crossing) -> f64) -> Vec<f64> {
        self.cycles
            .iter()
            .filter_map(|c| {
                c.crossing.filter(|x| x.j_plus >= self.a0 && x.j_plus <= 16.0 * self.a0).map(|x| f(c, &x) / x.j_plus)
            })
            .collect()
    }

    /// `P(m0 <= s J+ | J+) = 1 - exp(-s/2)`, pooled over `J+` in `[a0, 16 a0]`.
    pub fn m0_given_overshoot(&self, ratios: &[f64]) -> Vec<GridPoint> {
        let sel = self.by_overshoot(|_, x| x.m0);
        ratios
            .iter()
            .map(|&s| GridPoint {
                point: s,
                empirical: frac(&sel, |v| v <= s),
                exact: 1.0 - (-0.5 * s).exp(),
                count: sel.len(),
            })
            .collect()
    }

    /// `P(zeta+ <= r J+ | J+) = sqrt((r - 1)/r)` for `r >= 1`, pooled as above.
    pub fn zeta_given_overshoot(&self, ratios: &[f64]) -> Vec<GridPoint> {
        let sel = self.by_overshoot(|c, _| c.zeta_plus);
        ratios
            .iter()
            .map(|&r| GridPoint {
                point: r,
                empirical: frac(&sel, |v| v <= r),
                exact: ((r - 1.0).max(0.0) / r).sqrt(),
                count: sel.len(),
            })
            .collect()
    }
}

fn frac(xs: &[f64], pred: impl Fn(f64) -> bool) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().filter(|&&v| pred(v)).count() as f64 / xs.len() as f64
}
