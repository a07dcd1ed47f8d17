//! Unit-lifetime spindle shapes.
//!
//! The default pool is built by rejection: threshold spindles at amplitude `h`
//! whose lifetime lands in `[1 - w, 1 + w]`, rescaled to lifetime 1. Drawing the
//! whole spindle and then testing the lifetime would throw away almost every
//! draw, so the two legs are sampled in a different order. The first-passage leg
//! fixes its duration `H`; the BESQ(-1) leg has lifetime `InverseGamma(3/2, h/2)`
//! with a closed-form CDF, so `H` is kept with probability proportional to the
//! chance that the second lifetime lands in the window, and the second lifetime is
//! then drawn inside the window. The accepted law is the same as for plain
//! rejection.

use crate::spindle::{first_passage_leg, Spindle};
use crate::step::besq5_bridge_to_zero;
use crate::{invalid, Result};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use statrs::function::gamma::gamma_lr;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoolConfig {
    pub size: usize,
    /// Grid points per shape on `[0, 1]`.
    pub grid: usize,
    /// Amplitude threshold of the candidate spindles.
    pub h: f64,
    /// Half-width of the lifetime window around 1.
    pub window: f64,
    /// Step of the first-passage leg.
    pub up_dt: f64,
    pub seed: u64,
}

impl Default for PoolConfig {
    fn default() -> Self {
        Self { size: 4096, grid: 1001, h: 0.05, window: 0.02, up_dt: 1e-5, seed: 0x5eed_5b1d }
    }
}

/// Shapes of `nu( . | zeta = 1)` on a uniform grid of `[0, 1]`.
#[derive(Debug, Clone)]
pub struct SpindlePool {
    grid: usize,
    shapes: Vec<f64>,
    amplitudes: Vec<f64>,
}

static GLOBAL: OnceLock<SpindlePool> = OnceLock::new();

impl SpindlePool {
    /// The shared default pool, built on first use from a fixed seed.
    pub fn global() -> &'static SpindlePool {
        GLOBAL.get_or_init(|| {
            let cfg = PoolConfig::default();
            let mut rng = StdRng::seed_from_u64(cfg.seed);
            Self::by_rejection(&cfg, &mut rng).expect("default pool config is valid")
        })
    }

    fn from_shapes(grid: usize, shapes: Vec<f64>) -> Self {
        let amplitudes = shapes.chunks(grid).map(|c| c.iter().copied().fold(0.0, f64::max)).collect();
        Self { grid, shapes, amplitudes }
    }

    pub fn by_rejection<R: Rng + ?Sized>(cfg: &PoolConfig, rng: &mut R) -> Result<Self> {
        if cfg.grid < 3 || !(cfg.h > 0.0) || !(cfg.window > 0.0 && cfg.window < 0.5) || !(cfg.up_dt > 0.0) {
            return invalid("bad pool configuration");
        }
        let (lo, hi) = (1.0 - cfg.window, 1.0 + cfg.window);
        let beta = 0.5 * cfg.h;
        // The window probability increases with H while the window sits above the
        // InverseGamma mode, so its value at `h_cap` bounds it for H <= h_cap. Longer
        // first legs are accepted outright; they essentially never occur.
        let window_prob = |top: f64| gamma_lr(1.5, beta / (lo - top)) - gamma_lr(1.5, beta / (hi - top));
        let h_cap = 0.5 * lo;
        let p_max = window_prob(h_cap);

        let mut shapes = Vec::with_capacity(cfg.size * cfg.grid);
        let mut row = vec![0.0; cfg.grid];
        while shapes.len() < cfg.size * cfg.grid {
            let (ts, xs) = first_passage_leg(cfg.h, cfg.up_dt, rng);
            let top = *ts.last().unwrap();
            if top >= lo || rng.random::<f64>() * p_max > window_prob(top) {
                continue;
            }
            // Second lifetime = beta / G with G ~ Gamma(3/2, 1) restricted to the window.
            let (g_lo, g_hi) = (beta / (hi - top), beta / (lo - top));
            let peak = |g: f64| g.sqrt() * (-g).exp();
            let env = if g_lo <= 0.5 && 0.5 <= g_hi { peak(0.5) } else { peak(g_lo).max(peak(g_hi)) };
            let down = loop {
                let g = g_lo + (g_hi - g_lo) * rng.random::<f64>();
                if rng.random::<f64>() * env <= peak(g) {
                    break beta / g;
                }
            };
            let zeta = top + down;
            let n = cfg.grid - 1;
            let mut k = 0;
            let mut j = 0;
            // Up leg by interpolation of the fine path.
            while k <= n {
                let s = zeta * k as f64 / n as f64;
                if s > top {
                    break;
                }
                while j + 1 < ts.len() && ts[j + 1] < s {
                    j += 1;
                }
                let w = if j + 1 < ts.len() { ((s - ts[j]) / (ts[j + 1] - ts[j])).clamp(0.0, 1.0) } else { 0.0 };
                let x = if j + 1 < ts.len() { xs[j] * (1.0 - w) + xs[j + 1] * w } else { xs[j] };
                row[k] = x / zeta;
                k += 1;
            }
            let rel: Vec<f64> = (k..n).map(|i| zeta * i as f64 / n as f64 - top).collect();
            let vals = besq5_bridge_to_zero(cfg.h, down, &rel, rng)?;
            for (i, v) in vals.into_iter().enumerate() {
                row[k + i] = v / zeta;
            }
            row[n] = 0.0;
            shapes.extend_from_slice(&row);
        }
        Ok(Self::from_shapes(cfg.grid, shapes))
    }

    /// Shapes drawn directly as BESQ(5) bridges from 0 to 0 over unit time.
    pub fn by_bridges<R: Rng + ?Sized>(size: usize, grid: usize, rng: &mut R) -> Result<Self> {
        if grid < 3 {
            return invalid("grid needs at least 3 points");
        }
        let n = grid - 1;
        let times: Vec<f64> = (1..n).map(|k| k as f64 / n as f64).collect();
        let mut shapes = Vec::with_capacity(size * grid);
        for _ in 0..size {
            shapes.push(0.0);
            shapes.extend(besq5_bridge_to_zero(0.0, 1.0, &times, rng)?);
            shapes.push(0.0);
        }
        Ok(Self::from_shapes(grid, shapes))
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn shape(&self, i: usize) -> &[f64] {
        &self.shapes[i * self.grid..(i + 1) * self.grid]
    }

    pub fn amplitude(&self, i: usize) -> f64 {
        self.amplitudes[i]
    }

    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(0..self.len())
    }

    /// Value of shape `i` at `u` in `[0, 1]` (0 outside).
    #[inline]
    pub fn value(&self, i: usize, u: f64) -> f64 {
        if !(u > 0.0 && u < 1.0) {
            return 0.0;
        }
        let row = self.shape(i);
        let x = u * (self.grid - 1) as f64;
        let k = (x as usize).min(self.grid - 2);
        let w = x - k as f64;
        row[k] * (1.0 - w) + row[k + 1] * w
    }

    /// Value at offset `s` of shape `i` scaled to lifetime `zeta`.
    #[inline]
    pub fn scaled_value(&self, i: usize, zeta: f64, s: f64) -> f64 {
        zeta * self.value(i, s / zeta)
    }

    pub fn spindle(&self, i: usize, zeta: f64) -> Result<Spindle> {
        if i >= self.len() {
            return invalid("pool index out of range");
        }
        Spindle::uniform(zeta, self.shape(i).iter().map(|v| v * zeta).collect())
    }
}
