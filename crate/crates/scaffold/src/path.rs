use crate::{drift, invalid, jump_rate, sample_jump, Result};
use besq::{Spindle, SpindlePool};
use rand::Rng;
use rand_distr::{Distribution, Exp};

/// One jump: at `time` the path jumps from `birth` by the spindle lifetime `zeta`.
/// The spindle itself is pool shape `shape` scaled to lifetime `zeta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpindleEvent {
    pub time: f64,
    pub birth: f64,
    pub zeta: f64,
    pub shape: usize,
}

impl SpindleEvent {
    /// Spindle mass at level `y` (0 unless `birth < y < birth + zeta`).
    #[inline]
    pub fn mass_at(&self, pool: &SpindlePool, y: f64) -> f64 {
        pool.scaled_value(self.shape, self.zeta, y - self.birth)
    }

    pub fn top(&self) -> f64 {
        self.birth + self.zeta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaffoldParams {
    pub horizon: f64,
    pub trunc_z: f64,
    pub initial: f64,
}

impl Default for ScaffoldParams {
    fn default() -> Self {
        Self { horizon: 1.0, trunc_z: 1e-4, initial: 0.0 }
    }
}

/// A stored scaffolding path on `[0, horizon]`.
#[derive(Debug, Clone)]
pub struct Scaffolding {
    pub trunc_z: f64,
    pub drift: f64,
    pub horizon: f64,
    pub initial: f64,
    pub events: Vec<SpindleEvent>,
    pool: &'static SpindlePool,
}

impl Scaffolding {
    pub fn sample<R: Rng + ?Sized>(
        params: &ScaffoldParams,
        pool: &'static SpindlePool,
        rng: &mut R,
    ) -> Result<Self> {
        let ScaffoldParams { horizon, trunc_z, initial } = *params;
        if !(horizon >= 0.0) || !(trunc_z > 0.0) || !initial.is_finite() {
            return invalid("need horizon >= 0, trunc_z > 0 and a finite start");
        }
        if pool.is_empty() {
            return invalid("spindle pool is empty");
        }
        let d = drift(trunc_z);
        let wait = Exp::new(jump_rate(trunc_z)).unwrap();
        let mut events = Vec::new();
        let (mut t, mut x) = (0.0, initial);
        loop {
            let dt = wait.sample(rng);
            if t + dt > horizon {
                break;
            }
            t += dt;
            x += d * dt;
            let zeta = sample_jump(trunc_z, rng);
            events.push(SpindleEvent { time: t, birth: x, zeta, shape: pool.sample_index(rng) });
            x += zeta;
        }
        Ok(Self { trunc_z, drift: d, horizon, initial, events, pool })
    }

    /// A path from explicit jumps; births are recomputed from `drift` and the times.
    pub fn from_jumps(
        initial: f64,
        drift: f64,
        horizon: f64,
        jumps: &[(f64, f64, usize)],
        pool: &'static SpindlePool,
    ) -> Result<Self> {
        let mut events = Vec::with_capacity(jumps.len());
        let (mut t, mut x) = (0.0, initial);
        for &(time, zeta, shape) in jumps {
            if !(time > t || (time == 0.0 && events.is_empty())) || time > horizon || !(zeta > 0.0) {
                return invalid("jump times must increase within the horizon and sizes be positive");
            }
            if shape >= pool.len() {
                return invalid("pool index out of range");
            }
            x += drift * (time - t);
            t = time;
            events.push(SpindleEvent { time, birth: x, zeta, shape });
            x += zeta;
        }
        Ok(Self { trunc_z: 0.0, drift, horizon, initial, events, pool })
    }

    pub fn pool(&self) -> &'static SpindlePool {
        self.pool
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t <= self.horizon) {
            return invalid(format!("time {t} outside [0, {}]", self.horizon));
        }
        Ok(())
    }

    /// `X(t-)`.
    pub fn value_before(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        let k = self.events.partition_point(|e| e.time < t);
        Ok(self.level_after(k, t))
    }

    /// `X(t)`.
    pub fn value(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        let k = self.events.partition_point(|e| e.time <= t);
        Ok(self.level_after(k, t))
    }

    /// Level at time `t` given that exactly the first `k` jumps have happened.
    fn level_after(&self, k: usize, t: f64) -> f64 {
        match k {
            0 => self.initial + self.drift * t,
            _ => {
                let e = &self.events[k - 1];
                e.top() + self.drift * (t - e.time)
            }
        }
    }

    /// Start and end levels of the linear piece following jump `k - 1` (or time 0).
    pub(crate) fn segment(&self, k: usize) -> (f64, f64, f64, f64) {
        let (t0, x0) = if k == 0 { (0.0, self.initial) } else { (self.events[k - 1].time, self.events[k - 1].top()) };
        let t1 = if k < self.events.len() { self.events[k].time } else { self.horizon };
        (t0, x0, t1, x0 + self.drift * (t1 - t0))
    }

    /// First time `X(t) <= level`, for `level` below the start; `None` if not reached.
    pub fn hitting_time(&self, level: f64) -> Option<f64> {
        if self.initial <= level {
            return Some(0.0);
        }
        for k in 0..=self.events.len() {
            let (t0, x0, t1, x1) = self.segment(k);
            if x1 <= level {
                return Some(if self.drift < 0.0 { t0 + (level - x0) / self.drift } else { t1 });
            }
        }
        None
    }

    /// `(1/h) Leb{u <= t : y < X(u) < y + h}`, exact on the linear pieces.
    pub fn local_time(&self, y: f64, t: f64, h: f64) -> Result<f64> {
        self.check_time(t)?;
        if !(h > 0.0) {
            return invalid("band width must be positive");
        }
        let (lo, hi) = (y, y + h);
        let mut occ = 0.0;
        for k in 0..=self.events.len() {
            let (t0, x0, t1, _) = self.segment(k);
            if t0 >= t {
                break;
            }
            let t1 = t1.min(t);
            let x1 = x0 + self.drift * (t1 - t0);
            if self.drift == 0.0 {
                if x0 > lo && x0 < hi {
                    occ += t1 - t0;
                }
                continue;
            }
            // Piece runs from x0 to x1 at constant speed; time in band = overlap / speed.
            let (a, b) = (x0.min(x1), x0.max(x1));
            let overlap = (b.min(hi) - a.max(lo)).max(0.0);
            occ += overlap / self.drift.abs();
        }
        Ok(occ / h)
    }

    /// The spindle of jump `k`, cut at level `y`.
    pub fn split_spindle(&self, k: usize, y: f64) -> Result<(Spindle, Spindle)> {
        let e = self.events.get(k).ok_or_else(|| crate::ScaffoldError::InvalidArgument("no such jump".into()))?;
        if !(y > e.birth && y < e.top()) {
            return invalid("level outside the jump interval");
        }
        let s = self.pool.spindle(e.shape, e.zeta)?;
        Ok(s.split(y - e.birth)?)
    }

    /// Masses of the spindles alive at level `y`, in time order (the skewer blocks).
    pub fn skewer_masses(&self, y: f64) -> Vec<f64> {
        self.events
            .iter()
            .filter(|e| e.birth < y && y < e.top())
            .map(|e| e.mass_at(self.pool, y))
            .filter(|&m| m > 0.0)
            .collect()
    }

    /// Rows `t,x_before,x_after,spindle_id`, one per jump.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,x_before,x_after,spindle_id\n");
        for (i, e) in self.events.iter().enumerate() {
            s.push_str(&format!("{:.16e},{:.16e},{:.16e},{i}\n", e.time, e.birth, e.top()));
        }
        s
    }
}
