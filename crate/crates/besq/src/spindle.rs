use crate::pool::SpindlePool;
use crate::step::{besq5_bridge_to_zero, besq_neg1_lifetime, besq_step};
use crate::{invalid, BesqError, Result};
use rand::Rng;

/// A spindle sampled at increasing offsets `0 = s_0 < ... < s_n = zeta`.
///
/// Unbroken spindles vanish at both ends. Broken ones (from [`Spindle::split`])
/// may not.
#[derive(Debug, Clone, PartialEq)]
pub struct Spindle {
    offsets: Vec<f64>,
    values: Vec<f64>,
}

impl Spindle {
    pub fn new(offsets: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if offsets.len() != values.len() || offsets.len() < 2 {
            return invalid("need at least two grid points and matching lengths");
        }
        if offsets[0] != 0.0 || offsets.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("offsets must start at 0 and increase");
        }
        if values.iter().any(|v| !(*v >= 0.0)) {
            return invalid("values must be nonnegative");
        }
        Ok(Self { offsets, values })
    }

    /// Values on the uniform grid `k * zeta / (values.len() - 1)`.
    pub fn uniform(zeta: f64, values: Vec<f64>) -> Result<Self> {
        if !(zeta > 0.0) || values.len() < 2 {
            return invalid("uniform spindle needs zeta > 0 and two points");
        }
        let n = (values.len() - 1) as f64;
        let offsets = (0..values.len()).map(|k| zeta * k as f64 / n).collect();
        Self::new(offsets, values)
    }

    pub fn lifetime(&self) -> f64 {
        *self.offsets.last().unwrap()
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn amplitude(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Largest grid gap.
    pub fn grid_step(&self) -> f64 {
        self.offsets.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Linear interpolation; 0 outside `[0, zeta]`.
    pub fn value_at(&self, s: f64) -> f64 {
        if !(s >= 0.0) || s > self.lifetime() {
            return 0.0;
        }
        let k = self.offsets.partition_point(|&o| o <= s);
        if k >= self.offsets.len() {
            return *self.values.last().unwrap();
        }
        let (o0, o1) = (self.offsets[k - 1], self.offsets[k]);
        let w = (s - o0) / (o1 - o0);
        self.values[k - 1] * (1.0 - w) + self.values[k] * w
    }

    /// `c ⊙ f`: time and value both multiplied by `c`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return invalid("scale factor must be positive");
        }
        Ok(Self {
            offsets: self.offsets.iter().map(|o| o * c).collect(),
            values: self.values.iter().map(|v| v * c).collect(),
        })
    }

    pub fn reversed(&self) -> Self {
        let z = self.lifetime();
        let mut offsets: Vec<f64> = self.offsets.iter().rev().map(|o| z - o).collect();
        offsets[0] = 0.0;
        Self { offsets, values: self.values.iter().rev().copied().collect() }
    }

    /// Cut at offset `s`: the lower piece lives on `[0, s]`, the upper on
    /// `[s, zeta]` shifted to start at 0. Both carry the interpolated value at `s`.
    pub fn split(&self, s: f64) -> Result<(Self, Self)> {
        let z = self.lifetime();
        if !(s > 0.0 && s < z) {
            return invalid("split offset must lie strictly inside the lifetime");
        }
        let mid = self.value_at(s);
        let k = self.offsets.partition_point(|&o| o < s);
        let mut lo_o = self.offsets[..k].to_vec();
        let mut lo_v = self.values[..k].to_vec();
        lo_o.push(s);
        lo_v.push(mid);
        let j = self.offsets.partition_point(|&o| o <= s);
        let mut up_o = vec![0.0];
        let mut up_v = vec![mid];
        up_o.extend(self.offsets[j..].iter().map(|o| o - s));
        up_v.extend_from_slice(&self.values[j..]);
        Ok((Self { offsets: lo_o, values: lo_v }, Self { offsets: up_o, values: up_v }))
    }

    /// `offset,value` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("offset,value\n");
        for (o, v) in self.offsets.iter().zip(&self.values) {
            s.push_str(&format!("{o:.16e},{v:.16e}\n"));
        }
        s
    }

    /// `{"zeta":..,"amplitude":..,"delta":..}`.
    pub fn sidecar_json(&self) -> String {
        format!(
            "{{\"zeta\":{:.16e},\"amplitude\":{:.16e},\"delta\":{:.16e}}}",
            self.lifetime(),
            self.amplitude(),
            self.grid_step()
        )
    }
}

/// BESQ(5) from 0 on a grid of step `dt` until it first reaches `h`; the crossing
/// point is recorded at exactly `h`.
pub(crate) fn first_passage_leg<R: Rng + ?Sized>(
    h: f64,
    dt: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let (mut t, mut x) = (0.0, 0.0);
    let (mut ts, mut xs) = (vec![0.0], vec![0.0]);
    loop {
        x = besq_step(5, x, dt, rng).expect("valid BESQ(5) step");
        t += dt;
        ts.push(t);
        if x >= h {
            xs.push(h);
            return (ts, xs);
        }
        xs.push(x);
    }
}

/// A spindle from `nu( . | A >= h)`: BESQ(5) up to the first passage of `h`, then
/// BESQ(-1) from `h` until absorption. The second leg is drawn exactly, as its
/// lifetime followed by a bridge, on a grid of step at most `dt`.
pub fn sample_spindle_threshold<R: Rng + ?Sized>(h: f64, dt: f64, rng: &mut R) -> Result<Spindle> {
    if !(h > 0.0) || !(dt > 0.0) {
        return invalid("threshold and grid step must be positive");
    }
    let (mut offsets, mut values) = first_passage_leg(h, dt, rng);
    let top = *offsets.last().unwrap();
    let down = besq_neg1_lifetime(h, rng)?;
    let n = (down / dt).ceil().max(1.0) as usize;
    let rel: Vec<f64> = (1..n).map(|k| down * k as f64 / n as f64).collect();
    let vals = besq5_bridge_to_zero(h, down, &rel, rng)?;
    offsets.extend(rel.iter().map(|r| top + r));
    values.extend(vals);
    offsets.push(top + down);
    values.push(0.0);
    Spindle::new(offsets, values)
}

/// A spindle from `nu( . | zeta)`: a random pool shape scaled to lifetime `zeta`.
pub fn sample_spindle_given_lifetime<R: Rng + ?Sized>(
    zeta: f64,
    pool: &SpindlePool,
    rng: &mut R,
) -> Result<Spindle> {
    if !(zeta > 0.0) {
        return invalid("lifetime must be positive");
    }
    if pool.is_empty() {
        return Err(BesqError::Config("spindle pool is empty".into()));
    }
    let i = pool.sample_index(rng);
    pool.spindle(i, zeta)
}
