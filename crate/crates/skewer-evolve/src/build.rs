use crate::{invalid, truncated_mass_rate, EvolveParams, Result};
use besq::{besq5_bridge_to_zero, besq_neg1_lifetime};
use ip_core::IntervalPartition;
use rand::Rng;
use rand_distr::{Distribution, Exp};
use scaffold::{drift, jump_rate, sample_jump};

/// Skewer state at a fixed list of levels, filled while a path is simulated.
/// Marks are counts of downward passages until [`Acc::finish`] scales them.
struct Acc<'a> {
    levels: &'a [f64],
    blocks: Vec<Vec<f64>>,
    marks: Vec<Vec<u64>>,
    passages: Vec<u64>,
    dust: Vec<f64>,
    params: &'a EvolveParams,
}

impl<'a> Acc<'a> {
    fn new(levels: &'a [f64], params: &'a EvolveParams) -> Result<Self> {
        if levels.is_empty() || levels.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return invalid("levels must be finite, >= 0 and nonempty");
        }
        if levels.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("levels must be strictly increasing");
        }
        if !(params.trunc_z > 0.0) || !(params.mass_floor >= 0.0) || params.pool.is_empty() {
            return invalid("need trunc_z > 0, mass_floor >= 0 and a nonempty pool");
        }
        let n = levels.len();
        Ok(Self {
            levels,
            blocks: vec![Vec::new(); n],
            marks: vec![Vec::new(); n],
            passages: vec![0; n],
            dust: vec![0.0; n],
            params,
        })
    }

    fn top(&self) -> f64 {
        *self.levels.last().unwrap()
    }

    fn push(&mut self, k: usize, mass: f64) {
        if mass > self.params.mass_floor {
            self.blocks[k].push(mass);
            self.marks[k].push(self.passages[k]);
        } else {
            self.dust[k] += mass;
        }
    }

    /// Count downward passages through the levels in `(lo, hi]`.
    fn pass(&mut self, lo: f64, hi: f64) {
        let a = self.levels.partition_point(|&l| l <= lo);
        let b = self.levels.partition_point(|&l| l <= hi);
        for p in &mut self.passages[a..b] {
            *p += 1;
        }
    }

    /// The leftmost spindle of a clade: BESQ(-1) from `a`, drawn as its lifetime
    /// and a bridge to 0. Returns the lifetime.
    fn initial_spindle<R: Rng + ?Sized>(&mut self, a: f64, rng: &mut R) -> Result<f64> {
        let life = besq_neg1_lifetime(a, rng)?;
        let inside = self.levels.partition_point(|&l| l < life);
        let start = usize::from(self.levels[0] == 0.0);
        if start < inside {
            let vals = besq5_bridge_to_zero(a, life, &self.levels[start..inside], rng)?;
            for (i, v) in vals.into_iter().enumerate() {
                self.push(start + i, v);
            }
        }
        if start == 1 {
            self.push(0, a);
        }
        Ok(life)
    }

    /// Run the truncated path from `x0` until it reaches 0.
    fn run_down<R: Rng + ?Sized>(&mut self, x0: f64, rng: &mut R) {
        let z = self.params.trunc_z;
        let pool = self.params.pool;
        let d = drift(z);
        let wait = Exp::new(jump_rate(z)).unwrap();
        let top = self.top();
        let mut x = x0.min(top);
        loop {
            let dt: f64 = wait.sample(rng);
            let x1 = x + d * dt;
            if x1 <= 0.0 {
                self.pass(0.0, x);
                return;
            }
            self.pass(x1, x);
            let zeta = sample_jump(z, rng);
            let a = self.levels.partition_point(|&l| l <= x1);
            let b = self.levels.partition_point(|&l| l < x1 + zeta);
            if a < b {
                let shape = pool.sample_index(rng);
                for k in a..b {
                    let m = pool.scaled_value(shape, zeta, self.levels[k] - x1);
                    self.push(k, m);
                }
            }
            x = (x1 + zeta).min(top);
        }
    }

    fn finish(mut self) -> Result<Vec<IntervalPartition>> {
        let unit = 1.0 / drift(self.params.trunc_z).abs();
        let rate = if self.params.truncated_dust { truncated_mass_rate(self.params.trunc_z) } else { 0.0 };
        let mut out = Vec::with_capacity(self.levels.len());
        for k in 0..self.levels.len() {
            let div = self.passages[k] as f64 * unit;
            let blocks = std::mem::take(&mut self.blocks[k]);
            let total = blocks.iter().sum::<f64>() + self.dust[k] + rate * div;
            let marks = self.marks[k].iter().map(|&c| c as f64 * unit).collect();
            out.push(IntervalPartition::with_marks(blocks, total, marks, div)?);
        }
        Ok(out)
    }
}

/// Type-1 evolution of one block.
#[derive(Debug, Clone)]
pub struct Clade {
    /// Lifetime of the initial block; while it is alive it is the leftmost block.
    pub lifetime: f64,
    pub states: Vec<IntervalPartition>,
}

/// Type-1 evolution of the single block `{(0, a)}` at `levels`.
pub fn single_clade<R: Rng + ?Sized>(a: f64, levels: &[f64], params: &EvolveParams, rng: &mut R) -> Result<Clade> {
    if !(a > 0.0 && a.is_finite()) {
        return invalid("block mass must be positive");
    }
    let mut acc = Acc::new(levels, params)?;
    let lifetime = acc.initial_spindle(a, rng)?;
    acc.run_down(lifetime, rng);
    Ok(Clade { lifetime, states: acc.finish()? })
}

fn type1_into<R: Rng + ?Sized>(acc: &mut Acc, beta: &IntervalPartition, rng: &mut R) -> Result<()> {
    for &a in beta.blocks() {
        let life = acc.initial_spindle(a, rng)?;
        acc.run_down(life, rng);
    }
    Ok(())
}

/// At level 0 the state is the initial partition itself, marks and dust included.
fn anchor(mut states: Vec<IntervalPartition>, levels: &[f64], beta: &IntervalPartition) -> Vec<IntervalPartition> {
    if levels[0] == 0.0 {
        states[0] = beta.clone();
    }
    states
}

/// Type-1 evolution from `beta` at `levels`: one clade per block, concatenated in
/// block order. Dust in `beta` is not evolved.
pub fn build_type1<R: Rng + ?Sized>(
    beta: &IntervalPartition,
    levels: &[f64],
    params: &EvolveParams,
    rng: &mut R,
) -> Result<Vec<IntervalPartition>> {
    let mut acc = Acc::new(levels, params)?;
    type1_into(&mut acc, beta, rng)?;
    Ok(anchor(acc.finish()?, levels, beta))
}

/// Type-0 evolution from the empty partition: the skewer of a path started at the
/// highest level and stopped at 0.
pub fn immigration<R: Rng + ?Sized>(
    levels: &[f64],
    params: &EvolveParams,
    rng: &mut R,
) -> Result<Vec<IntervalPartition>> {
    let mut acc = Acc::new(levels, params)?;
    let top = acc.top();
    if top > 0.0 {
        acc.run_down(top, rng);
    }
    acc.finish()
}

/// Type-0 evolution from `beta`: the immigration part followed by a type-1 part.
pub fn build_type0<R: Rng + ?Sized>(
    beta: &IntervalPartition,
    levels: &[f64],
    params: &EvolveParams,
    rng: &mut R,
) -> Result<Vec<IntervalPartition>> {
    let mut acc = Acc::new(levels, params)?;
    let top = acc.top();
    if top > 0.0 {
        acc.run_down(top, rng);
    }
    type1_into(&mut acc, beta, rng)?;
    Ok(anchor(acc.finish()?, levels, beta))
}
