//! De-Poissonization of interval-partition evolutions and the ranked generator.
//!
//! The time change is `rho(u) = inf{y : int_0^y ||alpha^z||^-1 dz > u}`. A
//! de-Poissonized state is `alpha^rho(u)` scaled to unit mass.

mod generator;

pub use generator::{ekp_generator, generator_check, generator_sample, GeneratorReport, SymPoly};

use ip_core::IntervalPartition;
use rand::Rng;
use skewer_evolve::{evolve, EvolutionTrace, EvolveParams, Mode};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DepoisError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Partition(#[from] ip_core::IpError),
    #[error(transparent)]
    Evolve(#[from] skewer_evolve::EvolveError),
}

pub type Result<T> = std::result::Result<T, DepoisError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(DepoisError::InvalidArgument(msg.into()))
}

/// De-Poissonized states on a `u` grid.
#[derive(Debug, Clone)]
pub struct DePoisTrace {
    pub u: Vec<f64>,
    /// Level `rho(u)` reached for each `u`.
    pub rho: Vec<f64>,
    /// Unit-mass states.
    pub states: Vec<IntervalPartition>,
    /// Total mass before normalization.
    pub mass: Vec<f64>,
    /// Set when the mass vanished or the level grid ended before the last
    /// requested `u`; `u`, `rho` and `states` then stop early.
    pub truncated: bool,
}

/// `int_{levels[0]}^{levels[k]} 1/mass` by the trapezoid rule, until the first
/// nonpositive mass.
pub fn clock(levels: &[f64], masses: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(levels.len());
    if levels.is_empty() || !(masses[0] > 0.0) {
        return out;
    }
    out.push(0.0);
    for k in 1..levels.len() {
        if !(masses[k] > 0.0) {
            break;
        }
        let step = 0.5 * (levels[k] - levels[k - 1]) * (1.0 / masses[k] + 1.0 / masses[k - 1]);
        out.push(out[k - 1] + step);
    }
    out
}

/// Invert the piecewise linear clock at `u`: the level where it first exceeds
/// `u`, or `None` past its end.
pub fn invert_clock(levels: &[f64], clock: &[f64], u: f64) -> Option<f64> {
    let k = clock.partition_point(|&c| c <= u);
    if k == 0 {
        return Some(levels[0]);
    }
    if k == clock.len() {
        return None;
    }
    let w = (u - clock[k - 1]) / (clock[k] - clock[k - 1]);
    Some(levels[k - 1] + w * (levels[k] - levels[k - 1]))
}

/// De-Poissonize a trace at increasing `u` values. States are taken at the
/// simulated level nearest to `rho(u)`.
pub fn depoissonize(trace: &EvolutionTrace, u_grid: &[f64]) -> Result<DePoisTrace> {
    let levels = &trace.levels;
    if levels.len() < 2 || trace.states.len() != levels.len() {
        return invalid("trace needs at least two levels and one state per level");
    }
    if u_grid.iter().any(|u| !(u.is_finite() && *u >= 0.0)) || u_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return invalid("u values must be finite, >= 0 and increasing");
    }
    let clk = clock(levels, &trace.mass_series);
    if clk.is_empty() {
        return invalid("initial mass must be positive");
    }
    let live = &levels[..clk.len()];
    let mut out = DePoisTrace { u: Vec::new(), rho: Vec::new(), states: Vec::new(), mass: Vec::new(), truncated: false };
    for &u in u_grid {
        let Some(y) = invert_clock(live, &clk, u) else {
            out.truncated = true;
            break;
        };
        let k = nearest(live, y);
        out.u.push(u);
        out.rho.push(y);
        out.states.push(trace.states[k].normalize()?);
        out.mass.push(trace.states[k].total_mass());
    }
    Ok(out)
}

fn nearest(levels: &[f64], y: f64) -> usize {
    let k = levels.partition_point(|&l| l < y);
    if k == 0 {
        0
    } else if k == levels.len() || y - levels[k - 1] <= levels[k] - y {
        k - 1
    } else {
        k
    }
}

/// Evenly spaced levels `0, h, 2h, ...` up to and including `top`.
pub fn uniform_levels(top: f64, h: f64) -> Vec<f64> {
    let n = (top / h).ceil() as usize;
    (0..=n).map(|k| k as f64 * h).collect()
}

/// Evolve from `beta` in chunks of `chunk` levels with spacing `h`, continuing
/// from the last state until the clock passes `u` or the mass dies.
pub fn trace_until<R: Rng + ?Sized>(
    beta: &IntervalPartition,
    mode: Mode,
    u: f64,
    h: f64,
    chunk: f64,
    params: &EvolveParams,
    rng: &mut R,
) -> Result<EvolutionTrace> {
    if !(h > 0.0 && chunk >= h) {
        return invalid("need 0 < h <= chunk");
    }
    let local = uniform_levels(chunk, h);
    let mut trace = evolve(beta, mode, &local, params, rng)?;
    loop {
        let clk = clock(&trace.levels, &trace.mass_series);
        if clk.len() < trace.levels.len() || *clk.last().unwrap() > u {
            return Ok(trace);
        }
        let base = *trace.levels.last().unwrap();
        let start = trace.states.last().unwrap().clone();
        let next = evolve(&start, mode, &local, params, rng)?;
        trace.levels.extend(local[1..].iter().map(|l| base + l));
        trace.states.extend(next.states.into_iter().skip(1));
        trace.mass_series.extend(next.mass_series.into_iter().skip(1));
    }
}
