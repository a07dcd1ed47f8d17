use crate::{depoissonize, invalid, uniform_levels, Result};
use ip_core::{IntervalPartition, RankedSimplexPoint};
use rand::Rng;
use skewer_evolve::{evolve, EvolveParams, Mode};

const ALPHA: f64 = 0.5;

/// Test functions built from `q_m(x) = sum x_i^(m+1)`, with `q_0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymPoly {
    Single(u32),
    Product(u32, u32),
}

impl SymPoly {
    /// Parses `q2` or `q1*q3`.
    pub fn parse(s: &str) -> Result<Self> {
        let index = |t: &str| -> Result<u32> {
            match t.trim().strip_prefix('q').and_then(|d| d.parse().ok()) {
                Some(m) if m <= 64 => Ok(m),
                _ => invalid(format!("unsupported test function {s:?}")),
            }
        };
        match s.split('*').collect::<Vec<_>>().as_slice() {
            [a] => Ok(SymPoly::Single(index(a)?)),
            [a, b] => Ok(SymPoly::Product(index(a)?, index(b)?)),
            _ => invalid(format!("unsupported test function {s:?}")),
        }
    }

    pub fn eval(&self, x: &RankedSimplexPoint) -> f64 {
        match *self {
            SymPoly::Single(m) => x.q(m),
            SymPoly::Product(a, b) => x.q(a) * x.q(b),
        }
    }
}

/// `2 B q_m` for the two-parameter generator with `alpha = 1/2`.
fn twice_b_single(m: u32, theta: f64, x: &RankedSimplexPoint) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let mf = m as f64;
    let (lower, q) = (x.q(m - 1), x.q(m));
    2.0 * (mf + 1.0) * mf * (lower - q) - 2.0 * theta * (mf + 1.0) * q - 2.0 * ALPHA * (mf + 1.0) * lower
}

/// `2 B q` at `x` for `EKP(1/2, theta)`.
pub fn ekp_generator(q: SymPoly, x: &RankedSimplexPoint, theta: f64) -> Result<f64> {
    if !(theta.is_finite() && theta >= 0.0) {
        return invalid("theta must be finite and >= 0");
    }
    Ok(match q {
        SymPoly::Single(m) => twice_b_single(m, theta, x),
        SymPoly::Product(a, b) => {
            let carre = if a == 0 || b == 0 {
                0.0
            } else {
                4.0 * (a as f64 + 1.0) * (b as f64 + 1.0) * (x.q(a + b) - x.q(a) * x.q(b))
            };
            x.q(a) * twice_b_single(b, theta, x) + x.q(b) * twice_b_single(a, theta, x) + carre
        }
    })
}

/// Monte Carlo difference quotient against the generator value.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorReport {
    pub quotient: f64,
    pub se: f64,
    pub target: f64,
    pub bias_budget: f64,
    pub n: usize,
    /// Replicas whose mass vanished before the requested time; excluded.
    pub lost: usize,
    pub pass: bool,
}

impl GeneratorReport {
    /// `samples` are `q(W(u))` values, `None` for lost replicas.
    pub fn from_samples(
        samples: &[Option<f64>],
        q: SymPoly,
        x: &RankedSimplexPoint,
        theta: f64,
        u: f64,
        bias_budget: f64,
    ) -> Result<Self> {
        let base = q.eval(x);
        let vals: Vec<f64> = samples.iter().flatten().map(|v| (v - base) / u).collect();
        if vals.len() < 2 {
            return invalid("need at least two usable replicas");
        }
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        let target = ekp_generator(q, x, theta)?;
        Ok(Self {
            quotient: mean,
            se,
            target,
            bias_budget,
            n: vals.len(),
            lost: samples.len() - vals.len(),
            pass: (mean - target).abs() <= 3.0 * se + bias_budget,
        })
    }
}

/// One replica: evolve from `x` (type-1 when `theta = 0`, type-0 when
/// `theta = 1/2`), de-Poissonize at `u` and evaluate `q`.
pub fn generator_sample<R: Rng + ?Sized>(
    x: &RankedSimplexPoint,
    q: SymPoly,
    theta: f64,
    u: f64,
    params: &EvolveParams,
    rng: &mut R,
) -> Result<Option<f64>> {
    let mode = if theta == 0.0 {
        Mode::Type1
    } else if theta == 0.5 {
        Mode::Type0
    } else {
        return invalid("pathwise check supports theta in {0, 1/2}");
    };
    if !(u > 0.0 && u.is_finite()) {
        return invalid("u must be positive");
    }
    let blocks: Vec<f64> = x.values.iter().copied().filter(|&v| v > 0.0).collect();
    let beta = IntervalPartition::finite_marked(blocks)?;
    if beta.total_mass() <= 0.0 {
        return invalid("x must have positive mass");
    }
    let levels = uniform_levels(4.0 * u * beta.total_mass(), u / 100.0);
    let trace = evolve(&beta, mode, &levels, params, rng)?;
    let d = depoissonize(&trace, &[u])?;
    // A short trace means the mass grew past the grid or the evolution died out.
    Ok(d.states.first().map(|s| q.eval(&s.ranked())))
}

/// Sequential [`generator_sample`] over `n` replicas.
#[allow(clippy::too_many_arguments)]
pub fn generator_check<R: Rng + ?Sized>(
    x: &RankedSimplexPoint,
    q: SymPoly,
    theta: f64,
    u: f64,
    n: usize,
    bias_budget: f64,
    params: &EvolveParams,
    rng: &mut R,
) -> Result<GeneratorReport> {
    let samples = (0..n).map(|_| generator_sample(x, q, theta, u, params, rng)).collect::<Result<Vec<_>>>()?;
    GeneratorReport::from_samples(&samples, q, x, theta, u, bias_budget)
}
