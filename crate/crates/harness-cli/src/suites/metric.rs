use super::Ctx;
use crate::stats::{StatReport, Statistic};
use ip_core::{distance_d_h, distance_d_h_prime, distance_d_i, Distortion, IntervalPartition};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Every order-preserving partial matching of `n` and `m` blocks.
fn correspondences(n: usize, m: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(i: usize, j: usize, n: usize, m: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        out.push(cur.clone());
        for a in i..n {
            for b in j..m {
                cur.push((a, b));
                rec(a + 1, b + 1, n, m, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, 0, n, m, &mut Vec::new(), &mut out);
    out
}

fn brute_d_i(b: &IntervalPartition, g: &IntervalPartition) -> anyhow::Result<f64> {
    let mut best = f64::INFINITY;
    for c in correspondences(b.len(), g.len()) {
        best = best.min(Distortion::of(b, g, &c)?.value());
    }
    Ok(best)
}

/// Random marked partition with up to `max_blocks` blocks; some marks repeat.
fn random_partition(max_blocks: usize, r: &mut ChaCha8Rng) -> anyhow::Result<IntervalPartition> {
    let k = r.random_range(0..=max_blocks);
    let blocks: Vec<f64> = (0..k).map(|_| r.random_range(0.01..2.0)).collect();
    let mut d = 0.0;
    let mut marks = Vec::with_capacity(k);
    for _ in 0..k {
        if r.random::<f64>() < 0.7 {
            d += r.random::<f64>();
        }
        marks.push(d);
    }
    let total_div = d + r.random::<f64>();
    let total: f64 = blocks.iter().sum();
    Ok(IntervalPartition::with_marks(blocks, total, marks, total_div)?)
}

const TOL: f64 = 1e-9;

pub fn metric_axioms(ctx: &mut Ctx) -> anyhow::Result<()> {
    let pairs = ctx.n(200);
    let triples = ctx.n(1_000);
    let mut r = crate::rng::substream(ctx.seed(), &ctx.label("pairs"), 0);
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let (b, g) = (random_partition(6, &mut r)?, random_partition(6, &mut r)?);
        worst = worst.max((distance_d_i(&b, &g)? - brute_d_i(&b, &g)?).abs());
    }
    ctx.report(StatReport::new("dp-vs-enumeration", Statistic::AbsError, worst, TOL, pairs));
    let mut r = crate::rng::substream(ctx.seed(), &ctx.label("triples"), 0);
    let (mut axioms, mut below, mut scaling): (f64, f64, f64) = (0.0, 0.0, 0.0);
    type Dist = fn(&IntervalPartition, &IntervalPartition) -> f64;
    let dists: [Dist; 3] = [|x, y| distance_d_i(x, y).unwrap(), distance_d_h_prime, distance_d_h];
    for _ in 0..triples {
        let (a, b, c) = (random_partition(5, &mut r)?, random_partition(5, &mut r)?, random_partition(5, &mut r)?);
        for d in dists {
            axioms = axioms.max(d(&a, &a)).max((d(&a, &b) - d(&b, &a)).abs());
            axioms = axioms.max(d(&a, &c) - d(&a, &b) - d(&b, &c));
        }
        below = below.max(distance_d_h_prime(&a, &b) - distance_d_i(&a, &b)?);
        let s: f64 = r.random_range(0.05..20.0);
        let d = distance_d_i(&a, &b)?;
        let ds = distance_d_i(&a.scale(s)?, &b.scale(s)?)?;
        let (lo, hi) = (s.min(s.sqrt()), s.max(s.sqrt()));
        scaling = scaling.max((lo * d - ds) / (1.0 + ds)).max((ds - hi * d) / (1.0 + ds));
    }
    ctx.report(StatReport::new("metric-axioms", Statistic::AbsError, axioms.max(0.0), TOL, triples));
    ctx.report(StatReport::new("d-h-prime-below-d-i", Statistic::AbsError, below.max(0.0), TOL, triples));
    ctx.report(StatReport::new("scaling-bounds", Statistic::AbsError, scaling.max(0.0), TOL, triples));
    Ok(())
}
