//! Correspondence distances.
//!
//! A correspondence pairs blocks `U_1 < ... < U_n` of `beta` with `V_1 < ... < V_n`
//! of `gamma`, order preserved on both sides. Its distortion is the largest of
//!
//! ```text
//! (i)   sup_j |D_beta(U_j) - D_gamma(V_j)|
//! (ii)  |D_beta(inf) - D_gamma(inf)|
//! (iii) sum_j |Leb U_j - Leb V_j| + ||beta|| - sum_j Leb U_j
//! (iv)  sum_j |Leb U_j - Leb V_j| + ||gamma|| - sum_j Leb V_j
//! ```
//!
//! `d_I` minimises all four, `d_H'` only (iii) and (iv). For a fixed bound `r` on
//! (i) the best (iii)/(iv) trade-off is an ordered alignment, solved here by a DP
//! over prefix pairs that keeps the exact Pareto front of the two mass sums. The
//! outer minimisation over `r` only needs the finitely many values `|D - D'|`.

use crate::{IntervalPartition, IpError, Result};

/// The four distortion terms of one correspondence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distortion {
    pub diversity_sup: f64,
    pub diversity_total: f64,
    pub mass_left: f64,
    pub mass_right: f64,
}

impl Distortion {
    pub fn value(&self) -> f64 {
        self.diversity_sup.max(self.diversity_total).max(self.mass_left).max(self.mass_right)
    }

    pub fn hausdorff_value(&self) -> f64 {
        self.mass_left.max(self.mass_right)
    }

    /// Distortion of the correspondence `pairs` (indices into the block lists).
    pub fn of(
        beta: &IntervalPartition,
        gamma: &IntervalPartition,
        pairs: &[(usize, usize)],
    ) -> Result<Self> {
        for w in pairs.windows(2) {
            if !(w[0].0 < w[1].0 && w[0].1 < w[1].1) {
                return Err(IpError::InvalidArgument("pairs must be strictly increasing".into()));
            }
        }
        let (u, v) = (beta.blocks(), gamma.blocks());
        if pairs.iter().any(|&(i, j)| i >= u.len() || j >= v.len()) {
            return Err(IpError::InvalidArgument("pair index out of range".into()));
        }
        let mut a = beta.total_mass();
        let mut b = gamma.total_mass();
        for &(i, j) in pairs {
            let d = (u[i] - v[j]).abs();
            a += d - u[i];
            b += d - v[j];
        }
        let (sup, tot) = match (beta.marks(), gamma.marks()) {
            (Some(mb), Some(mg)) => (
                pairs.iter().map(|&(i, j)| (mb[i] - mg[j]).abs()).fold(0.0, f64::max),
                (beta.total_diversity().unwrap() - gamma.total_diversity().unwrap()).abs(),
            ),
            _ => (0.0, 0.0),
        };
        Ok(Self { diversity_sup: sup, diversity_total: tot, mass_left: a, mass_right: b })
    }
}

/// Keep the Pareto-minimal points, sorted by increasing `a`.
fn prune(front: &mut Vec<(f64, f64)>) {
    front.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(front.len());
    for &p in front.iter() {
        if out.last().map_or(true, |q| p.1 < q.1) {
            out.push(p);
        }
    }
    *front = out;
}

/// Smallest `max(||beta|| + A, ||gamma|| + B)` over correspondences whose pairs all
/// satisfy `allowed(i, j)`, where `A, B` are the summed mass terms.
fn best_mass_distortion(
    beta: &IntervalPartition,
    gamma: &IntervalPartition,
    allowed: impl Fn(usize, usize) -> bool,
) -> f64 {
    let (u, v) = (beta.blocks(), gamma.blocks());
    let (n, m) = (u.len(), v.len());
    let w = m + 1;
    let mut fronts: Vec<Vec<(f64, f64)>> = vec![Vec::new(); (n + 1) * w];
    fronts[0].push((0.0, 0.0));
    for i in 0..=n {
        for j in 0..=m {
            let k = i * w + j;
            if fronts[k].is_empty() {
                continue;
            }
            prune(&mut fronts[k]);
            let cur = std::mem::take(&mut fronts[k]);
            if i < n {
                fronts[k + w].extend_from_slice(&cur);
            }
            if j < m {
                fronts[k + 1].extend_from_slice(&cur);
            }
            if i < n && j < m && allowed(i, j) {
                let d = (u[i] - v[j]).abs();
                let (da, db) = (d - u[i], d - v[j]);
                fronts[k + w + 1].extend(cur.iter().map(|&(a, b)| (a + da, b + db)));
            }
            fronts[k] = cur;
        }
    }
    let (mb, mg) = (beta.total_mass(), gamma.total_mass());
    fronts[n * w + m].iter().map(|&(a, b)| (mb + a).max(mg + b)).fold(f64::INFINITY, f64::min)
}

/// `d_H'`: correspondences charged for unmatched and mismatched mass only.
pub fn distance_d_h_prime(beta: &IntervalPartition, gamma: &IntervalPartition) -> f64 {
    best_mass_distortion(beta, gamma, |_, _| true)
}

/// `d_I`. Both partitions must carry diversity marks.
pub fn distance_d_i(beta: &IntervalPartition, gamma: &IntervalPartition) -> Result<f64> {
    let (mb, mg) = match (beta.marks(), gamma.marks()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(IpError::InvalidArgument("d_I needs diversity marks on both partitions".into())),
    };
    let total_gap = (beta.total_diversity().unwrap() - gamma.total_diversity().unwrap()).abs();

    let mut cands: Vec<f64> = vec![0.0];
    for &x in mb {
        for &y in mg {
            cands.push((x - y).abs());
        }
    }
    cands.sort_by(f64::total_cmp);
    cands.dedup();

    let f = |r: f64| best_mass_distortion(beta, gamma, |i, j| (mb[i] - mg[j]).abs() <= r);
    // f is nonincreasing along `cands`; find the first index where f(r) <= r.
    let (mut lo, mut hi) = (0usize, cands.len());
    let mut f_cache: Vec<Option<f64>> = vec![None; cands.len()];
    let eval = |k: usize, cache: &mut Vec<Option<f64>>| -> f64 {
        if let Some(x) = cache[k] {
            return x;
        }
        let x = f(cands[k]);
        cache[k] = Some(x);
        x
    };
    while lo < hi {
        let mid = (lo + hi) / 2;
        if eval(mid, &mut f_cache) <= cands[mid] {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let best = if lo == cands.len() {
        eval(cands.len() - 1, &mut f_cache)
    } else if lo == 0 {
        cands[0].max(eval(0, &mut f_cache))
    } else {
        cands[lo].min(eval(lo - 1, &mut f_cache))
    };
    Ok(best.max(total_gap))
}

/// Closed pieces of `[0, M] \ union of blocks`, blocks laid out from 0 and dust at the right.
fn complement(p: &IntervalPartition) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0)];
    let mut acc = 0.0;
    for &b in p.blocks() {
        acc += b;
        out.push((acc, acc));
    }
    let m = p.total_mass();
    if m > acc {
        out.pop();
        out.push((acc, m));
    }
    out
}

fn dist_to(set: &[(f64, f64)], x: f64) -> f64 {
    let k = set.partition_point(|s| s.1 < x);
    let mut d = f64::INFINITY;
    if k < set.len() {
        d = d.min((set[k].0 - x).max(0.0));
    }
    if k > 0 {
        d = d.min(x - set[k - 1].1);
    }
    d
}

fn directed(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut worst: f64 = 0.0;
    for &(s, e) in a {
        worst = worst.max(dist_to(b, s)).max(dist_to(b, e));
        if e > s {
            for w in b.windows(2) {
                let mid = 0.5 * (w[0].1 + w[1].0);
                if mid > s && mid < e {
                    worst = worst.max(dist_to(b, mid));
                }
            }
        }
    }
    worst
}

/// Hausdorff distance between the complements of the two partitions.
pub fn distance_d_h(beta: &IntervalPartition, gamma: &IntervalPartition) -> f64 {
    let (a, b) = (complement(beta), complement(gamma));
    directed(&a, &b).max(directed(&b, &a))
}
