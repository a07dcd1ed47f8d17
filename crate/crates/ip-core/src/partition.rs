use crate::{IpError, Result};

/// Relative slack allowed when checking `sum(blocks) <= total_mass`.
const MASS_SLACK: f64 = 1e-9;

/// Ordered block masses with optional diversity marks and dust.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalPartition {
    blocks: Vec<f64>,
    total_mass: f64,
    marks: Option<Vec<f64>>,
    total_diversity: Option<f64>,
}

/// Decreasing order statistics of a partition's masses, divided by its total.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedSimplexPoint {
    pub values: Vec<f64>,
}

impl RankedSimplexPoint {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(IpError::InvalidArgument("coordinates must be finite and >= 0".into()));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        let s: f64 = values.iter().sum();
        if s > 1.0 + 1e-9 {
            return Err(IpError::InvalidArgument(format!("coordinates sum to {s} > 1")));
        }
        Ok(Self { values })
    }

    /// `i`-th largest coordinate (0-based), zero past the end.
    pub fn get(&self, i: usize) -> f64 {
        self.values.get(i).copied().unwrap_or(0.0)
    }

    /// `q_k(x) = sum x_i^(k+1)`, with `q_0 = 1`.
    pub fn q(&self, k: u32) -> f64 {
        if k == 0 {
            return 1.0;
        }
        self.values.iter().map(|x| x.powi(k as i32 + 1)).sum()
    }
}

fn check_mass(m: f64, what: &str) -> Result<()> {
    if m.is_finite() && m > 0.0 {
        Ok(())
    } else {
        Err(IpError::InvalidArgument(format!("{what} must be finite and > 0, got {m}")))
    }
}

impl IntervalPartition {
    pub fn empty() -> Self {
        Self { blocks: Vec::new(), total_mass: 0.0, marks: None, total_diversity: None }
    }

    /// Unmarked partition without dust.
    pub fn from_blocks(blocks: Vec<f64>) -> Result<Self> {
        let total: f64 = blocks.iter().sum();
        Self::with_dust(blocks, total)
    }

    /// Unmarked partition whose total mass may exceed the block sum.
    pub fn with_dust(blocks: Vec<f64>, total_mass: f64) -> Result<Self> {
        for &b in &blocks {
            check_mass(b, "block mass")?;
        }
        let s: f64 = blocks.iter().sum();
        if !(total_mass.is_finite() && total_mass >= 0.0) || s > total_mass * (1.0 + MASS_SLACK) + 1e-300 {
            return Err(IpError::InvalidArgument(format!(
                "total mass {total_mass} below block sum {s}"
            )));
        }
        Ok(Self { blocks, total_mass: total_mass.max(s), marks: None, total_diversity: None })
    }

    /// Marked partition: `marks[i]` is the diversity to the left of block `i`.
    pub fn with_marks(
        blocks: Vec<f64>,
        total_mass: f64,
        marks: Vec<f64>,
        total_diversity: f64,
    ) -> Result<Self> {
        let mut p = Self::with_dust(blocks, total_mass)?;
        if marks.len() != p.blocks.len() {
            return Err(IpError::InvalidArgument(format!(
                "{} marks for {} blocks",
                marks.len(),
                p.blocks.len()
            )));
        }
        if !(total_diversity.is_finite() && total_diversity >= 0.0) {
            return Err(IpError::InvalidArgument("total diversity must be finite and >= 0".into()));
        }
        let mut prev = 0.0;
        for &m in &marks {
            if !(m.is_finite() && m >= prev) {
                return Err(IpError::InvalidArgument("marks must be finite, >= 0 and nondecreasing".into()));
            }
            prev = m;
        }
        if total_diversity < prev {
            return Err(IpError::InvalidArgument(format!(
                "total diversity {total_diversity} below last mark {prev}"
            )));
        }
        p.marks = Some(marks);
        p.total_diversity = Some(total_diversity);
        Ok(p)
    }

    /// Partition of blocks that all sit at diversity zero.
    pub fn finite_marked(blocks: Vec<f64>) -> Result<Self> {
        let n = blocks.len();
        let total: f64 = blocks.iter().sum();
        Self::with_marks(blocks, total, vec![0.0; n], 0.0)
    }

    pub fn blocks(&self) -> &[f64] {
        &self.blocks
    }

    pub fn marks(&self) -> Option<&[f64]> {
        self.marks.as_deref()
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn total_diversity(&self) -> Option<f64> {
        self.total_diversity
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_marked(&self) -> bool {
        self.total_diversity.is_some()
    }

    pub fn block_sum(&self) -> f64 {
        self.blocks.iter().sum()
    }

    pub fn dust(&self) -> f64 {
        (self.total_mass - self.block_sum()).max(0.0)
    }

    /// Left endpoints, with blocks laid out contiguously from 0 and dust at the right end.
    pub fn left_endpoints(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.blocks
            .iter()
            .map(|b| {
                let l = acc;
                acc += b;
                l
            })
            .collect()
    }

    /// First block, if any.
    pub fn leftmost(&self) -> Option<f64> {
        self.blocks.first().copied()
    }

    pub fn count_above(&self, h: f64) -> usize {
        self.blocks.iter().filter(|&&b| b > h).count()
    }

    /// Drop marks, keeping masses.
    pub fn unmarked(&self) -> Self {
        Self { marks: None, total_diversity: None, ..self.clone() }
    }

    /// Every mass times `c`, every diversity times `sqrt(c)`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        check_mass(c, "scale factor")?;
        let r = c.sqrt();
        Ok(Self {
            blocks: self.blocks.iter().map(|b| b * c).collect(),
            total_mass: self.total_mass * c,
            marks: self.marks.as_ref().map(|m| m.iter().map(|d| d * r).collect()),
            total_diversity: self.total_diversity.map(|d| d * r),
        })
    }

    /// Mirror image `t -> M - t`. Each block's new mark is the diversity to its right.
    pub fn reverse(&self) -> Self {
        let blocks: Vec<f64> = self.blocks.iter().rev().copied().collect();
        let marks = match (&self.marks, self.total_diversity) {
            (Some(m), Some(tot)) => Some(m.iter().rev().map(|d| (tot - d).max(0.0)).collect()),
            _ => None,
        };
        Self { blocks, total_mass: self.total_mass, marks, total_diversity: self.total_diversity }
    }

    pub fn normalize(&self) -> Result<Self> {
        if self.total_mass <= 0.0 {
            return Err(IpError::InvalidArgument("cannot normalize a massless partition".into()));
        }
        self.scale(1.0 / self.total_mass)
    }

    /// Masses sorted decreasingly (stable on ties) and divided by the total mass.
    pub fn ranked(&self) -> RankedSimplexPoint {
        if self.total_mass <= 0.0 {
            return RankedSimplexPoint { values: Vec::new() };
        }
        let mut v: Vec<f64> = self.blocks.iter().map(|b| b / self.total_mass).collect();
        // `sort_by` is stable, so equal masses keep their left-to-right order.
        v.sort_by(|a, b| b.total_cmp(a));
        RankedSimplexPoint { values: v }
    }

    /// Extrapolated `sqrt(pi h) * N(h)` as `h -> 0`, where `N(h)` counts blocks of
    /// mass `> h` ending at or before `t`.
    ///
    /// The values on `h_grid` are fitted by least squares against `sqrt(h)` and the
    /// intercept is returned.
    pub fn diversity_estimate(&self, t: f64, h_grid: &[f64]) -> Result<f64> {
        if !(t >= 0.0 && t <= self.total_mass * (1.0 + MASS_SLACK)) {
            return Err(IpError::InvalidArgument(format!(
                "t = {t} outside [0, {}]",
                self.total_mass
            )));
        }
        if h_grid.len() < 3 || h_grid.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(IpError::InvalidArgument("h grid needs >= 3 positive points".into()));
        }
        let mut end = 0.0;
        let mut upto = Vec::new();
        for &b in &self.blocks {
            end += b;
            if end > t * (1.0 + 1e-12) + 1e-300 {
                break;
            }
            upto.push(b);
        }
        let counts: Vec<usize> =
            h_grid.iter().map(|&h| upto.iter().filter(|&&b| b > h).count()).collect();
        Ok(fit_intercept(h_grid, &counts))
    }

    /// Recompute marks from block masses with `diversity_estimate` at each block's
    /// left endpoint.
    pub fn with_estimated_marks(&self, h_grid: &[f64]) -> Result<Self> {
        if h_grid.len() < 3 || h_grid.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(IpError::InvalidArgument("h grid needs >= 3 positive points".into()));
        }
        let mut counts = vec![0usize; h_grid.len()];
        let mut marks = Vec::with_capacity(self.blocks.len());
        let mut prev: f64 = 0.0;
        for &b in &self.blocks {
            prev = prev.max(fit_intercept(h_grid, &counts));
            marks.push(prev);
            for (c, &h) in counts.iter_mut().zip(h_grid) {
                if b > h {
                    *c += 1;
                }
            }
        }
        let tot = prev.max(fit_intercept(h_grid, &counts));
        Self::with_marks(self.blocks.clone(), self.total_mass, marks, tot)
    }
}

/// Intercept of the least-squares line of `sqrt(pi h) N(h)` against `sqrt(h)`.
fn fit_intercept(h_grid: &[f64], counts: &[usize]) -> f64 {
    if counts.iter().all(|&c| c == counts[0]) {
        // N(h) constant on the grid: sqrt(pi h) N is exactly linear through the origin.
        return 0.0;
    }
    let pi = std::f64::consts::PI;
    let xs: Vec<f64> = h_grid.iter().map(|h| h.sqrt()).collect();
    let ys: Vec<f64> =
        h_grid.iter().zip(counts).map(|(h, &c)| (pi * h).sqrt() * c as f64).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (my - sxy / sxx * mx).max(0.0)
}

/// Blocks of each part in order. Marks survive only when every nonempty part is marked;
/// parts without blocks count as diversity zero.
pub fn concatenate(parts: &[IntervalPartition]) -> IntervalPartition {
    let keep_marks = parts.iter().all(|p| p.is_empty() || p.is_marked());
    let mut blocks = Vec::new();
    let mut marks = Vec::new();
    let mut total = 0.0;
    let mut div = 0.0;
    for p in parts {
        blocks.extend_from_slice(&p.blocks);
        total += p.total_mass;
        if keep_marks {
            if let Some(m) = &p.marks {
                marks.extend(m.iter().map(|d| d + div));
            }
            div += p.total_diversity.unwrap_or(0.0);
        }
    }
    let any_marked = parts.iter().any(|p| p.is_marked());
    if keep_marks && any_marked {
        IntervalPartition { blocks, total_mass: total, marks: Some(marks), total_diversity: Some(div) }
    } else {
        IntervalPartition { blocks, total_mass: total, marks: None, total_diversity: None }
    }
}

/// `n` points `h_max, h_max * ratio, ...`.
pub fn geometric_grid(h_max: f64, ratio: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| h_max * ratio.powi(i as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concatenation_offsets_masses() {
        let a = IntervalPartition::from_blocks(vec![1.0]).unwrap();
        let b = IntervalPartition::from_blocks(vec![2.0]).unwrap();
        let c = concatenate(&[a, b]);
        assert_eq!(c.blocks(), &[1.0, 2.0]);
        assert_eq!(c.total_mass(), 3.0);
        assert_eq!(c.left_endpoints(), vec![0.0, 1.0]);
    }

    #[test]
    fn empty_is_identity_for_concatenation() {
        let b = IntervalPartition::with_marks(vec![1.0, 2.0], 3.5, vec![0.0, 0.25], 0.5).unwrap();
        assert_eq!(concatenate(&[b.clone(), IntervalPartition::empty()]), b);
        assert_eq!(concatenate(&[IntervalPartition::empty(), b.clone()]), b);
    }

    #[test]
    fn scaling_by_four_doubles_diversity() {
        let b = IntervalPartition::with_marks(vec![1.0], 1.0, vec![0.3], 0.7).unwrap();
        let s = b.scale(4.0).unwrap();
        assert_eq!(s.blocks(), &[4.0]);
        assert_eq!(s.total_diversity(), Some(1.4));
        assert_eq!(s.marks().unwrap(), &[0.6]);
        assert!(b.scale(0.0).is_err());
        assert!(b.scale(-1.0).is_err());
    }

    #[test]
    fn ranked_sorts_and_normalizes() {
        let b = IntervalPartition::from_blocks(vec![1.0, 3.0, 2.0]).unwrap();
        let r = b.ranked();
        assert_eq!(r.values, vec![0.5, 2.0 / 6.0, 1.0 / 6.0]);
        assert!(IntervalPartition::empty().normalize().is_err());
    }

    #[test]
    fn reversal_flips_order() {
        let b = IntervalPartition::from_blocks(vec![1.0, 2.0]).unwrap();
        assert_eq!(b.reverse().blocks(), &[2.0, 1.0]);
        assert_eq!(b.reverse().reverse(), b);
    }

    #[test]
    fn finite_partitions_have_zero_diversity() {
        let b = IntervalPartition::from_blocks(vec![0.5, 0.25, 0.25]).unwrap();
        let grid = geometric_grid(0.1, 0.5, 12);
        assert_eq!(b.diversity_estimate(1.0, &grid).unwrap(), 0.0);
        assert_eq!(b.diversity_estimate(0.6, &grid).unwrap(), 0.0);
        assert!(b.diversity_estimate(1.5, &grid).is_err());
        assert!(b.diversity_estimate(0.5, &grid[..2]).is_err());
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(IntervalPartition::from_blocks(vec![1.0, 0.0]).is_err());
        assert!(IntervalPartition::with_dust(vec![1.0, 1.0], 1.5).is_err());
        assert!(IntervalPartition::with_marks(vec![1.0, 1.0], 2.0, vec![0.5, 0.2], 1.0).is_err());
        assert!(IntervalPartition::with_marks(vec![1.0], 2.0, vec![0.5], 0.2).is_err());
        let d = IntervalPartition::with_dust(vec![1.0], 1.5).unwrap();
        assert!((d.dust() - 0.5).abs() < 1e-15);
    }
}
