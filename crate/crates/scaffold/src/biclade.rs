use crate::path::Scaffolding;

/// Statistics of one bi-clade about a level `y`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CladeStats {
    /// Mass of the crossing spindle at level `y`.
    pub m0: f64,
    /// Overshoot `X(T) - y` of the crossing jump.
    pub j_plus: f64,
    /// Undershoot `y - X(T-)`.
    pub j_minus: f64,
    /// Height of the clade above `y`.
    pub zeta_plus: f64,
    /// Depth of the anti-clade below `y`.
    pub zeta_minus: f64,
    pub len: f64,
    /// No jump crossed `y` (possible only for incomplete pieces).
    pub degenerate: bool,
}

impl CladeStats {
    pub fn j(&self) -> f64 {
        self.j_plus + self.j_minus
    }
}

/// A piece of the path between consecutive downward passages through `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiClade {
    pub level: f64,
    pub start: f64,
    pub end: f64,
    /// Index of the crossing jump.
    pub crossing: Option<usize>,
    /// False for the pieces before the first and after the last passage.
    pub complete: bool,
    pub stats: CladeStats,
}

impl Scaffolding {
    /// Split the path at its downward passages through `y`.
    ///
    /// The piece before the first passage and the one after the last are returned
    /// with `complete = false`. A path that never passes `y` gives one incomplete
    /// piece.
    pub fn decompose_biclades(&self, y: f64) -> Vec<BiClade> {
        let mut out = Vec::new();
        let mut start = 0.0;
        let mut complete = self.initial == y;
        let mut crossing: Option<usize> = None;
        let mut lo = self.initial.min(y);
        let mut hi = self.initial.max(y);
        let n = self.events.len();
        for k in 0..=n {
            let (t0, x0, _, x1) = self.segment(k);
            if x0 > y && x1 <= y && self.drift < 0.0 {
                let tc = t0 + (y - x0) / self.drift;
                out.push(self.make(y, start, tc, crossing, complete, lo, hi));
                start = tc;
                complete = true;
                crossing = None;
                lo = y;
                hi = y;
            }
            lo = lo.min(x1);
            if k < n {
                let e = &self.events[k];
                lo = lo.min(e.birth);
                if e.birth < y && e.top() > y {
                    crossing = Some(k);
                }
                if crossing.is_some() {
                    hi = hi.max(e.top());
                }
            }
        }
        out.push(self.make(y, start, self.horizon, crossing, false, lo, hi));
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn make(&self, y: f64, start: f64, end: f64, crossing: Option<usize>, complete: bool, lo: f64, hi: f64) -> BiClade {
        let stats = match crossing {
            Some(k) => {
                let e = &self.events[k];
                CladeStats {
                    m0: e.mass_at(self.pool(), y),
                    j_plus: e.top() - y,
                    j_minus: y - e.birth,
                    zeta_plus: hi - y,
                    zeta_minus: y - lo,
                    len: end - start,
                    degenerate: false,
                }
            }
            None => CladeStats { zeta_minus: y - lo, len: end - start, degenerate: true, ..Default::default() },
        };
        BiClade { level: y, start, end, crossing, complete, stats }
    }
}

/// Statistics record of a bi-clade; degenerate pieces report `m0 = 0`.
pub fn clade_stats(b: &BiClade) -> CladeStats {
    b.stats
}
