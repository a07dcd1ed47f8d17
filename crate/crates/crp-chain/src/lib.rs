//! Ordered Poissonized up-down Chinese restaurant process `CRP(alpha, theta)`.
//!
//! Each table of size `m` gains a customer at rate `m - alpha`, opens a new
//! size-1 table immediately to its right at rate `alpha` and loses a customer
//! at rate `m`; a new leftmost table opens at rate `theta`. Empty tables are
//! removed. The total rate is `2n + theta` for `n` customers.

use ip_core::RankedSimplexPoint;
use rand::Rng;
use rand_distr::{Distribution, Exp};
use std::fmt::Write;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CrpError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, CrpError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(CrpError::InvalidArgument(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrpParams {
    pub alpha: f64,
    pub theta: f64,
}

impl CrpParams {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) || !(theta.is_finite() && theta >= 0.0) {
            return invalid(format!("need alpha in [0,1) and theta >= 0, got ({alpha}, {theta})"));
        }
        Ok(Self { alpha, theta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// A customer joins an existing table.
    Grow,
    /// A customer opens a table right of an existing one.
    Spawn,
    /// A customer leaves; the table goes if it empties.
    Leave,
    /// A customer opens a new leftmost table.
    NewLeft,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::Grow => "grow",
            EventKind::Spawn => "spawn",
            EventKind::Leave => "leave",
            EventKind::NewLeft => "new_left",
        }
    }
}

/// `table` is the index of the table acted on, or of the new table for
/// `Spawn` and `NewLeft`, in the state before any removal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    pub table: usize,
}

/// One table of the splitting tree: who opened it and when it lived.
#[derive(Debug, Clone, PartialEq)]
pub struct Lineage {
    pub id: u64,
    pub parent: Option<u64>,
    pub born: f64,
    pub died: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrpState {
    tables: Vec<u64>,
    ids: Vec<u64>,
    pub params: CrpParams,
    pub clock: f64,
    genealogy: Option<Vec<Lineage>>,
}

impl CrpState {
    pub fn new(tables: Vec<u64>, params: CrpParams) -> Result<Self> {
        if tables.contains(&0) {
            return invalid("table sizes must be >= 1");
        }
        let ids = (0..tables.len() as u64).collect();
        Ok(Self { tables, ids, params, clock: 0.0, genealogy: None })
    }

    /// Start logging the genealogy; current tables become roots born now.
    pub fn record_genealogy(&mut self) {
        let now = self.clock;
        self.genealogy =
            Some(self.ids.iter().map(|&id| Lineage { id, parent: None, born: now, died: None }).collect());
    }

    pub fn genealogy(&self) -> Option<&[Lineage]> {
        self.genealogy.as_deref()
    }

    pub fn tables(&self) -> &[u64] {
        &self.tables
    }

    pub fn customers(&self) -> u64 {
        self.tables.iter().sum()
    }

    pub fn total_rate(&self) -> f64 {
        2.0 * self.customers() as f64 + self.params.theta
    }

    /// Sizes divided by their sum, ranked.
    pub fn ranked(&self) -> RankedSimplexPoint {
        let n = self.customers() as f64;
        let v = if n > 0.0 { self.tables.iter().map(|&m| m as f64 / n).collect() } else { Vec::new() };
        RankedSimplexPoint::new(v).expect("normalized sizes")
    }

    /// `n/k/hash` of the current composition.
    pub fn sizes_digest(&self) -> String {
        // FNV-1a over the sizes, so the digest is stable across platforms.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &m in &self.tables {
            for b in m.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        format!("{}/{}/{h:016x}", self.customers(), self.tables.len())
    }

    fn next_id(&self) -> u64 {
        self.ids.iter().max().map_or(0, |m| m + 1).max(self.genealogy.as_ref().map_or(0, |g| g.len() as u64))
    }

    fn open(&mut self, at: usize, parent: Option<u64>) {
        let id = self.next_id();
        self.tables.insert(at, 1);
        self.ids.insert(at, id);
        if let Some(g) = &mut self.genealogy {
            g.push(Lineage { id, parent, born: self.clock, died: None });
        }
    }

    /// One event. `None` when the state is empty and `theta = 0`.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<Event> {
        let dt = self.holding_time(rng)?;
        self.clock += dt;
        Some(self.transition(rng))
    }

    fn holding_time<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<f64> {
        let total = self.total_rate();
        (total > 0.0).then(|| Exp::new(total).unwrap().sample(rng))
    }

    fn transition<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Event {
        let time = self.clock;
        let mut r = rng.random::<f64>() * self.total_rate();
        if r < self.params.theta {
            self.open(0, None);
            return Event { time, kind: EventKind::NewLeft, table: 0 };
        }
        r -= self.params.theta;
        // Table j carries total rate 2 m_j.
        let mut j = 0;
        while j + 1 < self.tables.len() && r >= 2.0 * self.tables[j] as f64 {
            r -= 2.0 * self.tables[j] as f64;
            j += 1;
        }
        let m = self.tables[j] as f64;
        if r < m {
            self.tables[j] -= 1;
            if self.tables[j] == 0 {
                self.tables.remove(j);
                let id = self.ids.remove(j);
                if let Some(l) = self.genealogy.as_mut().and_then(|g| g.iter_mut().find(|l| l.id == id)) {
                    l.died = Some(time);
                }
            }
            Event { time, kind: EventKind::Leave, table: j }
        } else if r < 2.0 * m - self.params.alpha {
            self.tables[j] += 1;
            Event { time, kind: EventKind::Grow, table: j }
        } else {
            let parent = self.ids[j];
            self.open(j + 1, Some(parent));
            Event { time, kind: EventKind::Spawn, table: j + 1 }
        }
    }

    /// Run until `t_end`, recording events and digests.
    pub fn run<R: Rng + ?Sized>(&mut self, t_end: f64, rng: &mut R) -> Result<Trajectory> {
        let mut traj = Trajectory::default();
        self.run_with(t_end, rng, |ev, s| {
            traj.events.push(ev);
            traj.digests.push(s.sizes_digest());
        })?;
        Ok(traj)
    }

    /// Advance to `t_end` without recording.
    pub fn advance<R: Rng + ?Sized>(&mut self, t_end: f64, rng: &mut R) -> Result<()> {
        self.run_with(t_end, rng, |_, _| {})
    }

    fn run_with<R: Rng + ?Sized>(&mut self, t_end: f64, rng: &mut R, mut f: impl FnMut(Event, &Self)) -> Result<()> {
        if !(t_end >= self.clock) {
            return invalid("t_end must not be before the current clock");
        }
        while let Some(dt) = self.holding_time(rng) {
            if self.clock + dt > t_end {
                break;
            }
            self.clock += dt;
            let ev = self.transition(rng);
            f(ev, self);
        }
        self.clock = t_end;
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub events: Vec<Event>,
    pub digests: Vec<String>,
}

impl Trajectory {
    /// Rows `event_time,event_type,table_index,sizes_digest`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("event_time,event_type,table_index,sizes_digest\n");
        for (e, d) in self.events.iter().zip(&self.digests) {
            let _ = writeln!(s, "{},{},{},{d}", ip_core::fmt_real(e.time), e.kind.name(), e.table);
        }
        s
    }
}

/// Ordered CRP composition of `n` customers, seated one at a time: join a table
/// of size `m` w.p. `(m - alpha)/(i + theta)`, open one right of any given table
/// w.p. `alpha/(i + theta)` or at the far left w.p. `theta/(i + theta)`.
pub fn ordered_crp<R: Rng + ?Sized>(n: u64, params: CrpParams, rng: &mut R) -> Vec<u64> {
    let CrpParams { alpha, theta } = params;
    let mut tables: Vec<u64> = Vec::new();
    for i in 0..n {
        if i == 0 && theta == 0.0 {
            tables.push(1);
            continue;
        }
        let mut r = rng.random::<f64>() * (i as f64 + theta);
        if r < theta {
            tables.insert(0, 1);
            continue;
        }
        r -= theta;
        let mut j = 0;
        while j + 1 < tables.len() && r >= tables[j] as f64 {
            r -= tables[j] as f64;
            j += 1;
        }
        if r < tables[j] as f64 - alpha {
            tables[j] += 1;
        } else {
            tables.insert(j + 1, 1);
        }
    }
    tables
}

/// How [`ranked_sample`] builds its starting composition.
#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    /// Sequential ordered CRP seating of `n` customers.
    OrderedCrp,
    /// One table holding all `n` customers.
    SingleTable,
    Explicit(Vec<u64>),
}

/// Ranked normalized sizes after running from a composition of `n` customers
/// for time `burn`, conditioned on being nonempty (empty runs restart).
pub fn ranked_sample<R: Rng + ?Sized>(
    n: u64,
    params: CrpParams,
    initial: &Initial,
    burn: f64,
    rng: &mut R,
) -> Result<RankedSimplexPoint> {
    if !(burn.is_finite() && burn >= 0.0) {
        return invalid("burn-in must be finite and >= 0");
    }
    if n == 0 && params.theta == 0.0 {
        return invalid("the empty state is absorbing when theta = 0");
    }
    loop {
        let tables = match initial {
            Initial::OrderedCrp => ordered_crp(n, params, rng),
            Initial::SingleTable if n > 0 => vec![n],
            Initial::SingleTable => Vec::new(),
            Initial::Explicit(t) => t.clone(),
        };
        let mut s = CrpState::new(tables, params)?;
        s.advance(burn, rng)?;
        if s.customers() > 0 {
            return Ok(s.ranked());
        }
    }
}
