use ip_core::IntervalPartition;
use scaffold::Scaffolding;

/// Blocks of the spindles alive at level `y`, in time order.
///
/// Marks are the local time at `y` before each block: every downward passage
/// through `y` adds `1 / |drift|`. A path without drift gives an unmarked result.
pub fn skewer(s: &Scaffolding, y: f64) -> IntervalPartition {
    let pool = s.pool();
    let unit = if s.drift < 0.0 { 1.0 / -s.drift } else { 0.0 };
    let mut passages = 0u64;
    let mut x = s.initial;
    let mut t = 0.0;
    let (mut blocks, mut marks) = (Vec::new(), Vec::new());
    for e in &s.events {
        let x1 = x + s.drift * (e.time - t);
        if x >= y && y > x1 {
            passages += 1;
        }
        if e.birth < y && y < e.top() {
            let m = e.mass_at(pool, y);
            if m > 0.0 {
                blocks.push(m);
                marks.push(passages as f64 * unit);
            }
        }
        x = e.top();
        t = e.time;
    }
    if x >= y && y > x + s.drift * (s.horizon - t) {
        passages += 1;
    }
    let total: f64 = blocks.iter().sum();
    if unit == 0.0 {
        return IntervalPartition::from_blocks(blocks).expect("positive masses");
    }
    IntervalPartition::with_marks(blocks, total, marks, passages as f64 * unit).expect("marks increase")
}
