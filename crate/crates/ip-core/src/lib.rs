//! Interval partitions of `[0, M]` carrying diversity marks.
//!
//! A partition is stored as its ordered block masses, a total mass that may
//! exceed the sum of the blocks (the excess is dust below resolution) and,
//! optionally, the diversity `D(U)` accumulated to the left of each block.
//!
//! Diversity is the `sqrt(h)`-rate limit
//!
//! ```text
//! D(t) = sqrt(pi) * lim_{h -> 0} sqrt(h) * #{U : Leb(U) > h, U ends before t}
//! ```
//!
//! Three distances are provided: `d_I` (diversity-aware), the Hausdorff
//! distance `d_H` between complements and the correspondence variant `d_H'`.

mod io;
mod metric;
mod partition;

pub use io::{num as fmt_real, parse_json, to_csv, to_json};
pub use metric::{distance_d_h, distance_d_h_prime, distance_d_i, Distortion};
pub use partition::{concatenate, geometric_grid, IntervalPartition, RankedSimplexPoint};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IpError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, IpError>;
