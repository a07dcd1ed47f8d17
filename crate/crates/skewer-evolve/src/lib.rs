//! The skewer map and pathwise type-1 / type-0 evolutions.
//!
//! [`skewer`] reads the blocks at one level off a stored [`scaffold::Scaffolding`].
//! The evolutions never store their scaffolding: levels are fixed in advance and
//! each spindle is evaluated at the levels it straddles as soon as it is drawn.
//! Excursions above the highest level cannot reach any requested level, so the
//! path is moved straight back down to that level when one starts.

mod build;
mod skewer;
mod trace;

pub use build::{build_type0, build_type1, immigration, single_clade, Clade};
pub use skewer::skewer;
pub use trace::{evolve, EvolutionTrace, Mode};

use besq::SpindlePool;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum EvolveError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Partition(#[from] ip_core::IpError),
    #[error(transparent)]
    Spindle(#[from] besq::BesqError),
}

pub type Result<T> = std::result::Result<T, EvolveError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(EvolveError::InvalidArgument(msg.into()))
}

#[derive(Debug, Clone, Copy)]
pub struct EvolveParams {
    /// Spindles with lifetime below this are replaced by the compensating drift.
    pub trunc_z: f64,
    /// Blocks lighter than this go to dust.
    pub mass_floor: f64,
    /// Add the expected mass of truncated spindles as dust.
    pub truncated_dust: bool,
    pub pool: &'static SpindlePool,
}

impl Default for EvolveParams {
    fn default() -> Self {
        Self { trunc_z: 1e-4, mass_floor: 1e-9, truncated_dust: true, pool: SpindlePool::global() }
    }
}

/// Expected skewer mass per unit local time carried by spindles shorter than `z`.
///
/// Per unit local time, spindles of lifetime in `dx` cross a level at rate
/// `x Pi(dx)` and are cut at a uniform offset, where the mean value of a
/// unit-lifetime spindle is `5/6`.
pub fn truncated_mass_rate(z: f64) -> f64 {
    let c = 3.0 / (2.0 * std::f64::consts::PI * std::f64::consts::SQRT_2);
    5.0 * c / 3.0 * z.sqrt()
}
