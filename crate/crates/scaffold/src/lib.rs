//! Scaffolding: a spectrally positive Stable(3/2) path whose jumps carry spindles.
//!
//! Spindles with lifetime below `trunc_z` are dropped and replaced by their
//! compensator, a constant negative drift, so `E X(t) = X(0)`. Between jumps the
//! path is linear, which makes hitting times, local times and excursion
//! decompositions exact for the simulated path.
//!
//! Two ways in:
//!
//! * [`Scaffolding`] stores every jump, for skewers and bi-clade decompositions of
//!   one path.
//! * [`stream`] simulates without storage: increments, hitting times, and i.i.d.
//!   bi-clade cycles at a level, which is what large statistical runs need.

mod biclade;
mod path;
pub mod stream;

pub use biclade::{clade_stats, BiClade, CladeStats};
pub use path::{ScaffoldParams, Scaffolding, SpindleEvent};

use rand::Rng;
use std::f64::consts::{PI, SQRT_2};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ScaffoldError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Spindle(#[from] besq::BesqError),
}

pub type Result<T> = std::result::Result<T, ScaffoldError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(ScaffoldError::InvalidArgument(msg.into()))
}

/// Rate of spindles with lifetime above `z`.
pub fn jump_rate(z: f64) -> f64 {
    z.powf(-1.5) / (PI * SQRT_2)
}

/// Compensating drift for truncation at `z`.
pub fn drift(z: f64) -> f64 {
    -3.0 / (PI * SQRT_2) / z.sqrt()
}

/// A lifetime from the Levy measure restricted to `(z, inf)`.
#[inline]
pub fn sample_jump<R: Rng + ?Sized>(z: f64, rng: &mut R) -> f64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    let c = u.cbrt();
    z / (c * c)
}

/// `psi(lambda) = sqrt(2/pi) lambda^{3/2}`, with `E exp(-lambda X(t)) = exp(t psi(lambda))`.
pub fn laplace_exponent(lambda: f64) -> f64 {
    (2.0 / PI).sqrt() * lambda.powf(1.5)
}

/// `psi^{-1}(theta) = (pi/2)^{1/3} theta^{2/3}`: `E exp(-theta T_{-y}) = exp(-y psi^{-1}(theta))`.
pub fn inverse_laplace_exponent(theta: f64) -> f64 {
    (PI / 2.0).cbrt() * theta.powf(2.0 / 3.0)
}

/// Laplace exponent `3 (theta / 4 pi)^{1/3}` of inverse local time at a level.
pub fn inverse_local_time_exponent(theta: f64) -> f64 {
    3.0 * (theta / (4.0 * PI)).cbrt()
}
