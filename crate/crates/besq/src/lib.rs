//! Squared Bessel processes and the BESQ(-1) excursion measure.
//!
//! Transitions for dimensions 0, 1 and 5 are exact. Dimension -1 has no usable
//! transition density and is stepped with an Euler scheme that refines near 0.
//! Spindles (BESQ(-1) excursions under the excursion measure `nu`) come from two
//! samplers: conditioned on the amplitude exceeding a threshold, and conditioned
//! on the lifetime through a pool of unit-lifetime shapes.

mod nu;
mod pool;
mod spindle;
mod step;

pub use nu::{nu_levy_density, nu_tail_amplitude, nu_tail_lifetime};
pub use pool::{PoolConfig, SpindlePool};
pub use spindle::{
    sample_spindle_given_lifetime, sample_spindle_threshold, Spindle,
};
pub use step::{
    besq5_bridge_to_zero, besq_neg1_lifetime, besq_step, besq_step_with, euler_neg1_absorption,
    BesqPath, EulerConfig,
};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BesqError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, BesqError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(BesqError::InvalidArgument(msg.into()))
}
