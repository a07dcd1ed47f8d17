//! Closed-form laws and exact transition-kernel samplers.
//!
//! Nothing here simulates a scaffolding. The type-1 entrance law from one block
//! is a leftmost block `L^y` followed by the jumps of an inverse-Gaussian
//! subordinator run for an exponential local time; kernels are concatenations of
//! these, with an immigration part in front for type 0.

mod entrance;
mod forms;
mod pdip;

pub use entrance::{
    sample_entrance_type1, sample_kernel_type0, sample_kernel_type1, sample_lmb, sample_remainder,
    subordinator_jumps, KernelParams,
};
pub use forms::{
    besq0_density, catalogue, closed_form, len_tail_constant, ln_bessel_i1, lmb_density, lmb_laplace, phi_y,
    pi_y_density, ClosedForm, Kind,
};
pub use pdip::{pd_stick_breaking, sample_pdip, stable_ladder, stable_partition, Pdip};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum KernelError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Partition(#[from] ip_core::IpError),
}

pub type Result<T> = std::result::Result<T, KernelError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(KernelError::InvalidArgument(msg.into()))
}
