//! Seeded experiment runner for the interval-partition crates: configuration,
//! per-replica random streams, statistical tests, the validation suites and
//! the file formats used by the `ipd` command.

pub mod config;
pub mod io;
pub mod rng;
pub mod stats;
pub mod suites;

pub use config::{ExperimentConfig, InitialSpec};
pub use stats::{ks_test, ks_two_sample, laplace_check, z_check, LaplaceScale, StatReport, Statistic};
pub use suites::{run_suite, Observation, SuiteOutcome, SUITES};

use ip_core::IntervalPartition;
use kernel_lab::{sample_pdip, Pdip};
use rand::Rng;
use rand_distr::{Distribution, Exp};

/// Draw a starting partition.
pub fn initial_state<R: Rng + ?Sized>(spec: &InitialSpec, eps: f64, rng: &mut R) -> anyhow::Result<IntervalPartition> {
    Ok(match spec {
        InitialSpec::Blocks(b) => IntervalPartition::finite_marked(b.clone())?,
        InitialSpec::Pdip(v) => sample_pdip(*v, eps, rng)?,
        InitialSpec::ExpPdip(rho) => {
            let b: f64 = Exp::new(*rho)?.sample(rng);
            sample_pdip(Pdip::Zero, eps, rng)?.scale(b)?
        }
    })
}

/// Run suites in order, each under `cfg` with its own seed-derived streams.
pub fn run_suites(names: &[String], cfg: &ExperimentConfig) -> anyhow::Result<Vec<SuiteOutcome>> {
    names.iter().map(|s| run_suite(s, cfg)).collect()
}
