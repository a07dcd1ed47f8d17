//! The validation suites. Each returns its pass/fail records and any
//! exploratory observations; none of them reads the clock except to report
//! runtime.

mod evolution;
mod limits;
mod metric;
mod processes;

use crate::config::ExperimentConfig;
use crate::stats::StatReport;
use serde::Serialize;
use std::time::Instant;

pub const SUITES: [&str; 10] = [
    "besq",
    "scaffold",
    "clade-stats",
    "kernel-vs-path",
    "total-mass",
    "pseudo-stationarity",
    "stationarity",
    "crp-limit",
    "ekp-generator",
    "metric-axioms",
];

/// A measured quantity with no pass/fail rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observation {
    pub id: String,
    pub value: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub seed: u64,
    pub reports: Vec<StatReport>,
    pub observations: Vec<Observation>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }
}

pub(crate) struct Ctx<'a> {
    pub cfg: &'a ExperimentConfig,
    pub suite: &'static str,
    reports: Vec<StatReport>,
    observations: Vec<Observation>,
}

impl Ctx<'_> {
    pub fn n(&self, default: usize) -> usize {
        self.cfg.replicas.unwrap_or(default)
    }

    pub fn seed(&self) -> u64 {
        self.cfg.seed
    }

    /// Stream label for a sub-experiment of this suite.
    pub fn label(&self, part: &str) -> String {
        format!("{}/{part}", self.suite)
    }

    pub fn report(&mut self, r: StatReport) {
        self.reports.push(r);
    }

    pub fn observe(&mut self, id: impl Into<String>, value: f64, n: usize) {
        self.observations.push(Observation { id: id.into(), value, n });
    }
}

pub fn run_suite(name: &str, cfg: &ExperimentConfig) -> anyhow::Result<SuiteOutcome> {
    let suite = SUITES.iter().copied().find(|s| *s == name).ok_or_else(|| anyhow::anyhow!("unknown suite {name:?}"))?;
    let mut ctx = Ctx { cfg, suite, reports: Vec::new(), observations: Vec::new() };
    let start = Instant::now();
    match suite {
        "besq" => processes::besq(&mut ctx)?,
        "scaffold" => processes::scaffold(&mut ctx)?,
        "clade-stats" => processes::clade_stats(&mut ctx)?,
        "kernel-vs-path" => evolution::kernel_vs_path(&mut ctx)?,
        "total-mass" => evolution::total_mass(&mut ctx)?,
        "pseudo-stationarity" => evolution::pseudo_stationarity(&mut ctx)?,
        "stationarity" => evolution::stationarity(&mut ctx)?,
        "crp-limit" => limits::crp_limit(&mut ctx)?,
        "ekp-generator" => limits::ekp_generator(&mut ctx)?,
        "metric-axioms" => metric::metric_axioms(&mut ctx)?,
        _ => unreachable!(),
    }
    let runtime = start.elapsed().as_secs_f64();
    let Ctx { mut reports, observations, .. } = ctx;
    for r in &mut reports {
        r.suite = suite.to_string();
        r.seed = cfg.seed;
        r.runtime_s = Some(runtime);
    }
    Ok(SuiteOutcome { suite: suite.to_string(), seed: cfg.seed, reports, observations })
}
