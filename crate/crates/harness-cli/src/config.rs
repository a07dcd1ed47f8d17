//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # comment
//! suite = total-mass
//! mode = type1
//! initial = 0.5,0.25,0.25     # or pdip-zero, pdip-half, exp-pdip:1.0
//! levels = 0.25,0.5
//! replicas = 2000
//! seed = 42
//! trunc_z = 1e-4
//! ```

use kernel_lab::Pdip;
use skewer_evolve::Mode;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("line {0}: expected key = value")]
    Syntax(usize),
    #[error("line {0}: unknown key {1:?}")]
    UnknownKey(usize, String),
    #[error("line {0}: bad value {2:?} for {1}")]
    BadValue(usize, String, String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Starting partition of an evolution.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    Blocks(Vec<f64>),
    Pdip(Pdip),
    /// `Exp(rho)`-scaled `PDIP(1/2, 0)`.
    ExpPdip(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub suite: Option<String>,
    pub mode: Mode,
    pub initial: InitialSpec,
    pub levels: Vec<f64>,
    /// Overrides each suite's default sample size.
    pub replicas: Option<usize>,
    pub seed: u64,
    pub trunc_z: f64,
    /// Euler step for BESQ(-1).
    pub delta: f64,
    /// Jump cutoff of subordinator samplers.
    pub eps: f64,
    pub mass_floor: f64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            suite: None,
            mode: Mode::Type1,
            initial: InitialSpec::Blocks(vec![1.0]),
            levels: vec![0.25, 0.5],
            replicas: None,
            seed: 0,
            trunc_z: 1e-4,
            delta: 1e-4,
            eps: 1e-7,
            mass_floor: 1e-9,
            threads: None,
            out: None,
        }
    }
}

fn list(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse().ok()).collect()
}

pub fn parse_mode(s: &str) -> Option<Mode> {
    match s {
        "type1" | "1" => Some(Mode::Type1),
        "type0" | "0" => Some(Mode::Type0),
        _ => None,
    }
}

pub fn parse_initial(s: &str) -> Option<InitialSpec> {
    match s {
        "pdip-zero" => Some(InitialSpec::Pdip(Pdip::Zero)),
        "pdip-half" => Some(InitialSpec::Pdip(Pdip::Half)),
        _ => match s.strip_prefix("exp-pdip:") {
            Some(r) => r.parse().ok().map(InitialSpec::ExpPdip),
            None => list(s).map(InitialSpec::Blocks),
        },
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut c = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax(i + 1))?;
            c.set(k.trim(), v.trim()).map_err(|e| match e {
                ConfigError::BadValue(_, k, v) => ConfigError::BadValue(i + 1, k, v),
                ConfigError::UnknownKey(_, k) => ConfigError::UnknownKey(i + 1, k),
                e => e,
            })?;
        }
        c.validate()?;
        Ok(c)
    }

    /// Set one key; line numbers in errors are 0.
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), ConfigError> {
        let bad = || ConfigError::BadValue(0, key.into(), v.into());
        fn num<T: std::str::FromStr>(v: &str, bad: impl Fn() -> ConfigError) -> Result<T, ConfigError> {
            v.parse().map_err(|_| bad())
        }
        match key {
            "suite" => self.suite = Some(v.to_string()),
            "mode" => self.mode = parse_mode(v).ok_or_else(bad)?,
            "initial" => self.initial = parse_initial(v).ok_or_else(bad)?,
            "levels" => self.levels = list(v).ok_or_else(bad)?,
            "replicas" => self.replicas = Some(num(v, bad)?),
            "seed" => self.seed = num(v, bad)?,
            "trunc_z" => self.trunc_z = num(v, bad)?,
            "delta" => self.delta = num(v, bad)?,
            "eps" => self.eps = num(v, bad)?,
            "mass_floor" => self.mass_floor = num(v, bad)?,
            "threads" => self.threads = Some(num(v, bad)?),
            "out" => self.out = Some(PathBuf::from(v)),
            _ => return Err(ConfigError::UnknownKey(0, key.into())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: &str| Err(ConfigError::Invalid(m.into()));
        if self.replicas == Some(0) {
            return fail("replicas must be >= 1");
        }
        if self.levels.is_empty() || self.levels.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return fail("levels must be finite and >= 0");
        }
        if self.levels.windows(2).any(|w| !(w[1] > w[0])) {
            return fail("levels must be strictly increasing");
        }
        for (name, v) in [("trunc_z", self.trunc_z), ("delta", self.delta), ("eps", self.eps)] {
            if !(v > 0.0 && v.is_finite()) {
                return fail(&format!("{name} must be positive"));
            }
        }
        if !(self.mass_floor >= 0.0) {
            return fail("mass_floor must be >= 0");
        }
        match &self.initial {
            InitialSpec::Blocks(b) if b.iter().any(|x| !(*x > 0.0 && x.is_finite())) => {
                fail("initial blocks must be positive")
            }
            InitialSpec::ExpPdip(r) if !(*r > 0.0 && r.is_finite()) => fail("exp-pdip rate must be positive"),
            _ => Ok(()),
        }?;
        if self.threads == Some(0) {
            return fail("threads must be >= 1");
        }
        if let Some(s) = &self.suite {
            if !crate::suites::SUITES.contains(&s.as_str()) {
                return fail(&format!("unknown suite {s:?}"));
            }
        }
        Ok(())
    }

    pub fn evolve_params(&self) -> skewer_evolve::EvolveParams {
        skewer_evolve::EvolveParams { trunc_z: self.trunc_z, mass_floor: self.mass_floor, ..Default::default() }
    }

    pub fn kernel_params(&self) -> kernel_lab::KernelParams {
        kernel_lab::KernelParams { eps: self.eps }
    }
}
