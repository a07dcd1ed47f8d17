use crate::build::{build_type0, build_type1};
use crate::{EvolveParams, Result};
use ip_core::{fmt_real, IntervalPartition};
use rand::Rng;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Type1,
    Type0,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Type1 => "type1",
            Mode::Type0 => "type0",
        }
    }
}

/// States of one evolution at increasing levels.
#[derive(Debug, Clone)]
pub struct EvolutionTrace {
    pub mode: Mode,
    pub levels: Vec<f64>,
    pub states: Vec<IntervalPartition>,
    pub mass_series: Vec<f64>,
    pub trunc_z: f64,
    pub mass_floor: f64,
    pub seed: Option<u64>,
}

impl EvolutionTrace {
    /// Rows `replica,level,block_index,mass,div_mark`.
    pub fn write_csv(&self, replica: usize, out: &mut String, header: bool) {
        if header {
            out.push_str("replica,level,block_index,mass,div_mark\n");
        }
        for (y, p) in self.levels.iter().zip(&self.states) {
            let marks = p.marks();
            for (i, b) in p.blocks().iter().enumerate() {
                let mark = marks.map(|m| fmt_real(m[i])).unwrap_or_default();
                let _ = writeln!(out, "{replica},{},{i},{},{mark}", fmt_real(*y), fmt_real(*b));
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        self.write_csv(0, &mut s, true);
        s
    }

    pub fn manifest(&self) -> serde_json::Value {
        serde_json::json!({
            "mode": self.mode.name(),
            "seed": self.seed,
            "levels": self.levels,
            "trunc_z": self.trunc_z,
            "mass_floor": self.mass_floor,
            "mass_series": self.mass_series,
        })
    }
}

/// Simulate once and skewer at every level.
pub fn evolve<R: Rng + ?Sized>(
    beta: &IntervalPartition,
    mode: Mode,
    levels: &[f64],
    params: &EvolveParams,
    rng: &mut R,
) -> Result<EvolutionTrace> {
    let states = match mode {
        Mode::Type1 => build_type1(beta, levels, params, rng)?,
        Mode::Type0 => build_type0(beta, levels, params, rng)?,
    };
    Ok(EvolutionTrace {
        mode,
        levels: levels.to_vec(),
        mass_series: states.iter().map(IntervalPartition::total_mass).collect(),
        states,
        trunc_z: params.trunc_z,
        mass_floor: params.mass_floor,
        seed: None,
    })
}
