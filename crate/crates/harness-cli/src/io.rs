//! Report and data files.
//!
//! * report JSON: `{"suites": [{suite, seed, reports, observations}], "pass": bool}`
//! * report CSV: `suite,id,statistic,value,threshold,pass,n,seed`
//! * trace CSV: `replica,level,block_index,mass,div_mark`, with a JSON manifest
//!   holding per-replica total masses and diversities at every level
//! * de-Poissonized CSV: `replica,u,rho,block_index,mass,div_mark`

use crate::suites::SuiteOutcome;
use anyhow::{anyhow, bail, Context};
use ip_core::{fmt_real, IntervalPartition};
use skewer_evolve::EvolutionTrace;
use std::collections::BTreeMap;
use std::fmt::Write;

/// Report JSON. Runtimes are left out unless asked for, so that reruns
/// compare byte for byte.
pub fn report_json(outcomes: &[SuiteOutcome], with_runtime: bool) -> String {
    let mut v = serde_json::json!({
        "pass": outcomes.iter().all(SuiteOutcome::passed),
        "suites": outcomes,
    });
    if !with_runtime {
        for s in v["suites"].as_array_mut().unwrap() {
            for r in s["reports"].as_array_mut().unwrap() {
                r.as_object_mut().unwrap().remove("runtime_s");
            }
        }
    }
    serde_json::to_string_pretty(&v).unwrap() + "\n"
}

pub fn report_csv(outcomes: &[SuiteOutcome]) -> String {
    let mut s = String::from("suite,id,statistic,value,threshold,pass,n,seed\n");
    for o in outcomes {
        for r in &o.reports {
            let stat = serde_json::to_value(r.statistic).unwrap();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                r.suite,
                r.id,
                stat.as_str().unwrap(),
                fmt_real(r.value),
                fmt_real(r.threshold),
                r.pass,
                r.n,
                r.seed
            );
        }
    }
    s
}

pub fn traces_csv(traces: &[EvolutionTrace]) -> String {
    let mut s = String::new();
    for (i, t) in traces.iter().enumerate() {
        t.write_csv(i, &mut s, i == 0);
    }
    if s.is_empty() {
        s.push_str("replica,level,block_index,mass,div_mark\n");
    }
    s
}

pub fn traces_manifest(traces: &[EvolutionTrace], seed: u64) -> anyhow::Result<String> {
    let first = traces.first().ok_or_else(|| anyhow!("no traces"))?;
    let v = serde_json::json!({
        "mode": first.mode.name(),
        "seed": seed,
        "replicas": traces.len(),
        "levels": first.levels,
        "trunc_z": first.trunc_z,
        "mass_floor": first.mass_floor,
        "mass_series": traces.iter().map(|t| t.mass_series.clone()).collect::<Vec<_>>(),
        "diversity_series": traces
            .iter()
            .map(|t| t.states.iter().map(|s| s.total_diversity().unwrap_or(0.0)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

fn float_array(v: &serde_json::Value, key: &str) -> anyhow::Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| anyhow!("manifest: {key} is not an array"))?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| anyhow!("manifest: non-numeric entry in {key}")))
        .collect()
}

fn float_rows(v: &serde_json::Value, key: &str) -> anyhow::Result<Vec<Vec<f64>>> {
    let rows = v[key].as_array().ok_or_else(|| anyhow!("manifest: missing {key}"))?;
    rows.iter().map(|r| float_array(r, key)).collect()
}

/// Rebuild traces from the CSV rows and the manifest written by
/// [`traces_csv`] and [`traces_manifest`].
pub fn read_traces(csv_text: &str, manifest: &str) -> anyhow::Result<Vec<EvolutionTrace>> {
    let m: serde_json::Value = serde_json::from_str(manifest).context("manifest is not JSON")?;
    let levels = float_array(&m["levels"], "levels")?;
    let masses = float_rows(&m, "mass_series")?;
    let divs = float_rows(&m, "diversity_series")?;
    let mode = match m["mode"].as_str() {
        Some("type1") => skewer_evolve::Mode::Type1,
        Some("type0") => skewer_evolve::Mode::Type0,
        _ => bail!("manifest: bad mode"),
    };
    let n = masses.len();
    if divs.len() != n || masses.iter().chain(&divs).any(|r| r.len() != levels.len()) {
        bail!("manifest: series do not match the levels");
    }
    // (replica, level index) -> (blocks, marks)
    let mut rows: BTreeMap<(usize, usize), (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    for rec in reader.records() {
        let rec = rec?;
        if rec.len() != 5 {
            bail!("trace CSV: expected 5 columns");
        }
        let replica: usize = rec[0].parse()?;
        let level: f64 = rec[1].parse()?;
        let k = levels
            .iter()
            .position(|l| (l - level).abs() <= 1e-12 * (1.0 + l.abs()))
            .ok_or_else(|| anyhow!("trace CSV: level {level} not in manifest"))?;
        let e = rows.entry((replica, k)).or_default();
        e.0.push(rec[3].parse()?);
        e.1.push(if rec[4].is_empty() { 0.0 } else { rec[4].parse()? });
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut states = Vec::with_capacity(levels.len());
        for k in 0..levels.len() {
            let (blocks, marks) = rows.remove(&(i, k)).unwrap_or_default();
            let total = masses[i][k].max(blocks.iter().sum());
            let div = divs[i][k].max(marks.last().copied().unwrap_or(0.0));
            states.push(IntervalPartition::with_marks(blocks, total, marks, div)?);
        }
        out.push(EvolutionTrace {
            mode,
            levels: levels.clone(),
            mass_series: masses[i].clone(),
            states,
            trunc_z: m["trunc_z"].as_f64().unwrap_or(f64::NAN),
            mass_floor: m["mass_floor"].as_f64().unwrap_or(f64::NAN),
            seed: m["seed"].as_u64(),
        });
    }
    if let Some(((r, _), _)) = rows.into_iter().next() {
        bail!("trace CSV: replica {r} not in manifest");
    }
    Ok(out)
}

pub fn depois_csv(rows: &[(usize, depois::DePoisTrace)]) -> String {
    let mut s = String::from("replica,u,rho,block_index,mass,div_mark\n");
    for (i, d) in rows {
        for ((u, rho), p) in d.u.iter().zip(&d.rho).zip(&d.states) {
            let marks = p.marks();
            for (k, b) in p.blocks().iter().enumerate() {
                let mark = marks.map(|m| fmt_real(m[k])).unwrap_or_default();
                let _ = writeln!(s, "{i},{},{},{k},{},{mark}", fmt_real(*u), fmt_real(*rho), fmt_real(*b));
            }
        }
    }
    s
}

/// Partition CSV rows with a leading replica column.
pub fn partitions_csv(parts: &[IntervalPartition]) -> String {
    let mut s = String::new();
    for (i, p) in parts.iter().enumerate() {
        let body = ip_core::to_csv(p);
        let mut lines = body.lines();
        let header = lines.next().unwrap_or("");
        if i == 0 {
            let _ = writeln!(s, "replica,{header}");
        }
        for l in lines {
            let _ = writeln!(s, "{i},{l}");
        }
    }
    s
}
