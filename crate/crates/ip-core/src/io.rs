//! CSV and JSON forms of a partition. Every real is printed with 17 significant
//! digits so that a round trip reproduces the same bits.

use crate::{IntervalPartition, IpError, Result};
use serde_json::Value;

/// A real with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rows `index,left,right,mass,div_mark`; `div_mark` is empty when unmarked.
pub fn to_csv(p: &IntervalPartition) -> String {
    let mut s = String::from("index,left,right,mass,div_mark\n");
    let marks = p.marks();
    for (i, (&l, &b)) in p.left_endpoints().iter().zip(p.blocks()).enumerate() {
        let mark = marks.map(|m| num(m[i])).unwrap_or_default();
        s.push_str(&format!("{i},{},{},{},{mark}\n", num(l), num(l + b), num(b)));
    }
    s
}

fn list(xs: &[f64]) -> String {
    let body: Vec<String> = xs.iter().map(|&x| num(x)).collect();
    format!("[{}]", body.join(","))
}

/// `{"blocks":[..],"total_mass":..,"marks":[..]|null,"total_diversity":..|null}`.
pub fn to_json(p: &IntervalPartition) -> String {
    let marks = p.marks().map(list).unwrap_or_else(|| "null".into());
    let div = p.total_diversity().map(num).unwrap_or_else(|| "null".into());
    format!(
        "{{\"blocks\":{},\"total_mass\":{},\"marks\":{},\"total_diversity\":{}}}",
        list(p.blocks()),
        num(p.total_mass()),
        marks,
        div
    )
}

fn floats(v: &Value, key: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| IpError::Parse(format!("`{key}` is not an array")))?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| IpError::Parse(format!("non-number in `{key}`"))))
        .collect()
}

pub fn parse_json(text: &str) -> Result<IntervalPartition> {
    let v: Value = serde_json::from_str(text).map_err(|e| IpError::Parse(e.to_string()))?;
    let blocks = floats(v.get("blocks").unwrap_or(&Value::Null), "blocks")?;
    let total = v
        .get("total_mass")
        .and_then(Value::as_f64)
        .unwrap_or_else(|| blocks.iter().sum());
    match v.get("marks") {
        Some(m) if !m.is_null() => {
            let marks = floats(m, "marks")?;
            let tot = v
                .get("total_diversity")
                .and_then(Value::as_f64)
                .or_else(|| marks.last().copied())
                .unwrap_or(0.0);
            IntervalPartition::with_marks(blocks, total, marks, tot)
        }
        _ => IntervalPartition::with_dust(blocks, total),
    }
}
