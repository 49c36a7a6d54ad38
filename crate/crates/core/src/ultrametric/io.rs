use std::io::Read;
use std::str::FromStr;

use num_rational::Rational64;
use serde_json::{json, Value};

use super::{validate_ultra, FiniteUltra, UltraError};

fn parse_rational(s: &str) -> Result<Rational64, UltraError> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) {
        return Err(UltraError::Parse(format!("{s}: distances must be exact p/q rationals")));
    }
    Rational64::from_str(s).map_err(|e| UltraError::Parse(format!("{s}: {e}")))
}

/// A distance matrix in CSV: a header row of labels, then one row per point.
/// A leading label column is accepted and ignored.
pub fn read_csv<R: Read>(input: R) -> Result<FiniteUltra, UltraError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let mut labels: Vec<String> =
        rdr.headers().map_err(|e| UltraError::Parse(e.to_string()))?.iter().map(str::to_string).collect();
    if labels.first().is_some_and(|l| l.is_empty()) {
        labels.remove(0);
    }
    let n = labels.len();
    let mut rows = Vec::with_capacity(n);
    for rec in rdr.records() {
        let rec = rec.map_err(|e| UltraError::Parse(e.to_string()))?;
        let cells: Vec<&str> = rec.iter().collect();
        let cells = if cells.len() == n + 1 { &cells[1..] } else { &cells[..] };
        rows.push(cells.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>, _>>()?);
    }
    validate_ultra(labels, rows)
}

fn cell(v: &Value) -> Result<Rational64, UltraError> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational64::from_integer(n.as_i64().unwrap())),
        other => Err(UltraError::Parse(format!("{other}: distances must be integers or \"p/q\" strings"))),
    }
}

/// `{"points": [...], "dist": [[...], ...]}` with entries `"p/q"` or integers.
pub fn read_json(text: &str) -> Result<FiniteUltra, UltraError> {
    let v: Value = serde_json::from_str(text).map_err(|e| UltraError::Parse(e.to_string()))?;
    let points = v["points"].as_array().ok_or_else(|| UltraError::Parse("missing points".into()))?;
    let labels = points
        .iter()
        .map(|p| p.as_str().map(str::to_string).ok_or_else(|| UltraError::Parse(format!("bad label {p}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = v["dist"].as_array().ok_or_else(|| UltraError::Parse("missing dist".into()))?;
    let dist = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| UltraError::Parse("dist rows must be arrays".into()))?
                .iter()
                .map(cell)
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    validate_ultra(labels, dist)
}

pub fn to_json(m: &FiniteUltra) -> Value {
    let dist: Vec<Vec<String>> = m.matrix().iter().map(|r| r.iter().map(|d| d.to_string()).collect()).collect();
    json!({ "points": m.labels(), "dist": dist })
}
