//! JSON input schemas and JSON/CSV emission helpers.

use std::path::Path;

use crcoh_core::arith::Rational;
use crcoh_core::cohomology::{GradedDims, SectorInput};
use crcoh_core::geometry::GeometryParams;
use crcoh_core::parabolic::WeightSystem;
use crcoh_core::spectrum::Spectrum;
use serde_json::{json, Map, Value};

use crate::error::CliError;

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: malformed JSON: {e}", path.display())))
}

/// A rational from a JSON integer or a `"p/q"` string.
pub fn parse_rational(v: &Value) -> Result<Rational, CliError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Rational::from)
            .ok_or_else(|| CliError::Validation(format!("{n} is not an integer"))),
        Value::String(s) => s.parse().map_err(|e| CliError::Validation(format!("{e}"))),
        other => Err(CliError::Validation(format!("expected a rational, found {other}"))),
    }
}

pub fn rational_json(q: Rational) -> Value {
    Value::String(q.to_string())
}

/// Integers that fit in 64 bits are numbers; larger ones are decimal strings.
pub fn count_json(k: u128) -> Value {
    match u64::try_from(k) {
        Ok(v) => json!(v),
        Err(_) => Value::String(k.to_string()),
    }
}

pub fn params_json(p: &GeometryParams) -> Value {
    json!({ "r": p.r(), "g": p.g(), "m": p.m(), "d": p.d() })
}

/// `{"exponent": multiplicity}` over the nonzero support, ascending.
pub fn spectrum_json(s: &Spectrum) -> Value {
    let mut map = Map::new();
    for (e, k) in s.support() {
        map.insert(e.to_string(), json!(k));
    }
    Value::Object(map)
}

pub fn table_json(t: &GradedDims) -> Value {
    Value::Array(
        t.iter()
            .map(|(q, k)| Value::Array(vec![rational_json(q), count_json(k)]))
            .collect(),
    )
}

pub fn l_label(l: &[u32]) -> String {
    let parts: Vec<String> = l.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

/// Weight file: `{"weights": [["0", "1/10", "1/5"], ...]}`, one full flag per point.
pub fn parse_weights(v: &Value) -> Result<WeightSystem, CliError> {
    let points = v
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Validation("weights file needs a \"weights\" array".into()))?;
    let mut out = Vec::with_capacity(points.len());
    for point in points {
        let ws = point
            .as_array()
            .ok_or_else(|| CliError::Validation("each point's weights must be an array".into()))?;
        out.push(ws.iter().map(parse_rational).collect::<Result<Vec<_>, _>>()?);
    }
    WeightSystem::full_flags(out).map_err(|e| CliError::Validation(e.to_string()))
}

/// The `"params"` object of a sectors file, if present.
pub fn parse_params(v: &Value) -> Result<Option<(u32, u32, u32, i64)>, CliError> {
    let Some(p) = v.get("params") else {
        return Ok(None);
    };
    let field = |name: &str| {
        p.get(name)
            .and_then(Value::as_i64)
            .ok_or_else(|| CliError::Validation(format!("params.{name} must be an integer")))
    };
    let small = |name: &str| -> Result<u32, CliError> {
        u32::try_from(field(name)?)
            .map_err(|_| CliError::Validation(format!("params.{name} is out of range")))
    };
    Ok(Some((small("r")?, small("g")?, small("m")?, field("d")?)))
}

fn parse_pairs(v: &Value, key: &str) -> Result<Vec<(Rational, u128)>, CliError> {
    let rows = match v.get(key) {
        None => return Ok(Vec::new()),
        Some(rows) => rows
            .as_array()
            .ok_or_else(|| CliError::Validation(format!("{key} must be an array")))?,
    };
    rows.iter()
        .map(|row| {
            let pair = row.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                CliError::Validation(format!("{key} entries must be [degree, dim] pairs"))
            })?;
            let degree = parse_rational(&pair[0])?;
            let dim = pair[1]
                .as_u64()
                .ok_or_else(|| CliError::Validation(format!("{key}: dimension must be a nonnegative integer")))?;
            Ok((degree, dim as u128))
        })
        .collect()
}

/// Sectors file: `{"params": {...}, "untwisted": [[deg, dim]...], "prym_quotient": [...]}`.
pub fn parse_sectors(v: &Value, p: &GeometryParams) -> Result<SectorInput, CliError> {
    let untwisted = parse_pairs(v, "untwisted")?;
    let prym = parse_pairs(v, "prym_quotient")?;
    SectorInput::new(p, untwisted, prym).map_err(|e| CliError::Validation(e.to_string()))
}

/// Renders CSV rows with a header.
pub fn csv_document(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}
