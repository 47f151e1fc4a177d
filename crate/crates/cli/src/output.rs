//! Text, JSON and CSV rendering of serializable documents.
//!
//! All three formats print floats through the same 17-digit formatter, so a
//! value read back from any of them is bitwise identical.

use clap::ValueEnum;
use corrcoh::io::{format_f64, to_json_17};
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn render<T: Serialize>(docs: &[T], format: Format) -> Result<String, CliError> {
    let values: Vec<Value> = docs
        .iter()
        .map(|d| serde_json::to_value(d).map_err(|e| CliError::Invalid(e.to_string())))
        .collect::<Result<_, _>>()?;
    match format {
        Format::Json => Ok(match values.as_slice() {
            [single] => to_json_17(single),
            _ => to_json_17(&Value::Array(values)),
        }),
        Format::Csv => to_csv(&values),
        Format::Text => Ok(to_text(&values)),
    }
}

/// Dotted leaf paths with their rendered values, in document order.
/// Array elements are addressed by index.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk(value, String::new(), &mut out);
    out
}

fn walk(value: &Value, path: String, out: &mut Vec<(String, String)>) {
    let child = |key: &str| {
        if path.is_empty() {
            key.to_owned()
        } else {
            format!("{path}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                walk(v, child(k), out);
            }
        }
        Value::Array(items) => {
            for (k, v) in items.iter().enumerate() {
                walk(v, child(&k.to_string()), out);
            }
        }
        leaf => out.push((path, scalar(leaf))),
    }
}

fn scalar(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.to_string(),
            (_, Some(u)) => u.to_string(),
            _ => format_f64(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::Array(_) | Value::Object(_) => unreachable!("containers are walked"),
    }
}

/// One row per document under a mandatory header. Every document must have
/// the same leaf paths.
fn to_csv(values: &[Value]) -> Result<String, CliError> {
    let rows: Vec<Vec<(String, String)>> = values.iter().map(flatten).collect();
    let header: Vec<&str> = rows.first().map_or_else(Vec::new, |r| r.iter().map(|(k, _)| k.as_str()).collect());
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| CliError::Invalid(e.to_string());
    w.write_record(&header).map_err(io_err)?;
    for row in &rows {
        if row.len() != header.len() || row.iter().zip(&header).any(|((k, _), h)| k != h) {
            return Err(CliError::Invalid(
                "csv rows need identical columns; pass the same targets for every state".into(),
            ));
        }
        w.write_record(row.iter().map(|(_, v)| v)).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

fn to_text(values: &[Value]) -> String {
    let mut out = String::new();
    for (k, value) in values.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        let rows = flatten(value);
        let width = rows.iter().map(|(p, _)| p.len()).max().unwrap_or(0);
        for (path, v) in rows {
            out.push_str(&format!("{path:<width$}  {v}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flatten_paths() {
        let v = json!({"a": {"b": 0.5, "c": [1.0, 2.0]}, "s": "x", "n": null, "f": true});
        let flat = flatten(&v);
        let keys: Vec<&str> = flat.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(keys, ["a.b", "a.c.0", "a.c.1", "s", "n", "f"]);
        assert_eq!(flat[0].1, "5.0000000000000000e-1");
        assert_eq!(flat[4].1, "");
    }

    #[test]
    fn csv_has_header_and_rejects_ragged_rows() {
        let docs = [json!({"x": 0.25, "v": [1]}), json!({"x": 0.5, "v": [2]})];
        let text = render(&docs, Format::Csv).unwrap();
        assert_eq!(text, "x,v.0\n2.5000000000000000e-1,1\n5.0000000000000000e-1,2\n");
        let ragged = [json!({"x": 0.25}), json!({"y": 0.5})];
        assert!(render(&ragged, Format::Csv).is_err());
    }

    #[test]
    fn json_single_document_is_not_wrapped() {
        let text = render(&[json!({"x": 1})], Format::Json).unwrap();
        assert_eq!(text, "{\n  \"x\": 1\n}\n");
    }
}
