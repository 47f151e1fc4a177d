//! State files and full-precision JSON output.
//!
//! A state file is a JSON object
//! `{"dim": 4, "rho": [[[re, im], ...], ...], "label": "..."}` with rows in
//! the basis order `|00>, |01>, |10>, |11>`. Every float is written with 17
//! significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::linalg::ComplexMatrix;
use crate::state::DensityMatrix;

#[derive(Debug, Error)]
pub enum StateFileError {
    #[error("cannot access state file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed state file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("declared dim {declared} but rho has {rows} rows")]
    DimMismatch { declared: usize, rows: usize },
    #[error("invalid state: {0}")]
    State(#[from] crate::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub rho: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix, label: Option<String>) -> Self {
        let rows = rho
            .matrix()
            .rows()
            .into_iter()
            .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
            .collect();
        Self {
            dim: rho.dim(),
            rho: rows,
            label,
        }
    }

    /// Validates the matrix; errors name the violated invariant.
    pub fn to_density(&self) -> Result<DensityMatrix, StateFileError> {
        if self.rho.len() != self.dim {
            return Err(StateFileError::DimMismatch {
                declared: self.dim,
                rows: self.rho.len(),
            });
        }
        let rows: Vec<Vec<Complex64>> = self
            .rho
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        Ok(DensityMatrix::new(ComplexMatrix::from_rows(&rows)?)?)
    }

    pub fn parse(text: &str) -> Result<Self, StateFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        to_json_17(&serde_json::to_value(self).expect("state file is plain data"))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, StateFileError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), StateFileError> {
        Ok(fs::write(path, self.to_json())?)
    }
}

/// Little-endian `(re, im)` pairs of every entry, row-major. Two states have
/// equal bytes iff their stored matrices are bitwise equal.
pub fn canonical_bytes(rho: &DensityMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 * rho.dim() * rho.dim());
    for z in rho.matrix().entries() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

/// `x` in scientific notation with 17 significant digits. Non-finite values
/// become `null` so the output stays valid JSON.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_owned()
    }
}

/// Pretty-prints `value` with two-space indentation, writing floats through
/// [`format_f64`] and integers verbatim. Object keys keep insertion order.
pub fn to_json_17(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    match value {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&value.to_string()),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => write!(out, "{i}").unwrap(),
            (_, Some(u)) => write!(out, "{u}").unwrap(),
            _ => out.push_str(&format_f64(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::Array(items) if items.iter().all(|v| !v.is_array() && !v.is_object()) => {
            // leaf arrays (vectors, complex pairs) stay on one line
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, depth + 1);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                out.push_str(if k > 0 { ",\n" } else { "\n" });
                indent(out, depth + 1);
                write_value(out, item, depth + 1);
            }
            out.push('\n');
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push('{');
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(if k > 0 { ",\n" } else { "\n" });
                indent(out, depth + 1);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, depth + 1);
            }
            out.push('\n');
            indent(out, depth);
            out.push('}');
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}
