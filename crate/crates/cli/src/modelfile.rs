//! JSON model files.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "hamiltonian": [[[0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]],
//!   "channels": [{"rate": 1, "matrix": [[[0, 0], [0, 0]], [[1, 0], [0, 0]]]}],
//!   "layout": [2],
//!   "metadata": {"name": "two-level-t0"}
//! }
//! ```
//!
//! Complex entries are `[re, im]` pairs and matrices are row-major.

use std::collections::BTreeMap;

use lgks_core::{Channel, CompositeLayout, ComplexMatrix, LgksModel, C64};
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Metadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ModelFile {
    pub model: LgksModel,
    pub metadata: Metadata,
}

fn located(at: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{at}: {msg}"))
}

fn number(v: &Value, at: &str) -> Result<f64, CliError> {
    v.as_f64().ok_or_else(|| located(at, "expected a number"))
}

fn complex(v: &Value, at: &str) -> Result<C64, CliError> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(C64::new(
            number(re, &format!("{at}[0]"))?,
            number(im, &format!("{at}[1]"))?,
        )),
        _ => Err(located(at, "expected an [re, im] pair")),
    }
}

fn matrix(v: &Value, d: usize, at: &str) -> Result<ComplexMatrix, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| located(at, "expected an array of rows"))?;
    if rows.len() != d {
        return Err(located(at, format!("expected {d} rows, found {}", rows.len())));
    }
    let mut m = ComplexMatrix::zeros(d, d);
    for (i, row) in rows.iter().enumerate() {
        let row_at = format!("{at}[{i}]");
        let entries = row
            .as_array()
            .ok_or_else(|| located(&row_at, "expected a row array"))?;
        if entries.len() != d {
            return Err(located(
                &row_at,
                format!("expected {d} entries, found {}", entries.len()),
            ));
        }
        for (j, e) in entries.iter().enumerate() {
            m[(i, j)] = complex(e, &format!("{row_at}[{j}]"))?;
        }
    }
    Ok(m)
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, key: &str, at: &str) -> Result<&'a Value, CliError> {
    obj.get(key)
        .ok_or_else(|| located(at, format!("missing field \"{key}\"")))
}

fn optional_string(obj: &serde_json::Map<String, Value>, key: &str) -> Result<Option<String>, CliError> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(located(&format!("metadata.{key}"), "expected a string")),
    }
}

/// Parses and validates; errors name the offending field.
pub fn parse(text: &str, max_dim: usize) -> Result<ModelFile, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| {
        CliError::Input(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    let obj = root
        .as_object()
        .ok_or_else(|| located("document", "expected an object"))?;
    let dim_v = field(obj, "dim", "document")?;
    let dim = dim_v
        .as_u64()
        .filter(|&d| d >= 1)
        .ok_or_else(|| located("dim", "expected a positive integer"))? as usize;
    if dim > max_dim {
        return Err(located(
            "dim",
            format!("dimension {dim} exceeds the cap {max_dim}; raise it with --max-dim"),
        ));
    }
    let hamiltonian = matrix(field(obj, "hamiltonian", "document")?, dim, "hamiltonian")?;
    let chans = field(obj, "channels", "document")?
        .as_array()
        .ok_or_else(|| located("channels", "expected an array"))?;
    let mut channels = Vec::with_capacity(chans.len());
    for (k, ch) in chans.iter().enumerate() {
        let at = format!("channels[{k}]");
        let o = ch
            .as_object()
            .ok_or_else(|| located(&at, "expected an object"))?;
        let rate = number(field(o, "rate", &at)?, &format!("{at}.rate"))?;
        let op = matrix(field(o, "matrix", &at)?, dim, &format!("{at}.matrix"))?;
        channels.push(Channel::new(rate, op));
    }
    let layout = match obj.get("layout") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => {
            let mut dims = Vec::with_capacity(items.len());
            for (k, v) in items.iter().enumerate() {
                let d = v
                    .as_u64()
                    .ok_or_else(|| located(&format!("layout[{k}]"), "expected an integer"))?;
                dims.push(d as usize);
            }
            Some(CompositeLayout::new(dims).map_err(|e| located("layout", e))?)
        }
        Some(_) => return Err(located("layout", "expected an array of factor dimensions")),
    };
    let metadata = match obj.get("metadata") {
        None | Some(Value::Null) => Metadata::default(),
        Some(Value::Object(m)) => Metadata {
            name: optional_string(m, "name")?,
            description: optional_string(m, "description")?,
        },
        Some(_) => return Err(located("metadata", "expected an object")),
    };
    let model = LgksModel::new(hamiltonian, channels, layout).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(ModelFile { model, metadata })
}

pub type Rows = Vec<Vec<[f64; 2]>>;

pub fn rows(m: &ComplexMatrix) -> Rows {
    lgks_core::criteria::to_dense_rows(m)
}

#[derive(Serialize)]
struct ChannelOut {
    rate: f64,
    matrix: Rows,
}

#[derive(Serialize)]
struct ModelOut<'a> {
    dim: usize,
    hamiltonian: Rows,
    channels: Vec<ChannelOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    layout: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    metadata: BTreeMap<&'a str, &'a str>,
}

pub fn emit(file: &ModelFile) -> String {
    let m = &file.model;
    let mut metadata = BTreeMap::new();
    if let Some(n) = &file.metadata.name {
        metadata.insert("name", n.as_str());
    }
    if let Some(d) = &file.metadata.description {
        metadata.insert("description", d.as_str());
    }
    let out = ModelOut {
        dim: m.dim(),
        hamiltonian: rows(m.hamiltonian()),
        channels: m
            .channels()
            .iter()
            .map(|c| ChannelOut {
                rate: c.rate,
                matrix: rows(&c.operator),
            })
            .collect(),
        layout: m.layout().map(|l| l.factor_dims().to_vec()),
        metadata,
    };
    crate::report::machine(&out)
}
