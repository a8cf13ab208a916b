//! Machine reports and their text renderings.
//!
//! Both formats print floats with Rust's shortest round-trip representation,
//! so a value read from the text form equals the one in the machine form.

use std::fmt::Write as _;

use lgks_core::criteria::{AuditReport, Evidence};
use lgks_core::superop::SpectrumReport;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::modelfile::Rows;

pub const TOOL: &str = "lgks";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    /// `[re, im]`, sorted by real part, descending.
    pub eigenvalues: Vec<[f64; 2]>,
    pub gap: Option<f64>,
    pub near_kernel: usize,
    pub pure_imaginary: usize,
    pub max_real: f64,
    pub threshold: f64,
}

impl From<&SpectrumReport> for SpectrumSummary {
    fn from(s: &SpectrumReport) -> Self {
        Self {
            eigenvalues: s.eigenvalues.iter().map(|z| [z.re, z.im]).collect(),
            gap: s.gap,
            near_kernel: s.near_kernel,
            pure_imaginary: s.pure_imaginary,
            max_real: s.max_real,
            threshold: s.threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool: String,
    pub version: String,
    pub model_name: Option<String>,
    pub audit: AuditReport,
    pub spectrum: Option<SpectrumSummary>,
    pub spectrum_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyFile {
    pub tool: String,
    pub version: String,
    pub tol: f64,
    pub multiplicity: usize,
    pub gap: Option<f64>,
    pub kernel_singular_value: Option<f64>,
    pub smallest_retained_singular_value: Option<f64>,
    pub extraction_failure: Option<String>,
    pub states: Vec<Rows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveRow {
    pub sample: usize,
    pub t: f64,
    /// Trace-norm distance to the stationary state, when it is unique.
    pub distance: Option<f64>,
    pub trace_residual: f64,
    pub min_eigenvalue: f64,
    /// Diagonal of `ρ(t)`.
    pub populations: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveFile {
    pub tool: String,
    pub version: String,
    pub rho0: String,
    pub multiplicity: usize,
    pub rows: Vec<EvolveRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub tool: String,
    pub version: String,
    pub tol: f64,
    pub spectrum: SpectrumSummary,
}

pub fn machine<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut s = String::new();
    pretty(&v, 0, &mut s);
    s.push('\n');
    s
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_array() && !i.is_object()),
        _ => !v.is_object(),
    }
}

/// Indented JSON that keeps scalar arrays and rows of pairs on one line.
fn pretty(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth + 1);
    let close = "  ".repeat(depth);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                pretty(item, depth + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&close);
            out.push('}');
        }
        Value::Array(items) if !items.is_empty() && !items.iter().all(is_flat) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad);
                pretty(item, depth + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&close);
            out.push(']');
        }
        _ => inline(v, out),
    }
}

fn inline(v: &Value, out: &mut String) {
    match v {
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                inline(item, out);
            }
            out.push(']');
        }
        _ => out.push_str(&v.to_string()),
    }
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_owned(), num)
}

fn complex(z: &[f64; 2]) -> String {
    if z[1] < 0.0 || (z[1] == 0.0 && z[1].is_sign_negative()) {
        format!("{} - {}i", num(z[0]), num(-z[1]))
    } else {
        format!("{} + {}i", num(z[0]), num(z[1]))
    }
}

fn write_rows(out: &mut String, indent: &str, rows: &Rows) {
    for row in rows {
        let cells: Vec<String> = row.iter().map(complex).collect();
        let _ = writeln!(out, "{indent}[{}]", cells.join(", "));
    }
}

fn evidence(out: &mut String, key: &str, v: &Evidence) {
    match v {
        Evidence::Flag(b) => {
            let _ = writeln!(out, "    {key}: {b}");
        }
        Evidence::Count(n) => {
            let _ = writeln!(out, "    {key}: {n}");
        }
        Evidence::Number(x) => {
            let _ = writeln!(out, "    {key}: {}", num(*x));
        }
        Evidence::Text(s) => {
            let _ = writeln!(out, "    {key}: {s}");
        }
        Evidence::Numbers(xs) => {
            let parts: Vec<String> = xs.iter().map(|x| num(*x)).collect();
            let _ = writeln!(out, "    {key}: [{}]", parts.join(", "));
        }
        Evidence::Matrices(ms) => {
            let _ = writeln!(out, "    {key}:");
            for (k, m) in ms.iter().enumerate() {
                let _ = writeln!(out, "      #{}", k + 1);
                write_rows(out, "        ", m);
            }
        }
    }
}

fn spectrum_text(out: &mut String, s: &SpectrumSummary) {
    let _ = writeln!(out, "gap: {}", opt(s.gap));
    let _ = writeln!(out, "max real part: {}", num(s.max_real));
    let _ = writeln!(out, "near-kernel eigenvalues: {}", s.near_kernel);
    let _ = writeln!(out, "pure-imaginary eigenvalues: {}", s.pure_imaginary);
    let _ = writeln!(out, "threshold: {}", num(s.threshold));
    let _ = writeln!(out, "eigenvalues:");
    for z in &s.eigenvalues {
        let _ = writeln!(out, "  {}", complex(z));
    }
}

pub fn audit_text(r: &ReportFile) -> String {
    let a = &r.audit;
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", r.tool, r.version);
    if let Some(n) = &r.model_name {
        let _ = writeln!(out, "model: {n}");
    }
    let layout = a
        .layout
        .as_ref()
        .map(|l| format!(", layout {l:?}"))
        .unwrap_or_default();
    let _ = writeln!(out, "dimension {}, {} channel(s){layout}", a.dim, a.channels);
    let _ = writeln!(out, "tol {}, seed {}, search draws {}", num(a.tol), a.seed, a.draws);
    let _ = writeln!(out);
    for v in &a.verdicts {
        let status = match (v.applicable, v.passed) {
            (false, _) => "not applicable",
            (true, true) => "passed",
            (true, false) => "failed",
        };
        let _ = writeln!(out, "{:<30} {status}", v.criterion.name());
        for (k, e) in &v.evidence {
            evidence(&mut out, k, e);
        }
        for n in &v.notes {
            let _ = writeln!(out, "    note: {n}");
        }
    }
    let _ = writeln!(out);
    match (&a.oracle, &a.oracle_failure) {
        (Some(o), _) => {
            let _ = writeln!(out, "oracle multiplicity: {}", o.multiplicity);
            let _ = writeln!(out, "oracle gap: {}", opt(o.gap));
            let _ = writeln!(
                out,
                "kernel singular value: {}",
                opt(o.kernel_singular_value)
            );
            let _ = writeln!(
                out,
                "smallest retained singular value: {}",
                opt(o.smallest_retained_singular_value)
            );
            if let Some(msg) = &o.extraction_message {
                let _ = writeln!(out, "state extraction failed: {msg}");
            }
            for (k, s) in o.states.iter().enumerate() {
                let _ = writeln!(out, "stationary state #{}:", k + 1);
                write_rows(&mut out, "  ", s);
            }
        }
        (None, Some(msg)) => {
            let _ = writeln!(out, "oracle failed: {msg}");
        }
        (None, None) => {}
    }
    let consistent = match a.consistent {
        Some(true) => "yes",
        Some(false) => "no",
        None => "unknown",
    };
    let _ = writeln!(out, "consistent with oracle: {consistent}");
    for s in &a.inconsistencies {
        let _ = writeln!(out, "  {s}");
    }
    let _ = writeln!(out, "tolerance review: {}", a.tolerance_review);
    for f in &a.failures {
        let _ = writeln!(out, "checker failure: {f}");
    }
    if let Some(s) = &r.spectrum {
        let _ = writeln!(out);
        spectrum_text(&mut out, s);
    }
    if let Some(msg) = &r.spectrum_failure {
        let _ = writeln!(out, "spectrum failed: {msg}");
    }
    out
}

pub fn steady_text(s: &SteadyFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "multiplicity: {}", s.multiplicity);
    let _ = writeln!(out, "gap: {}", opt(s.gap));
    let _ = writeln!(out, "kernel singular value: {}", opt(s.kernel_singular_value));
    let _ = writeln!(
        out,
        "smallest retained singular value: {}",
        opt(s.smallest_retained_singular_value)
    );
    if let Some(msg) = &s.extraction_failure {
        let _ = writeln!(out, "state extraction failed: {msg}");
    }
    for (k, st) in s.states.iter().enumerate() {
        let _ = writeln!(out, "stationary state #{}:", k + 1);
        write_rows(&mut out, "  ", st);
    }
    out
}

pub fn evolve_text(e: &EvolveFile) -> String {
    let mut out = String::new();
    let d = e.rows.first().map_or(0, |r| r.populations.len());
    let mut header = vec![
        "sample".to_owned(),
        "t".to_owned(),
        "distance".to_owned(),
        "trace_residual".to_owned(),
        "min_eigenvalue".to_owned(),
    ];
    header.extend((1..=d).map(|k| format!("p{k}")));
    let _ = writeln!(out, "{}", header.join("\t"));
    for r in &e.rows {
        let mut cells = vec![
            r.sample.to_string(),
            num(r.t),
            opt(r.distance),
            num(r.trace_residual),
            num(r.min_eigenvalue),
        ];
        cells.extend(r.populations.iter().map(|x| num(*x)));
        let _ = writeln!(out, "{}", cells.join("\t"));
    }
    out
}

pub fn spectrum_file_text(s: &SpectrumFile) -> String {
    let mut out = String::new();
    spectrum_text(&mut out, &s.spectrum);
    out
}
