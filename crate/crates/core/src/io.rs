//! Input files and the JSON output encoding.
//!
//! Floats are written with 17 significant digits and exact rationals as
//! `"p/q"` strings, so both round trip losslessly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::surface::{IdealTriangulation, TriangulationSpec};

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn read_json(path: &Path) -> Result<Value> {
    let bytes = read_bytes(path)?;
    serde_json::from_slice(&bytes).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn parse_triangulation(v: &Value) -> Result<IdealTriangulation> {
    let spec: TriangulationSpec = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    IdealTriangulation::from_spec(&spec)
}

pub fn load_triangulation(path: &Path) -> Result<IdealTriangulation> {
    parse_triangulation(&read_json(path)?)
}

/// A JSON number or a rational string, exactly.
pub fn rational_value(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => exact::parse_rational(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(exact::q(i)),
            None => exact::from_f64(n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}")))?),
        },
        other => Err(Error::Parse(format!("expected a number or rational string, got {other}"))),
    }
}

pub fn float_value(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
        _ => rational_value(v).map(|q| exact::to_f64(&q)),
    }
}

fn object<'a>(v: &'a Value, key: &str) -> Option<&'a serde_json::Map<String, Value>> {
    v.get(key).and_then(Value::as_object)
}

fn labelled<T>(map: &serde_json::Map<String, Value>, f: impl Fn(&Value) -> Result<T>) -> Result<BTreeMap<String, T>> {
    map.iter().map(|(k, v)| Ok((k.clone(), f(v)?))).collect()
}

/// Arranges a labelled map in edge-id order.
pub fn per_edge<T: Clone>(t: &IdealTriangulation, map: &BTreeMap<String, T>) -> Result<Vec<T>> {
    for k in map.keys() {
        t.edge_id(k)?;
    }
    t.labels().iter().map(|l| map.get(l).cloned().ok_or_else(|| Error::MissingWeight(l.clone()))).collect()
}

/// `{"weights": {"e1": "3/2", ...}}`; the bare map is accepted too.
pub fn parse_weights(v: &Value) -> Result<BTreeMap<String, Q>> {
    let map = object(v, "weights").or_else(|| v.as_object()).ok_or_else(|| Error::Parse("no weights object".into()))?;
    labelled(map, rational_value)
}

pub fn load_weights(path: &Path) -> Result<BTreeMap<String, Q>> {
    parse_weights(&read_json(path)?)
}

#[derive(Debug, Clone, PartialEq)]
pub enum LambdaInput {
    Lambdas(Vec<f64>),
    /// Exact `log λ` for formal-log mode.
    LogLambdas(Vec<Q>),
}

/// `{"lambdas": {...}}` or `{"log_lambdas": {...}}`.
pub fn parse_lambdas(v: &Value, t: &IdealTriangulation) -> Result<LambdaInput> {
    if let Some(m) = object(v, "log_lambdas") {
        return Ok(LambdaInput::LogLambdas(per_edge(t, &labelled(m, rational_value)?)?));
    }
    if let Some(m) = object(v, "lambdas") {
        return Ok(LambdaInput::Lambdas(per_edge(t, &labelled(m, float_value)?)?));
    }
    Err(Error::Parse("expected `lambdas` or `log_lambdas`".into()))
}

/// `{"shears": {"e1": 0.3, ...}}`.
pub fn parse_shears(v: &Value, t: &IdealTriangulation) -> Result<Vec<f64>> {
    let m = object(v, "shears").ok_or_else(|| Error::Parse("expected `shears`".into()))?;
    per_edge(t, &labelled(m, float_value)?)
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("\"{x}\"")
    }
}

fn write_string(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("strings serialize"));
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&fmt_f64(n.as_f64().unwrap()));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => write_string(out, s),
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) => {
            // short scalar rows stay on one line
            if a.iter().all(|x| !x.is_array() && !x.is_object()) && a.len() <= 16 {
                out.push('[');
                for (i, x) in a.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                pad(out, indent + 2);
                write_value(out, x, indent + 2);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                pad(out, indent + 2);
                write_string(out, k);
                out.push_str(": ");
                write_value(out, x, indent + 2);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

/// Pretty JSON with every float at 17 significant digits.
pub fn to_json_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

pub fn rational_json(x: &Q) -> Value {
    Value::String(exact::fmt_rational(x))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Comma-separated rows with floats at 17 significant digits.
pub fn csv_string(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|&x| fmt_f64(x)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}
