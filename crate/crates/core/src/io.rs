//! File formats: tensors, curvature data, AHZ components, vectors.
//!
//! Complex numbers in files are `[re, im]` pairs; indices are 1-based.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ahz::AHZComponents;
use crate::curvature::CurvatureData;
use crate::error::{Error, Result};
use crate::tensor::{ComplexTensor, ComplexVector};

#[derive(Serialize, Deserialize)]
struct TensorFile {
    m: usize,
    n: usize,
    entries: Vec<(Vec<usize>, f64, f64)>,
}

fn parse_err(context: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{context}: {e}"))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| parse_err(&path.display().to_string(), e))
}

pub fn parse_tensor(text: &str) -> Result<ComplexTensor> {
    let file: TensorFile = serde_json::from_str(text).map_err(|e| parse_err("tensor", e))?;
    ComplexTensor::build(
        file.m,
        file.n,
        file.entries
            .into_iter()
            .map(|(idx, re, im)| (idx, Complex64::new(re, im))),
    )
}

pub fn read_tensor(path: &Path) -> Result<ComplexTensor> {
    parse_tensor(&read_text(path)?)
}

/// Tensor file text, entries in lexicographic index order.
pub fn tensor_to_json(a: &ComplexTensor) -> String {
    let file = TensorFile {
        m: a.order_half(),
        n: a.dim(),
        entries: a
            .entries_one_based()
            .into_iter()
            .map(|(idx, v)| (idx, v.re, v.im))
            .collect(),
    };
    serde_json::to_string(&file).expect("tensor file serializes")
}

fn as_pair(v: &Value, block: &str) -> Result<Complex64> {
    match v {
        Value::Array(items) if items.len() == 2 => match (items[0].as_f64(), items[1].as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(Error::Parse(format!("{block}: expected [re, im] numbers"))),
        },
        Value::Number(x) => Ok(Complex64::new(x.as_f64().unwrap_or(f64::NAN), 0.0)),
        _ => Err(Error::Parse(format!("{block}: expected [re, im], found {v}"))),
    }
}

fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Number(_) => true,
        Value::Array(items) => items.len() == 2 && items.iter().all(Value::is_number),
        _ => false,
    }
}

/// Flattens nested arrays of `[re, im]` leaves in row-major order.
fn flatten_into(v: &Value, block: &str, out: &mut Vec<Complex64>) -> Result<()> {
    if is_leaf(v) {
        out.push(as_pair(v, block)?);
        return Ok(());
    }
    match v {
        Value::Array(items) => items.iter().try_for_each(|item| flatten_into(item, block, out)),
        _ => Err(Error::Parse(format!("{block}: expected an array"))),
    }
}

/// A block given either fully nested or as a flat list of `[re, im]` pairs.
fn complex_block(obj: &Value, key: &'static str, expected: usize, required: bool) -> Result<Vec<Complex64>> {
    let Some(v) = obj.get(key) else {
        return if required {
            Err(Error::Parse(format!("missing field \"{key}\"")))
        } else {
            Ok(vec![Complex64::new(0.0, 0.0); expected])
        };
    };
    let mut out = Vec::new();
    flatten_into(v, key, &mut out)?;
    if out.len() != expected {
        return Err(Error::ShapeMismatch {
            block: key,
            expected,
            found: out.len(),
        });
    }
    Ok(out)
}

fn usize_field(obj: &Value, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| Error::Parse(format!("missing or invalid integer field \"{key}\"")))
}

fn parse_json(text: &str, what: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(what, e))?;
    if !v.is_object() {
        return Err(Error::Parse(format!("{what}: expected a JSON object")));
    }
    Ok(v)
}

/// `{"n", "g", "R"}` with `R[i][k][j][l]`.
pub fn parse_curvature(text: &str) -> Result<CurvatureData> {
    let v = parse_json(text, "curvature")?;
    let n = usize_field(&v, "n")?;
    let g = complex_block(&v, "g", n * n, true)?;
    let r = complex_block(&v, "R", n.pow(4), true)?;
    CurvatureData::new(n, r, g)
}

pub fn read_curvature(path: &Path) -> Result<CurvatureData> {
    parse_curvature(&read_text(path)?)
}

fn pairs(values: &[Complex64]) -> Value {
    Value::Array(values.iter().map(|z| serde_json::json!([z.re, z.im])).collect())
}

/// Curvature file text with flat `g` and `R` lists.
pub fn curvature_to_json(data: &CurvatureData) -> String {
    serde_json::json!({
        "n": data.dim(),
        "g": pairs(data.metric()),
        "R": pairs(data.coefficients()),
    })
    .to_string()
}

/// `{"n", "r", "g4", "h2"}` plus optional `hv2`, `hv4`, `hv3`, `hab2`.
pub fn parse_ahz(text: &str) -> Result<AHZComponents> {
    let v = parse_json(text, "ahz")?;
    let n = usize_field(&v, "n")?;
    let r = usize_field(&v, "r")?;
    let comps = AHZComponents {
        n,
        r,
        g4: complex_block(&v, "g4", n.pow(4), true)?,
        h2: complex_block(&v, "h2", r * r, true)?,
        hv2: complex_block(&v, "hv2", n * n, false)?,
        hv4: complex_block(&v, "hv4", n.pow(4), false)?,
        hv3: complex_block(&v, "hv3", r * n.pow(3), false)?,
        hab2: complex_block(&v, "hab2", r * r * n * n, false)?,
    };
    comps.check_shapes()?;
    Ok(comps)
}

pub fn read_ahz(path: &Path) -> Result<AHZComponents> {
    parse_ahz(&read_text(path)?)
}

/// One complex literal: `3`, `-2.5i`, `i`, `1+2i`, `1e-3-4i`.
pub fn parse_complex(token: &str) -> Result<Complex64> {
    let t: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("invalid complex literal \"{token}\""));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split before the last sign that is not leading and not an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() {
        0.0
    } else {
        re_part.parse::<f64>().map_err(|_| bad())?
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// Comma-separated complex literals.
pub fn parse_vector_literal(text: &str) -> Result<ComplexVector> {
    text.split(',').map(parse_complex).collect()
}

/// A JSON vector: a list of `{"re", "im"}` objects, `[re, im]` pairs, or reals.
pub fn parse_vector_json(text: &str) -> Result<ComplexVector> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err("vector", e))?;
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse("vector: expected a JSON array".into()))?;
    items
        .iter()
        .map(|item| match item {
            Value::Object(_) => serde_json::from_value::<crate::json::ReIm>(item.clone())
                .map(Complex64::from)
                .map_err(|e| parse_err("vector", e)),
            other => as_pair(other, "vector"),
        })
        .collect()
}

/// A vector given inline, or read from a JSON file when `arg` names one.
pub fn read_vector_arg(arg: &str) -> Result<ComplexVector> {
    let path = Path::new(arg);
    if arg.ends_with(".json") || path.is_file() {
        parse_vector_json(&read_text(path)?)
    } else {
        parse_vector_literal(arg)
    }
}
