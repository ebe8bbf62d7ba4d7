//! JSON function specs: parsing with field-path errors, and the inverse
//! serialization used for artifacts.
//!
//! A spec is an object with a `"type"` field. Gallery types build a
//! [`GallerySpec`]; the remaining types describe a circle or disk function
//! directly. Matrices are nested arrays of rows of `[re, im]` pairs.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{HardyError, Result};
use crate::function::{CircleFunction, DiskFunction, Rule};
use crate::gallery::{self, GalleryName, GalleryObject, GallerySpec};
use crate::grid::make_grid;
use crate::matrix::{MatrixValue, C64, ONE};

#[derive(Clone, Debug, PartialEq)]
pub enum ParsedSpec {
    Gallery(GallerySpec),
    Circle(CircleFunction),
    Disk(DiskFunction),
}

impl ParsedSpec {
    pub fn build(&self) -> Result<GalleryObject> {
        match self {
            ParsedSpec::Gallery(spec) => gallery::build(spec),
            ParsedSpec::Circle(f) => Ok(GalleryObject::Circle(f.clone())),
            ParsedSpec::Disk(h) => Ok(GalleryObject::Disk(h.clone())),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ParsedSpec::Gallery(spec) => spec.dim,
            ParsedSpec::Circle(f) => f.shape().1,
            ParsedSpec::Disk(h) => h.shape().1,
        }
    }
}

fn schema(path: &str, message: impl Into<String>) -> HardyError {
    HardyError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Parses a spec document; `default_seed` is used by random matrix
/// polynomials that do not carry their own seed.
pub fn parse_spec(bytes: &[u8], default_seed: u64) -> Result<ParsedSpec> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| schema("$", format!("not valid JSON: {e}")))?;
    parse_value(&value, "$", default_seed)
}

fn parse_value(value: &Value, path: &str, default_seed: u64) -> Result<ParsedSpec> {
    let obj = value.as_object().ok_or_else(|| schema(path, "expected an object"))?;
    let ty_path = format!("{path}.type");
    let ty = obj
        .get("type")
        .ok_or_else(|| schema(&ty_path, "missing field"))?
        .as_str()
        .ok_or_else(|| schema(&ty_path, "expected a string"))?;
    if let Some(name) = GalleryName::parse(ty) {
        return parse_gallery(obj, name, path, default_seed).map(ParsedSpec::Gallery);
    }
    match ty {
        "fourier_polynomial" => {
            allow_fields(obj, path, &["type", "coeffs"])?;
            let coeffs = parse_coeff_map(required(obj, path, "coeffs")?, &format!("{path}.coeffs"), false)?;
            Ok(ParsedSpec::Circle(CircleFunction::fourier_polynomial(coeffs)?))
        }
        "constant" => {
            allow_fields(obj, path, &["type", "value"])?;
            let m = parse_matrix(required(obj, path, "value")?, &format!("{path}.value"))?;
            Ok(ParsedSpec::Circle(CircleFunction::constant(m)))
        }
        "sampled" => {
            allow_fields(obj, path, &["type", "values"])?;
            let values_path = format!("{path}.values");
            let values = parse_matrix_list(required(obj, path, "values")?, &values_path)?;
            if values.is_empty() {
                return Err(schema(&values_path, "needs at least one sample"));
            }
            let grid = make_grid(values.len())?;
            Ok(ParsedSpec::Circle(CircleFunction::sampled(grid, values)?))
        }
        "taylor_polynomial" => {
            allow_fields(obj, path, &["type", "coeffs"])?;
            let coeffs_path = format!("{path}.coeffs");
            let coeffs = parse_matrix_list(required(obj, path, "coeffs")?, &coeffs_path)?;
            if coeffs.is_empty() {
                return Err(schema(&coeffs_path, "needs at least one coefficient"));
            }
            Ok(ParsedSpec::Disk(DiskFunction::taylor(coeffs)?))
        }
        "poisson_extension" => {
            allow_fields(obj, path, &["type", "boundary"])?;
            let f = parse_circle(required(obj, path, "boundary")?, &format!("{path}.boundary"), default_seed)?;
            Ok(ParsedSpec::Disk(DiskFunction::poisson_extension(f)))
        }
        "banach_transpose" => {
            allow_fields(obj, path, &["type", "of"])?;
            let f = parse_circle(required(obj, path, "of")?, &format!("{path}.of"), default_seed)?;
            Ok(ParsedSpec::Circle(gallery::banach_transpose(&f)))
        }
        "scaled" => {
            allow_fields(obj, path, &["type", "factor", "of"])?;
            let c = parse_complex(required(obj, path, "factor")?, &format!("{path}.factor"))?;
            let f = parse_circle(required(obj, path, "of")?, &format!("{path}.of"), default_seed)?;
            Ok(ParsedSpec::Circle(f.scale(c)))
        }
        other => Err(schema(&ty_path, format!("unknown type {other:?}"))),
    }
}

fn parse_circle(value: &Value, path: &str, default_seed: u64) -> Result<CircleFunction> {
    match parse_value(value, path, default_seed)?.build()? {
        GalleryObject::Circle(f) => Ok(f),
        GalleryObject::Disk(_) => Err(schema(path, "expected a circle function, found a disk function")),
    }
}

fn required<'a>(obj: &'a Map<String, Value>, path: &str, field: &str) -> Result<&'a Value> {
    obj.get(field).ok_or_else(|| schema(&format!("{path}.{field}"), "missing field"))
}

fn allow_fields(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema(&format!("{path}.{k}"), "unknown field")),
        None => Ok(()),
    }
}

fn parse_uint(value: &Value, path: &str) -> Result<u64> {
    value.as_u64().ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn parse_gallery(obj: &Map<String, Value>, name: GalleryName, path: &str, default_seed: u64) -> Result<GallerySpec> {
    if name != GalleryName::MatrixPolynomial {
        allow_fields(obj, path, &["type", "dim"])?;
        let dim_path = format!("{path}.dim");
        let dim = parse_uint(required(obj, path, "dim")?, &dim_path)?;
        if dim == 0 {
            return Err(schema(&dim_path, "must be at least 1"));
        }
        return Ok(GallerySpec::new(name, dim as usize));
    }
    allow_fields(obj, path, &["type", "dim", "coeffs", "degree", "seed"])?;
    if let Some(coeffs) = obj.get("coeffs") {
        for field in ["degree", "seed"] {
            if obj.contains_key(field) {
                return Err(schema(&format!("{path}.{field}"), "not allowed together with coeffs"));
            }
        }
        let coeffs = parse_coeff_map(coeffs, &format!("{path}.coeffs"), true)?;
        let dim = coeffs.values().next().map(|a| a.cols()).unwrap_or(0);
        if let Some(given) = obj.get("dim") {
            let dim_path = format!("{path}.dim");
            if parse_uint(given, &dim_path)? as usize != dim {
                return Err(HardyError::Validation(format!(
                    "{dim_path} = {given} disagrees with coefficient width {dim}"
                )));
            }
        }
        // Shape agreement across coefficients is checked here, before the
        // constructor sees them.
        CircleFunction::fourier_polynomial(coeffs.clone())?;
        return Ok(GallerySpec {
            coeffs: Some(coeffs),
            ..GallerySpec::new(name, dim)
        });
    }
    let dim_path = format!("{path}.dim");
    let dim = parse_uint(required(obj, path, "dim")?, &dim_path)?;
    if dim == 0 {
        return Err(schema(&dim_path, "must be at least 1"));
    }
    let degree = parse_uint(required(obj, path, "degree")?, &format!("{path}.degree"))?;
    let seed = match obj.get("seed") {
        Some(s) => parse_uint(s, &format!("{path}.seed"))?,
        None => default_seed,
    };
    Ok(GallerySpec::random_polynomial(dim as usize, degree as usize, seed))
}

fn parse_coeff_map(value: &Value, path: &str, analytic: bool) -> Result<BTreeMap<i64, MatrixValue>> {
    let obj = value.as_object().ok_or_else(|| schema(path, "expected an object keyed by mode"))?;
    if obj.is_empty() {
        return Err(schema(path, "needs at least one coefficient"));
    }
    let mut out = BTreeMap::new();
    for (key, m) in obj {
        let entry_path = format!("{path}.{key}");
        let n: i64 = key
            .parse()
            .map_err(|_| schema(&entry_path, "mode key must be an integer"))?;
        if analytic && n < 0 {
            return Err(schema(&entry_path, "matrix polynomial modes must be non-negative"));
        }
        if out.insert(n, parse_matrix(m, &entry_path)?).is_some() {
            return Err(schema(&entry_path, "duplicate mode"));
        }
    }
    Ok(out)
}

fn parse_matrix_list(value: &Value, path: &str) -> Result<Vec<MatrixValue>> {
    let items = value.as_array().ok_or_else(|| schema(path, "expected an array of matrices"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, m)| parse_matrix(m, &format!("{path}[{i}]")))
        .collect()
}

pub fn parse_complex(value: &Value, path: &str) -> Result<C64> {
    match value.as_array().map(Vec::as_slice) {
        Some([re, im]) => {
            let re = re.as_f64().ok_or_else(|| schema(&format!("{path}[0]"), "expected a number"))?;
            let im = im.as_f64().ok_or_else(|| schema(&format!("{path}[1]"), "expected a number"))?;
            Ok(C64::new(re, im))
        }
        _ => Err(schema(path, "expected a [re, im] pair")),
    }
}

pub fn parse_matrix(value: &Value, path: &str) -> Result<MatrixValue> {
    let rows = value.as_array().ok_or_else(|| schema(path, "expected an array of rows"))?;
    if rows.is_empty() {
        return Err(schema(path, "matrix needs at least one row"));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let entries = row.as_array().ok_or_else(|| schema(&row_path, "expected an array of [re, im] pairs"))?;
        if entries.is_empty() {
            return Err(schema(&row_path, "row needs at least one entry"));
        }
        let row = entries
            .iter()
            .enumerate()
            .map(|(j, e)| parse_complex(e, &format!("{row_path}[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        parsed.push(row);
    }
    MatrixValue::from_rows(parsed).map_err(|e| HardyError::Validation(format!("{path}: {e}")))
}

pub fn complex_json(c: C64) -> Value {
    json!([c.re, c.im])
}

pub fn matrix_json(m: &MatrixValue) -> Value {
    Value::Array(
        m.to_rows()
            .into_iter()
            .map(|row| Value::Array(row.into_iter().map(complex_json).collect()))
            .collect(),
    )
}

fn coeff_map_json(coeffs: &BTreeMap<i64, MatrixValue>) -> Value {
    let mut obj = Map::new();
    for (n, a) in coeffs {
        obj.insert(n.to_string(), matrix_json(a));
    }
    Value::Object(obj)
}

/// Serializes a circle function in the ingestion format.
pub fn circle_json(f: &CircleFunction) -> Value {
    match f {
        CircleFunction::Sampled { values, .. } => json!({
            "type": "sampled",
            "values": values.iter().map(matrix_json).collect::<Vec<_>>(),
        }),
        CircleFunction::FourierPolynomial { coeffs } => json!({
            "type": "fourier_polynomial",
            "coeffs": coeff_map_json(coeffs),
        }),
        CircleFunction::RuleBased(r) => {
            let (name, dim) = match r.rule {
                Rule::RotationSymbol { dim } => ("rotation_symbol", dim),
                Rule::ArcMultiplier { dim } => ("arc_multiplier", dim),
                Rule::UnboundedRow { dim } => ("unbounded_row", dim),
            };
            let mut v = json!({ "type": name, "dim": dim });
            if r.scale != ONE {
                v = json!({ "type": "scaled", "factor": complex_json(r.scale), "of": v });
            }
            if r.transposed {
                v = json!({ "type": "banach_transpose", "of": v });
            }
            v
        }
    }
}

/// Serializes a disk function in the ingestion format.
pub fn disk_json(h: &DiskFunction) -> Value {
    match h {
        DiskFunction::TaylorPolynomial { coeffs } => json!({
            "type": "taylor_polynomial",
            "coeffs": coeffs.iter().map(matrix_json).collect::<Vec<_>>(),
        }),
        DiskFunction::PoissonExtension { boundary, .. } => json!({
            "type": "poisson_extension",
            "boundary": circle_json(boundary),
        }),
    }
}
