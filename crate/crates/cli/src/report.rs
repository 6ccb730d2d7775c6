//! Ordered JSON trees with fixed float formatting.

use pwcalc::{CMatrix, CVector, ExtendedReal, ToleranceConfig};
use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};
use serde_json::value::RawValue;

/// JSON value that keeps insertion order and writes every float with 17
/// significant digits.
#[derive(Debug, Clone)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj() -> Self {
        Json::Obj(Vec::new())
    }

    /// Appends a field; panics on non-objects.
    pub fn with(mut self, key: &str, value: impl Into<Json>) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Json>) {
        match self {
            Json::Obj(fields) => fields.push((key.to_string(), value.into())),
            _ => panic!("push on a non-object"),
        }
    }
}

impl From<bool> for Json {
    fn from(v: bool) -> Self {
        Json::Bool(v)
    }
}

impl From<usize> for Json {
    fn from(v: usize) -> Self {
        Json::Int(v as i64)
    }
}

impl From<u32> for Json {
    fn from(v: u32) -> Self {
        Json::Int(v as i64)
    }
}

impl From<f64> for Json {
    fn from(v: f64) -> Self {
        Json::Num(v)
    }
}

impl From<&str> for Json {
    fn from(v: &str) -> Self {
        Json::Str(v.to_string())
    }
}

impl From<String> for Json {
    fn from(v: String) -> Self {
        Json::Str(v)
    }
}

impl From<ExtendedReal> for Json {
    fn from(v: ExtendedReal) -> Self {
        match v {
            ExtendedReal::Finite(x) => Json::Num(x),
            ExtendedReal::PosInfinity => Json::Str("+inf".into()),
        }
    }
}

impl<T: Into<Json>> From<Option<T>> for Json {
    fn from(v: Option<T>) -> Self {
        v.map_or(Json::Null, Into::into)
    }
}

impl<T: Into<Json>> From<Vec<T>> for Json {
    fn from(v: Vec<T>) -> Self {
        Json::Arr(v.into_iter().map(Into::into).collect())
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "\"nan\"".into()
    } else if x == f64::INFINITY {
        "\"+inf\"".into()
    } else if x == f64::NEG_INFINITY {
        "\"-inf\"".into()
    } else {
        format!("{x:.16e}")
    }
}

impl Serialize for Json {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Json::Null => s.serialize_unit(),
            Json::Bool(b) => s.serialize_bool(*b),
            Json::Int(i) => s.serialize_i64(*i),
            Json::Num(x) => {
                let raw = RawValue::from_string(format_float(*x)).map_err(serde::ser::Error::custom)?;
                raw.serialize(s)
            }
            Json::Str(v) => s.serialize_str(v),
            Json::Arr(items) => {
                let mut seq = s.serialize_seq(Some(items.len()))?;
                for item in items {
                    seq.serialize_element(item)?;
                }
                seq.end()
            }
            Json::Obj(fields) => {
                let mut map = s.serialize_map(Some(fields.len()))?;
                for (k, v) in fields {
                    map.serialize_entry(k, v)?;
                }
                map.end()
            }
        }
    }
}

/// `{n, re, im}` in the input file schema.
pub fn matrix(m: &CMatrix) -> Json {
    let rows = |part: fn(&pwcalc::C64) -> f64| {
        Json::Arr(
            (0..m.nrows())
                .map(|i| Json::Arr((0..m.ncols()).map(|j| Json::Num(part(&m[(i, j)]))).collect()))
                .collect(),
        )
    };
    Json::obj().with("n", m.nrows()).with("re", rows(|z| z.re)).with("im", rows(|z| z.im))
}

pub fn vector(v: &CVector) -> Json {
    Json::obj()
        .with("n", v.len())
        .with("re", Json::Arr(v.iter().map(|z| Json::Num(z.re)).collect()))
        .with("im", Json::Arr(v.iter().map(|z| Json::Num(z.im)).collect()))
}

pub fn config(tol: &ToleranceConfig) -> Json {
    Json::obj()
        .with("herm_tol", tol.herm_tol)
        .with("psd_rel_tol", tol.psd_rel_tol)
        .with("support_tol", tol.support_tol)
        .with("zero_tol", tol.zero_tol)
        .with("one_tol", tol.one_tol)
        .with("weight_tol", tol.weight_tol)
        .with("conv_tol", tol.conv_tol)
        .with("max_doublings", tol.max_doublings)
        .with("max_kron_dim", tol.max_kron_dim)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Warning,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Warning => "warning",
            Status::Error => "error",
        }
    }
}

/// The report written for every invocation.
#[derive(Debug, Clone)]
pub struct Report {
    pub operation: String,
    pub inputs: Json,
    pub config: Json,
    pub outputs: Json,
    pub diagnostics: Json,
    pub warnings: Vec<String>,
    pub error: Option<String>,
}

impl Report {
    pub fn new(operation: &str) -> Self {
        Self {
            operation: operation.to_string(),
            inputs: Json::obj(),
            config: Json::Null,
            outputs: Json::obj(),
            diagnostics: Json::obj(),
            warnings: Vec::new(),
            error: None,
        }
    }

    pub fn status(&self) -> Status {
        if self.error.is_some() {
            Status::Error
        } else if self.warnings.is_empty() {
            Status::Ok
        } else {
            Status::Warning
        }
    }

    pub fn to_json(&self) -> Json {
        let mut diagnostics = Json::obj().with("warnings", self.warnings.clone());
        if let Json::Obj(fields) = &self.diagnostics {
            for (k, v) in fields {
                diagnostics.push(k, v.clone());
            }
        }
        if let Some(e) = &self.error {
            diagnostics.push("error", e.as_str());
        }
        Json::obj()
            .with("operation", self.operation.as_str())
            .with("inputs", self.inputs.clone())
            .with("config", self.config.clone())
            .with("outputs", self.outputs.clone())
            .with("diagnostics", diagnostics)
            .with("status", self.status().as_str())
    }

    pub fn render(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        out.push('\n');
        out
    }
}
