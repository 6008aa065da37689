//! The JSON description files.
//!
//! Every file is an object with `format_version`, `kind` and the fields of
//! one payload type. Unknown fields are rejected. Coefficients are strings in
//! the polynomial text syntax, so rationals stay exact (`"-1/2*x^2"`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const FORMAT_VERSION: &str = "1";

/// Basis name to coefficient text.
pub type Coeffs = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableSpec {
    pub name: String,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub variables: Vec<VariableSpec>,
    #[serde(default)]
    pub relations: Vec<String>,
    pub truncation: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorSpec {
    pub name: String,
    pub degree: i32,
}

/// One value of a multilinear map: the inputs by name, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub inputs: Vec<String>,
    pub output: Coeffs,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinfSpec {
    pub basis: Vec<VectorSpec>,
    #[serde(default)]
    pub brackets: Vec<EntrySpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub name: String,
    pub degree: i32,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AinfSpec {
    /// Absent means the ground field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSpec>,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSpec>,
    #[serde(default)]
    pub operations: Vec<EntrySpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub curvature: BTreeMap<String, Coeffs>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    pub source: AinfSpec,
    pub target: AinfSpec,
    pub object_map: BTreeMap<String, String>,
    #[serde(default)]
    pub components: Vec<EntrySpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub zeroth: BTreeMap<String, Coeffs>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    pub algebra: LinfSpec,
    pub ring: RingSpec,
    pub value: Coeffs,
    /// Coefficients of `t^0, t^1, ...` of a gauge path.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gamma: Vec<Coeffs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Coeffs>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainSpec {
    /// The uncurved category over the ground field.
    pub category: AinfSpec,
    pub ring: RingSpec,
    pub degree: i32,
    #[serde(default)]
    pub components: Vec<EntrySpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub zeroth: BTreeMap<String, Coeffs>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    pub rank: usize,
    pub generators: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inequalities: Option<Vec<Vec<i64>>>,
    /// Default element for `specialize`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
}

/// Area and B-field values on the generators of a cone, by generator name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub omega: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub b_field: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Ring(RingSpec),
    Cone(ConeSpec),
    Linf(LinfSpec),
    Ainf(AinfSpec),
    Functor(FunctorSpec),
    Mc(McSpec),
    Cochain(CochainSpec),
    Point(PointSpec),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Ring(_) => "ring",
            Payload::Cone(_) => "cone",
            Payload::Linf(_) => "linf",
            Payload::Ainf(_) => "ainf",
            Payload::Functor(_) => "functor",
            Payload::Mc(_) => "mc",
            Payload::Cochain(_) => "cochain",
            Payload::Point(_) => "point",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescriptionFile {
    pub format_version: String,
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormatError {
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    Schema {
        path: String,
        message: String,
    },
    VersionUnsupported(String),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Syntax {
                line,
                column,
                message,
            } => {
                write!(f, "syntax error at line {line}, column {column}: {message}")
            }
            FormatError::Schema { path, message } => {
                write!(f, "schema error at `{path}`: {message}")
            }
            FormatError::VersionUnsupported(v) => {
                write!(
                    f,
                    "format version `{v}` is not supported (expected `{FORMAT_VERSION}`)"
                )
            }
        }
    }
}

impl std::error::Error for FormatError {}

fn schema(path: &str, message: impl Into<String>) -> FormatError {
    FormatError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

fn typed<T: for<'de> Deserialize<'de>>(body: Map<String, Value>) -> Result<T, FormatError> {
    serde_path_to_error::deserialize(Value::Object(body)).map_err(|e| {
        let path = e.path().to_string();
        schema(&path, e.into_inner().to_string())
    })
}

/// Line and column (both from 1) of a byte offset.
fn position(bytes: &[u8], offset: usize) -> (usize, usize) {
    let before = &bytes[..offset.min(bytes.len())];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let start = before
        .iter()
        .rposition(|&b| b == b'\n')
        .map_or(0, |p| p + 1);
    (line, offset - start + 1)
}

pub fn parse(bytes: &[u8]) -> Result<DescriptionFile, FormatError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let (line, column) = position(bytes, e.valid_up_to());
        FormatError::Syntax {
            line,
            column,
            message: "invalid UTF-8".into(),
        }
    })?;
    let value: Value = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Value::Object(mut body) = value else {
        return Err(schema(".", "expected an object"));
    };
    let version = match body.remove("format_version") {
        Some(Value::String(v)) => v,
        Some(_) => return Err(schema("format_version", "expected a string")),
        None => return Err(schema("format_version", "missing field")),
    };
    if version != FORMAT_VERSION {
        return Err(FormatError::VersionUnsupported(version));
    }
    let kind = match body.remove("kind") {
        Some(Value::String(k)) => k,
        Some(_) => return Err(schema("kind", "expected a string")),
        None => return Err(schema("kind", "missing field")),
    };
    let payload = match kind.as_str() {
        "ring" => Payload::Ring(typed(body)?),
        "cone" => Payload::Cone(typed(body)?),
        "linf" => Payload::Linf(typed(body)?),
        "ainf" => Payload::Ainf(typed(body)?),
        "functor" => Payload::Functor(typed(body)?),
        "mc" => Payload::Mc(typed(body)?),
        "cochain" => Payload::Cochain(typed(body)?),
        "point" => Payload::Point(typed(body)?),
        other => return Err(schema("kind", format!("unknown kind `{other}`"))),
    };
    Ok(DescriptionFile {
        format_version: version,
        payload,
    })
}

/// Pretty JSON with sorted keys.
pub fn serialize(file: &DescriptionFile) -> String {
    let body = match &file.payload {
        Payload::Ring(p) => serde_json::to_value(p),
        Payload::Cone(p) => serde_json::to_value(p),
        Payload::Linf(p) => serde_json::to_value(p),
        Payload::Ainf(p) => serde_json::to_value(p),
        Payload::Functor(p) => serde_json::to_value(p),
        Payload::Mc(p) => serde_json::to_value(p),
        Payload::Cochain(p) => serde_json::to_value(p),
        Payload::Point(p) => serde_json::to_value(p),
    }
    .expect("payloads serialize");
    let Value::Object(mut body) = body else {
        unreachable!("payloads are structs")
    };
    body.insert(
        "format_version".into(),
        Value::String(file.format_version.clone()),
    );
    body.insert("kind".into(), Value::String(file.payload.kind().into()));
    let mut out = serde_json::to_string_pretty(&Value::Object(body)).expect("values serialize");
    out.push('\n');
    out
}
