//! Input schemas and deterministic JSON output.

use std::io::{self, Write};
use std::path::Path;

use cliffpair::clifford::{Multivector, C64};
use cliffpair::linalg::{CMatrix, RMatrix, SymmetricMap};
use cliffpair::CliffordMapParams;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::CliError;

/// `pair.json`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    pub dim: usize,
    pub c: String,
    pub d: String,
}

/// `b.json`: `entries` holds the matrix row by row.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BFile {
    pub dim: usize,
    pub entries: Vec<f64>,
}

/// `params.json`. Missing multivectors default to zero.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub dim: usize,
    #[serde(rename = "B")]
    pub bmap: Vec<f64>,
    #[serde(default)]
    pub a: Option<String>,
    #[serde(default)]
    pub b: Option<String>,
    #[serde(default)]
    pub c: Option<String>,
    #[serde(default)]
    pub d: Option<String>,
    #[serde(default)]
    pub e: Option<String>,
}

fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn multivector(dim: usize, text: &str, field: &str) -> Result<Multivector, CliError> {
    Multivector::parse(dim, text).map_err(|e| CliError::Input(format!("field {field}: {e}")))
}

fn symmetric(dim: usize, entries: &[f64]) -> Result<SymmetricMap, CliError> {
    if entries.len() != dim * dim {
        return Err(CliError::Input(format!(
            "expected {} matrix entries for dimension {dim}, got {}",
            dim * dim,
            entries.len()
        )));
    }
    SymmetricMap::new(RMatrix::from_row_slice(dim, dim, entries)).map_err(CliError::from)
}

pub fn read_pair(path: &Path) -> Result<(Multivector, Multivector), CliError> {
    let f: PairFile = read(path)?;
    Ok((
        multivector(f.dim, &f.c, "c")?,
        multivector(f.dim, &f.d, "d")?,
    ))
}

pub fn read_b(path: &Path) -> Result<SymmetricMap, CliError> {
    let f: BFile = read(path)?;
    symmetric(f.dim, &f.entries)
}

pub fn read_params(path: &Path) -> Result<CliffordMapParams, CliError> {
    let f: ParamsFile = read(path)?;
    let mut p = CliffordMapParams::zero(symmetric(f.dim, &f.bmap)?);
    let fields = [
        (&f.a, &mut p.a, "a"),
        (&f.b, &mut p.b, "b"),
        (&f.c, &mut p.c, "c"),
        (&f.d, &mut p.d, "d"),
        (&f.e, &mut p.e, "e"),
    ];
    for (text, slot, name) in fields {
        if let Some(t) = text {
            *slot = multivector(f.dim, t, name)?;
        }
    }
    Ok(p)
}

/// `[re, im]`, the layout `num-complex` uses for serialized values.
pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn real_rows(m: &RMatrix) -> Value {
    Value::Array(
        m.row_iter()
            .map(|r| r.iter().map(|&x| json!(x)).collect())
            .collect(),
    )
}

pub fn complex_rows(m: &CMatrix) -> Value {
    Value::Array(
        m.row_iter()
            .map(|r| r.iter().map(|&z| complex(z)).collect())
            .collect(),
    )
}

/// Pretty printer that writes every float with 17 significant digits.
struct Precise<'a>(serde_json::ser::PrettyFormatter<'a>);

impl serde_json::ser::Formatter for Precise<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serialize with sorted keys (the default map of `serde_json`) and 17 digits.
pub fn render(value: &Value) -> String {
    let mut buf = Vec::new();
    let fmt = Precise(serde_json::ser::PrettyFormatter::with_indent(b"  "));
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    serde::Serialize::serialize(value, &mut ser).expect("serializing a JSON value");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON output is UTF-8")
}
