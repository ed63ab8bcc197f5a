//! JSON and catalog exchange formats.

use std::fs;
use std::path::{Path, PathBuf};

use hyperfocus_core::arcs::{Arc, ArcError};
use hyperfocus_core::blocking::BlockingSet;
use hyperfocus_core::gf2::{FieldElement, FieldError, FieldSpec};
use hyperfocus_core::onefact::{format_catalog, parse_catalog, OneFactError, OneFactorization};
use hyperfocus_core::projplane::{Plane, ProjLine, ProjPoint, Projectivity};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: malformed JSON at line {line}, column {column}: {msg}")]
    Json { path: PathBuf, line: usize, column: usize, msg: String },
    #[error("{path}: field `{field}`: {msg}")]
    Schema { path: PathBuf, field: String, msg: String },
    #[error("{path}: {source}")]
    Catalog { path: PathBuf, source: OneFactError },
    #[error("{path}: points do not form an arc: {source}")]
    NotAnArc { path: PathBuf, source: ArcError },
}

/// `{"r": r, "poly": "0x.."}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub r: u32,
    pub poly: String,
}

pub type PointJson = [String; 3];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineJson {
    pub line: [String; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcJson {
    pub field: FieldJson,
    pub points: Vec<PointJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockingJson {
    pub field: FieldJson,
    pub points: Vec<PointJson>,
    pub linear: bool,
}

pub fn hex(e: FieldElement) -> String {
    format!("{:#x}", e.value())
}

pub fn parse_hex(s: &str) -> Result<u32, String> {
    let t = s.trim();
    let digits = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    u32::from_str_radix(digits, 16).map_err(|e| format!("`{s}` is not a hex number: {e}"))
}

pub fn field_json(spec: &FieldSpec) -> FieldJson {
    FieldJson {
        r: spec.degree(),
        poly: format!("{:#x}", spec.poly()),
    }
}

pub fn field_from_json(f: &FieldJson) -> Result<FieldSpec, String> {
    let poly = parse_hex(&f.poly)?;
    FieldSpec::new(f.r, Some(poly)).map_err(|e: FieldError| e.to_string())
}

pub fn point_json(p: &ProjPoint) -> PointJson {
    p.coords().map(hex)
}

pub fn line_json(l: &ProjLine) -> LineJson {
    LineJson { line: l.coords().map(hex) }
}

pub fn projectivity_json(m: &Projectivity) -> Vec<String> {
    m.entries().iter().map(|&e| hex(e)).collect()
}

pub fn arc_json(k: &Arc) -> ArcJson {
    ArcJson {
        field: field_json(k.plane().field()),
        points: k.points().iter().map(point_json).collect(),
    }
}

pub fn blocking_json(b: &BlockingSet) -> BlockingJson {
    BlockingJson {
        field: field_json(b.arc().plane().field()),
        points: b.points().iter().map(point_json).collect(),
        linear: b.is_linear(),
    }
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_owned(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Write {
        path: path.to_owned(),
        source,
    })
}

/// Parses an arc file without checking the arc condition.
pub fn load_points(path: &Path) -> Result<(FieldSpec, Vec<ProjPoint>), IoError> {
    let text = read(path)?;
    // A bare arc, or a report whose result carries one (as `arc build` writes).
    let raw: ArcJson = serde_json::from_str(&text)
        .or_else(|e| {
            serde_json::from_str::<serde_json::Value>(&text)
                .ok()
                .and_then(|v| v.pointer("/result/arc").cloned())
                .and_then(|a| serde_json::from_value(a).ok())
                .ok_or(e)
        })
        .map_err(|e| IoError::Json {
            path: path.to_owned(),
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
    let schema = |field: String, msg: String| IoError::Schema {
        path: path.to_owned(),
        field,
        msg,
    };
    let spec = field_from_json(&raw.field).map_err(|m| schema("field".into(), m))?;
    let plane = Plane::new(spec);
    let mut points = Vec::with_capacity(raw.points.len());
    for (i, p) in raw.points.iter().enumerate() {
        let mut c = [FieldElement::ZERO; 3];
        for (j, s) in p.iter().enumerate() {
            let v = parse_hex(s).map_err(|m| schema(format!("points[{i}][{j}]"), m))?;
            c[j] = spec.element(v).map_err(|e| schema(format!("points[{i}][{j}]"), e.to_string()))?;
        }
        let q = plane.normalize(c).map_err(|e| schema(format!("points[{i}]"), e.to_string()))?;
        points.push(q);
    }
    Ok((spec, points))
}

pub fn load_arc(path: &Path) -> Result<Arc, IoError> {
    let (spec, points) = load_points(path)?;
    Arc::new(Plane::new(spec), points).map_err(|source| IoError::NotAnArc {
        path: path.to_owned(),
        source,
    })
}

pub fn save_arc(path: &Path, k: &Arc) -> Result<(), IoError> {
    let text = serde_json::to_string_pretty(&arc_json(k)).expect("serializable") + "\n";
    write_text(path, &text)
}

pub fn load_catalog(path: &Path) -> Result<Vec<OneFactorization>, IoError> {
    parse_catalog(&read(path)?).map_err(|source| IoError::Catalog {
        path: path.to_owned(),
        source,
    })
}

pub fn save_catalog(path: &Path, fs: &[OneFactorization]) -> Result<(), IoError> {
    write_text(path, &format_catalog(fs))
}
