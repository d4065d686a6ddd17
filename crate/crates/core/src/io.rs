//! Space files, manifests and witness files.
//!
//! A space file is JSON with keys `dist`, `format_version`, `label_metric`
//! (optional), `labels` and `points`. `dist` is either the full matrix or its
//! strict upper triangle (row `i` holding columns `i+1..n`). Labels map ids
//! to point names. The canonical form written by [`serialize_space`] sorts
//! keys and labels, writes one matrix row per line, and rounds numbers to 12
//! significant digits printed as the shortest decimal that reads back
//! exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::Deserialize;
use thiserror::Error;

use crate::approximation::ApproximationWitness;
use crate::correspondence::AdmissiblePseudometric;
use crate::error::Error;
use crate::space::{LabeledMetricSpace, RawSpace};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("bad shape in '{field}': {message}")]
    Shape { field: String, message: String },
    #[error("label '{label}' refers to unknown point '{point}'")]
    UnknownPoint { label: String, point: String },
    #[error("unsupported format_version {0}")]
    Version(u32),
    #[error(transparent)]
    Invalid(#[from] Error),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        source: Box<FormatError>,
    },
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type FormatResult<T> = std::result::Result<T, FormatError>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceRepr {
    format_version: u32,
    points: Vec<String>,
    dist: Vec<Vec<f64>>,
    labels: BTreeMap<String, String>,
    #[serde(default)]
    label_metric: Option<Vec<Vec<f64>>>,
}

fn check_version(v: u32) -> FormatResult<()> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(FormatError::Version(v))
    }
}

/// Expands a strict upper triangle; full matrices pass through.
fn full_matrix(dist: Vec<Vec<f64>>, n: usize) -> FormatResult<Vec<Vec<f64>>> {
    if dist.len() == n && dist.iter().all(|r| r.len() == n) {
        return Ok(dist);
    }
    let triangle = (dist.len() == n || dist.len() + 1 == n)
        && dist.iter().enumerate().all(|(i, r)| r.len() == n - 1 - i);
    if !triangle {
        return Err(FormatError::Shape {
            field: "dist".into(),
            message: format!(
                "expected a {n}x{n} matrix or its strict upper triangle, got row lengths {:?}",
                dist.iter().map(Vec::len).collect::<Vec<_>>()
            ),
        });
    }
    let mut full = vec![vec![0.0; n]; n];
    for (i, row) in dist.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            let j = i + 1 + k;
            full[i][j] = v;
            full[j][i] = v;
        }
    }
    Ok(full)
}

/// The unvalidated contents of a space file.
pub fn parse_raw(text: &str) -> FormatResult<RawSpace> {
    let repr: SpaceRepr = serde_json::from_str(text)?;
    check_version(repr.format_version)?;
    let n = repr.points.len();
    let dist = full_matrix(repr.dist, n)?;
    let mut labels = Vec::with_capacity(repr.labels.len());
    for (id, name) in repr.labels {
        match repr.points.iter().position(|p| *p == name) {
            Some(i) => labels.push((id, i)),
            None => {
                return Err(FormatError::UnknownPoint {
                    label: id,
                    point: name,
                })
            }
        }
    }
    if let Some(m) = &repr.label_metric {
        let l = labels.len();
        if m.len() != l || m.iter().any(|r| r.len() != l) {
            return Err(FormatError::Shape {
                field: "label_metric".into(),
                message: format!("expected a {l}x{l} matrix"),
            });
        }
    }
    Ok(RawSpace {
        points: repr.points,
        dist,
        labels,
        label_metric: repr.label_metric,
    })
}

pub fn parse_space(text: &str, tol: f64) -> FormatResult<LabeledMetricSpace> {
    Ok(LabeledMetricSpace::from_raw(&parse_raw(text)?, tol)?)
}

/// Rounds to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { 0.0 } else { v };
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

fn number(v: f64) -> String {
    format!("{}", round12(v))
}

fn string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn matrix_rows(out: &mut String, rows: &[Vec<f64>]) {
    out.push('[');
    for (i, row) in rows.iter().enumerate() {
        out.push_str(if i == 0 { "\n    [" } else { ",\n    [" });
        let cells: Vec<String> = row.iter().map(|&v| number(v)).collect();
        out.push_str(&cells.join(", "));
        out.push(']');
    }
    out.push_str("\n  ]");
}

/// Canonical text of a space.
pub fn serialize_space(space: &LabeledMetricSpace) -> String {
    serialize_raw(&space.to_raw())
}

/// Canonical text of raw contents; labels are written in id order.
pub fn serialize_raw(raw: &RawSpace) -> String {
    let mut order: Vec<usize> = (0..raw.labels.len()).collect();
    order.sort_by(|&a, &b| raw.labels[a].0.cmp(&raw.labels[b].0));
    let mut out = String::from("{\n  \"dist\": ");
    matrix_rows(&mut out, &raw.dist);
    let _ = write!(out, ",\n  \"format_version\": {FORMAT_VERSION}");
    if let Some(m) = &raw.label_metric {
        let sorted: Vec<Vec<f64>> = order
            .iter()
            .map(|&a| order.iter().map(|&b| m[a][b]).collect())
            .collect();
        out.push_str(",\n  \"label_metric\": ");
        matrix_rows(&mut out, &sorted);
    }
    out.push_str(",\n  \"labels\": {");
    for (k, &a) in order.iter().enumerate() {
        let (id, p) = &raw.labels[a];
        let sep = if k == 0 { "\n    " } else { ",\n    " };
        let _ = write!(out, "{sep}{}: {}", string(id), string(&raw.points[*p]));
    }
    out.push_str(if order.is_empty() { "}" } else { "\n  }" });
    let names: Vec<String> = raw.points.iter().map(|p| string(p)).collect();
    let _ = write!(out, ",\n  \"points\": [{}]\n}}\n", names.join(", "));
    out
}

/// Parses and re-serializes, without metric validation.
pub fn canonicalize(text: &str) -> FormatResult<String> {
    Ok(serialize_raw(&parse_raw(text)?))
}

fn read(path: &Path) -> FormatResult<String> {
    std::fs::read_to_string(path).map_err(|source| FormatError::File {
        path: path.to_path_buf(),
        source,
    })
}

fn in_file<T>(path: &Path, r: FormatResult<T>) -> FormatResult<T> {
    r.map_err(|e| FormatError::InFile {
        path: path.to_path_buf(),
        source: Box::new(e),
    })
}

pub fn read_space(path: &Path, tol: f64) -> FormatResult<LabeledMetricSpace> {
    let text = read(path)?;
    in_file(path, parse_space(&text, tol))
}

pub fn write_space(path: &Path, space: &LabeledMetricSpace) -> FormatResult<()> {
    std::fs::write(path, serialize_space(space)).map_err(|source| FormatError::File {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkRepr {
    cross: Vec<Vec<f64>>,
    r: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestRepr {
    format_version: u32,
    spaces: Vec<String>,
    #[serde(default)]
    links: Option<Vec<LinkRepr>>,
}

/// Spaces listed by a manifest, with optional links for chains.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub spaces: Vec<LabeledMetricSpace>,
    pub links: Option<Vec<AdmissiblePseudometric>>,
}

/// Reads a manifest; space paths are relative to its directory.
pub fn read_manifest(path: &Path, tol: f64) -> FormatResult<Manifest> {
    let text = read(path)?;
    let repr: ManifestRepr = in_file(path, serde_json::from_str(&text).map_err(Into::into))?;
    in_file(path, check_version(repr.format_version))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let spaces = repr
        .spaces
        .iter()
        .map(|p| read_space(&dir.join(p), tol))
        .collect::<FormatResult<Vec<_>>>()?;
    let links = match repr.links {
        None => None,
        Some(links) => {
            let mut out = Vec::with_capacity(links.len());
            for (k, l) in links.into_iter().enumerate() {
                let rows = l.cross.len();
                let cols = l.cross.first().map_or(0, Vec::len);
                if l.cross.iter().any(|r| r.len() != cols) {
                    return in_file(
                        path,
                        Err(FormatError::Shape {
                            field: format!("links[{k}].cross"),
                            message: "ragged rows".into(),
                        }),
                    );
                }
                let flat: Vec<f64> = l.cross.into_iter().flatten().collect();
                let cross = Array2::from_shape_vec((rows, cols), flat).expect("shape checked");
                out.push(AdmissiblePseudometric::new(cross, l.r));
            }
            Some(out)
        }
    };
    Ok(Manifest { spaces, links })
}

/// Manifest text for the given relative space paths and links.
pub fn serialize_manifest(spaces: &[String], links: Option<&[AdmissiblePseudometric]>) -> String {
    let names: Vec<String> = spaces.iter().map(|s| string(s)).collect();
    let mut out = format!("{{\n  \"format_version\": {FORMAT_VERSION}");
    if let Some(links) = links {
        out.push_str(",\n  \"links\": [");
        for (k, l) in links.iter().enumerate() {
            out.push_str(if k == 0 {
                "\n    {\"cross\": "
            } else {
                ",\n    {\"cross\": "
            });
            let rows: Vec<String> = l
                .cross
                .outer_iter()
                .map(|r| {
                    let cells: Vec<String> = r.iter().map(|&v| number(v)).collect();
                    format!("[{}]", cells.join(", "))
                })
                .collect();
            let _ = write!(out, "[{}], \"r\": {}}}", rows.join(", "), number(l.t));
        }
        out.push_str("\n  ]");
    }
    let _ = write!(out, ",\n  \"spaces\": [{}]\n}}\n", names.join(", "));
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessRepr {
    format_version: u32,
    pairs: Vec<(String, String)>,
    alpha0: BTreeMap<String, String>,
    beta0: BTreeMap<String, String>,
}

/// Parses an approximation witness given by point names:
/// `{"format_version": 1, "pairs": [[x, y], ...], "alpha0": {id: x}, "beta0": {id: y}}`.
pub fn parse_witness(
    text: &str,
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
) -> FormatResult<ApproximationWitness> {
    let repr: WitnessRepr = serde_json::from_str(text)?;
    check_version(repr.format_version)?;
    let find = |s: &LabeledMetricSpace, side: &str, name: &str| {
        s.point_index(name).ok_or_else(|| FormatError::Shape {
            field: side.into(),
            message: format!("unknown point '{name}'"),
        })
    };
    let mut x_indices = Vec::new();
    let mut y_indices = Vec::new();
    for (a, b) in &repr.pairs {
        x_indices.push(find(x, "pairs", a)?);
        y_indices.push(find(y, "pairs", b)?);
    }
    let relabel = |s: &LabeledMetricSpace, field: &str, map: &BTreeMap<String, String>| {
        s.label_set()
            .ids()
            .iter()
            .map(|id| match map.get(id) {
                Some(name) => find(s, field, name),
                None => Err(FormatError::Shape {
                    field: field.into(),
                    message: format!("label '{id}' is missing"),
                }),
            })
            .collect::<FormatResult<Vec<_>>>()
    };
    Ok(ApproximationWitness {
        alpha0: relabel(x, "alpha0", &repr.alpha0)?,
        beta0: relabel(y, "beta0", &repr.beta0)?,
        x_indices,
        y_indices,
    })
}

/// Witness text by point names.
pub fn serialize_witness(
    w: &ApproximationWitness,
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
) -> String {
    let pairs: Vec<String> = w
        .x_indices
        .iter()
        .zip(&w.y_indices)
        .map(|(&a, &b)| format!("[{}, {}]", string(&x.points()[a]), string(&y.points()[b])))
        .collect();
    let map = |s: &LabeledMetricSpace, v: &[usize]| {
        let items: Vec<String> = s
            .label_set()
            .ids()
            .iter()
            .zip(v)
            .map(|(id, &p)| format!("{}: {}", string(id), string(&s.points()[p])))
            .collect();
        format!("{{{}}}", items.join(", "))
    };
    format!(
        "{{\n  \"alpha0\": {},\n  \"beta0\": {},\n  \"format_version\": {FORMAT_VERSION},\n  \"pairs\": [{}]\n}}\n",
        map(x, &w.alpha0),
        map(y, &w.beta0),
        pairs.join(", ")
    )
}
