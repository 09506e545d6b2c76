//! Reading and writing diagrams, grids, clouds, images and distance matrices.
//!
//! | object | file |
//! |---|---|
//! | diagram | `<stem>_h<k>.csv`, header `birth,death` |
//! | scalar grid | headerless CSV matrix |
//! | point cloud | headerless CSV, one point per row |
//! | image | CSV matrix, row 0 = lowest persistence band, plus `<stem>.json` spec |
//! | distance matrix | CSV with a `label` column and header row, plus `<stem>.json` provenance |
//! | dataset manifest | JSON |

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cloud::{PointCloud, ScalarGrid};
use crate::diagram::PersistenceDiagram;
use crate::error::{Error, Result};
use crate::image::{ImageSpec, PersistenceImage};
use crate::metrics::{DistanceMatrix, Provenance};

fn parse_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        context: path.display().to_string(),
        message: message.into(),
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    parse_err(path, e.to_string())
}

fn reader(path: &Path, has_headers: bool) -> Result<csv::Reader<File>> {
    Ok(csv::ReaderBuilder::new()
        .has_headers(has_headers)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(File::open(path)?))
}

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::WriterBuilder::new().from_writer(BufWriter::new(File::create(path)?)))
}

fn parse_f64(path: &Path, row: usize, field: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| parse_err(path, format!("row {}: {field:?} is not a number", row + 1)))
}

/// Every row as numbers. A first row with no numeric field is taken as a header.
fn numeric_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (i, rec) in reader(path, false)?.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        if i == 0 && rec.iter().all(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        rows.push(rec.iter().map(|f| parse_f64(path, i, f)).collect::<Result<Vec<_>>>()?);
    }
    Ok(rows)
}

fn write_rows<'a>(path: &Path, header: Option<&[&str]>, rows: impl Iterator<Item = &'a [f64]>) -> Result<()> {
    let mut w = writer(path)?;
    if let Some(h) = header {
        w.write_record(h).map_err(|e| csv_err(path, e))?;
    }
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string())).map_err(|e| csv_err(path, e))?;
    }
    w.flush()?;
    Ok(())
}

/// `<stem>_h<k>.csv` inside `dir`.
pub fn diagram_path(dir: &Path, stem: &str, hom_dim: usize) -> PathBuf {
    dir.join(format!("{stem}_h{hom_dim}.csv"))
}

/// Homological dimension from a `..._h<k>.<ext>` file name.
pub fn hom_dim_from_path(path: &Path) -> Option<usize> {
    let stem = path.file_stem()?.to_str()?;
    let (_, k) = stem.rsplit_once("_h")?;
    k.parse().ok()
}

/// Class tag of a generated file stem: `circle_007_h1` and `circle_007`
/// both give `circle`.
pub fn class_label(stem: &str) -> &str {
    let strip = |s: &'static str, s2: &str| -> Option<usize> {
        let (head, tail) = s2.rsplit_once(s)?;
        (!tail.is_empty() && tail.bytes().all(|b| b.is_ascii_digit())).then_some(head.len())
    };
    let mut out = stem;
    if let Some(n) = strip("_h", out) {
        out = &out[..n];
    }
    if let Some(n) = strip("_", out) {
        out = &out[..n];
    }
    out
}

pub fn write_diagram(path: &Path, diagram: &PersistenceDiagram) -> Result<()> {
    let rows: Vec<[f64; 2]> = diagram.points().iter().map(|p| [p.birth(), p.death()]).collect();
    write_rows(path, Some(&["birth", "death"]), rows.iter().map(|r| r.as_slice()))
}

/// Reads a diagram; the dimension comes from the `_h<k>` suffix, else 0.
/// Rows with death `inf` are dropped and counted.
pub fn read_diagram(path: &Path) -> Result<PersistenceDiagram> {
    let hom_dim = hom_dim_from_path(path).unwrap_or(0);
    let mut r = reader(path, true)?;
    let headers = r.headers().map_err(|e| csv_err(path, e))?.clone();
    if headers.len() != 2 || &headers[0] != "birth" || &headers[1] != "death" {
        return Err(parse_err(path, format!("expected header birth,death, found {:?}", headers.iter().collect::<Vec<_>>())));
    }
    let mut pairs = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        pairs.push((parse_f64(path, i + 1, &rec[0])?, parse_f64(path, i + 1, &rec[1])?));
    }
    PersistenceDiagram::from_pairs(hom_dim, pairs)
}

pub fn write_grid(path: &Path, grid: &ScalarGrid) -> Result<()> {
    let (_, cols) = grid.shape();
    write_rows(path, None, grid.values().chunks(cols))
}

pub fn read_grid(path: &Path) -> Result<ScalarGrid> {
    ScalarGrid::from_rows(numeric_rows(path)?)
}

pub fn write_cloud(path: &Path, cloud: &PointCloud) -> Result<()> {
    write_rows(path, None, cloud.points().iter().map(|p| p.as_slice()))
}

/// Reads a cloud; the label is the file stem.
pub fn read_cloud(path: &Path) -> Result<PointCloud> {
    let cloud = PointCloud::new(numeric_rows(path)?)?;
    Ok(match path.file_stem().and_then(|s| s.to_str()) {
        Some(s) => cloud.with_label(s),
        None => cloud,
    })
}

/// JSON sidecar stored next to an image CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageSidecar {
    pub hom_dim: usize,
    pub spec: ImageSpec,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let mut s = String::new();
    File::open(path)?.read_to_string(&mut s)?;
    serde_json::from_str(&s).map_err(|e| parse_err(path, e.to_string()))
}

pub fn write_image(path: &Path, image: &PersistenceImage) -> Result<()> {
    write_rows(path, None, image.pixels().chunks(image.cols()))?;
    write_json(
        &sidecar_path(path),
        &ImageSidecar {
            hom_dim: image.hom_dim(),
            spec: image.spec().clone(),
        },
    )
}

pub fn read_image(path: &Path) -> Result<PersistenceImage> {
    let side: ImageSidecar = read_json(&sidecar_path(path))?;
    let pixels: Vec<f64> = numeric_rows(path)?.into_iter().flatten().collect();
    PersistenceImage::from_pixels(pixels, side.spec, side.hom_dim)
}

pub fn write_distance_matrix(path: &Path, matrix: &DistanceMatrix) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["label".to_string()];
    header.extend(matrix.labels().iter().cloned());
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    let n = matrix.len();
    for i in 0..n {
        let mut rec = vec![matrix.labels()[i].clone()];
        rec.extend((0..n).map(|j| matrix.get(i, j).to_string()));
        w.write_record(&rec).map_err(|e| csv_err(path, e))?;
    }
    w.flush()?;
    write_json(&sidecar_path(path), matrix.provenance())
}

/// Reads a matrix written by [`write_distance_matrix`]. A missing provenance
/// sidecar yields representation and metric `"unknown"`.
pub fn read_distance_matrix(path: &Path) -> Result<DistanceMatrix> {
    let mut r = reader(path, true)?;
    let headers = r.headers().map_err(|e| csv_err(path, e))?.clone();
    if headers.is_empty() || &headers[0] != "label" {
        return Err(parse_err(path, "first column must be named label"));
    }
    let n = headers.len() - 1;
    let mut labels = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n * n);
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        if rec.len() != n + 1 {
            return Err(parse_err(path, format!("row {} has {} fields, expected {}", i + 2, rec.len(), n + 1)));
        }
        labels.push(rec[0].to_string());
        for f in rec.iter().skip(1) {
            values.push(parse_f64(path, i + 1, f)?);
        }
    }
    let side = sidecar_path(path);
    let provenance = if side.exists() {
        read_json(&side)?
    } else {
        Provenance::new("unknown", "unknown")
    };
    DistanceMatrix::new(labels, values, provenance)
}

/// One generated cloud.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// File name relative to the manifest.
    pub file: String,
    pub label: String,
    pub points: usize,
    pub seed: u64,
}

/// Description of a generated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub dataset: String,
    pub generator: String,
    pub seed: u64,
    pub parameters: serde_json::Map<String, serde_json::Value>,
    pub entries: Vec<ManifestEntry>,
}

pub fn write_manifest(path: &Path, manifest: &Manifest) -> Result<()> {
    write_json(path, manifest)
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    read_json(path)
}
