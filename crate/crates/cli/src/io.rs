//! CSV file formats.
//!
//! Matrices are written as `n` rows of `n` comma-separated values with no
//! header; embeddings as one point per row; traces with the header
//! `iter,cost,seconds`. Floats are serialized with 17 significant digits,
//! so write-then-read reproduces every value bit for bit.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use mdscale::jl::JlRecord;
use mdscale::{ConvergenceTrace, DistanceMatrix, Embedding};

/// 17 significant digits: exact round-trip for any finite f64.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_rows<I>(path: &Path, header: Option<&str>, rows: I) -> Result<()>
where
    I: IntoIterator<Item = String>,
{
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str(h);
        out.push('\n');
    }
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)
                .with_context(|| format!("creating directory {}", dir.display()))?;
        }
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn parse_numeric_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let v: f64 = field
                .trim()
                .parse()
                .with_context(|| format!("{}:{}: bad number `{field}`", path.display(), lineno + 1))?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    Ok(rows)
}

pub fn write_matrix(path: &Path, d: &DistanceMatrix) -> Result<()> {
    let n = d.n();
    write_rows(
        path,
        None,
        (0..n).map(|i| {
            (0..n)
                .map(|j| fmt(d.get(i, j)))
                .collect::<Vec<_>>()
                .join(",")
        }),
    )
}

pub fn read_matrix(path: &Path) -> Result<DistanceMatrix> {
    let rows = parse_numeric_rows(path)?;
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            bail!(
                "{}: row {} has {} fields, expected {n} (matrix must be square)",
                path.display(),
                i + 1,
                row.len()
            );
        }
        entries.extend_from_slice(row);
    }
    DistanceMatrix::new(n, entries).map_err(anyhow::Error::from)
}

pub fn write_embedding(path: &Path, e: &Embedding) -> Result<()> {
    write_rows(
        path,
        None,
        (0..e.n()).map(|i| {
            e.point(i)
                .iter()
                .map(|&v| fmt(v))
                .collect::<Vec<_>>()
                .join(",")
        }),
    )
}

pub fn read_embedding(path: &Path) -> Result<Embedding> {
    let rows = parse_numeric_rows(path)?;
    Embedding::from_rows(&rows).map_err(anyhow::Error::from)
}

/// `zero_seconds` replaces the wall-clock column with zeros so repeated
/// runs are byte-identical.
pub fn write_trace(path: &Path, trace: &ConvergenceTrace, zero_seconds: bool) -> Result<()> {
    write_rows(
        path,
        Some("iter,cost,seconds"),
        trace.records().iter().map(|r| {
            let secs = if zero_seconds { 0.0 } else { r.elapsed_seconds };
            format!("{},{},{}", r.iteration, fmt(r.cost), fmt(secs))
        }),
    )
}

pub fn write_jl_table(path: &Path, records: &[JlRecord]) -> Result<()> {
    write_rows(
        path,
        Some("k,trial,median_distortion,max_distortion"),
        records.iter().map(|r| {
            format!(
                "{},{},{},{}",
                r.k,
                r.trial,
                fmt(r.median_distortion),
                fmt(r.max_distortion)
            )
        }),
    )
}
