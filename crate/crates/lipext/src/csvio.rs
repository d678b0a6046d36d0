//! CSV files written by a run.
//!
//! Floats use the shortest decimal that parses back to the same `f64`.
//!
//! * Map tables: `address, x1..xd, u1..ud, mesh, table`. One row per net
//!   point; `address` is the canonical source address, `x` the source point,
//!   `u` its image, `mesh` the net mesh and `table` the provenance.
//! * Nets: `address, x1..xd`.
//! * Curves: one row per stage, columns named in the header.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use lipext_core::extension::{MapTable, TableEntry};
use lipext_core::Point;

use crate::error::{HarnessError, Result};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(HarnessError::io(dir))?;
    }
    let file = File::create(path).map_err(HarnessError::io(path))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> HarnessError + '_ {
    move |e| HarnessError::Input(format!("{}: {e}", path.display()))
}

fn finish(mut w: csv::Writer<File>, path: &Path) -> Result<()> {
    w.flush().map_err(HarnessError::io(path))
}

fn coords(prefix: char, d: usize) -> impl Iterator<Item = String> {
    (1..=d).map(move |i| format!("{prefix}{i}"))
}

pub fn write_table(path: &Path, table: &MapTable) -> Result<()> {
    let d = table.entries.first().map_or(1, |e| e.source.len());
    let e = table.entries.first().map_or(1, |e| e.image.len());
    let mut w = writer(path)?;
    let header: Vec<String> =
        std::iter::once("address".to_string()).chain(coords('x', d)).chain(coords('u', e)).chain(["mesh".into(), "table".into()]).collect();
    w.write_record(&header).map_err(csv_err(path))?;
    for entry in &table.entries {
        let row: Vec<String> = std::iter::once(entry.key.clone())
            .chain(entry.source.iter().map(|&v| fmt_f64(v)))
            .chain(entry.image.iter().map(|&v| fmt_f64(v)))
            .chain([fmt_f64(table.mesh), table.provenance.clone()])
            .collect();
        w.write_record(&row).map_err(csv_err(path))?;
    }
    finish(w, path)
}

fn parse_f64(s: &str, path: &Path) -> Result<f64> {
    s.trim().parse().map_err(|_| HarnessError::Input(format!("{}: bad number `{s}`", path.display())))
}

fn open(path: &Path) -> Result<(csv::StringRecord, Vec<csv::StringRecord>)> {
    let mut r = csv::Reader::from_path(path).map_err(|e| match e.kind() {
        csv::ErrorKind::Io(_) => HarnessError::Input(format!("cannot read {}: {e}", path.display())),
        _ => csv_err(path)(e),
    })?;
    let header = r.headers().map_err(csv_err(path))?.clone();
    let rows = r.records().collect::<std::result::Result<Vec<_>, _>>().map_err(csv_err(path))?;
    Ok((header, rows))
}

fn count(header: &csv::StringRecord, prefix: char) -> usize {
    header.iter().filter(|h| h.starts_with(prefix) && h[1..].parse::<usize>().is_ok()).count()
}

pub fn read_table(path: &Path) -> Result<MapTable> {
    let (header, rows) = open(path)?;
    let (d, e) = (count(&header, 'x'), count(&header, 'u'));
    if d == 0 || e == 0 || header.len() != d + e + 3 || &header[0] != "address" {
        return Err(HarnessError::Input(format!("{}: expected columns address, x.., u.., mesh, table", path.display())));
    }
    let mut entries = Vec::with_capacity(rows.len());
    let mut mesh = None;
    let mut provenance = String::new();
    for row in &rows {
        let nums = (1..=d + e + 1).map(|i| parse_f64(&row[i], path)).collect::<Result<Vec<_>>>()?;
        mesh = Some(nums[d + e]);
        provenance = row[d + e + 2].to_string();
        entries.push(TableEntry { key: row[0].to_string(), source: nums[..d].to_vec(), image: nums[d..d + e].to_vec() });
    }
    let mesh = mesh.ok_or_else(|| HarnessError::Input(format!("{}: empty table", path.display())))?;
    MapTable::new(entries, mesh, provenance).map_err(|err| HarnessError::Input(format!("{}: {err}", path.display())))
}

pub fn write_net(path: &Path, keys: &[String], points: &[Point]) -> Result<()> {
    let d = points.first().map_or(1, Vec::len);
    let mut w = writer(path)?;
    let header: Vec<String> = std::iter::once("address".to_string()).chain(coords('x', d)).collect();
    w.write_record(&header).map_err(csv_err(path))?;
    for (k, p) in keys.iter().zip(points) {
        let row: Vec<String> = std::iter::once(k.clone()).chain(p.iter().map(|&v| fmt_f64(v))).collect();
        w.write_record(&row).map_err(csv_err(path))?;
    }
    finish(w, path)
}

pub fn read_net(path: &Path) -> Result<Vec<Point>> {
    let (header, rows) = open(path)?;
    let d = count(&header, 'x');
    if d == 0 || header.len() != d + 1 {
        return Err(HarnessError::Input(format!("{}: expected columns address, x..", path.display())));
    }
    rows.iter().map(|row| (1..=d).map(|i| parse_f64(&row[i], path)).collect()).collect()
}

/// Writes a header and rows of already formatted cells.
pub fn write_rows(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header).map_err(csv_err(path))?;
    for r in rows {
        w.write_record(r).map_err(csv_err(path))?;
    }
    finish(w, path)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(HarnessError::io(dir))?;
    }
    let mut f = File::create(path).map_err(HarnessError::io(path))?;
    f.write_all(text.as_bytes()).map_err(HarnessError::io(path))
}
