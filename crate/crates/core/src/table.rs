//! CSV output with a fixed numeric format.
//!
//! Reals are written with six significant digits, trailing zeros kept
//! (C's `%#.6g`), so output is byte-stable across platforms.

use std::fs;
use std::path::Path;

use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Real(x) => format_sig6(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// A row type with a fixed schema.
pub trait Record {
    fn header() -> Vec<&'static str>;
    fn cells(&self) -> Vec<Cell>;
}

pub fn format_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        format!("{x:.*}", (5 - exp) as usize)
    }
}

pub fn to_csv_string<R: Record>(rows: &[R]) -> Result<String> {
    if rows.is_empty() {
        return Err(invalid("refusing to write a CSV with no rows"));
    }
    let header = R::header();
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| invalid(format!("csv encoding failed: {e}"));
    writer.write_record(&header).map_err(csv_err)?;
    for row in rows {
        let cells = row.cells();
        if cells.len() != header.len() {
            return Err(invalid(format!(
                "row has {} cells but the header has {}",
                cells.len(),
                header.len()
            )));
        }
        writer.write_record(cells.iter().map(Cell::render)).map_err(csv_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| invalid(format!("csv encoding failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| invalid(format!("csv output is not UTF-8: {e}")))
}

/// Writes `rows` as UTF-8 CSV with LF line endings.
pub fn write_csv<R: Record>(rows: &[R], path: &Path) -> Result<()> {
    let text = to_csv_string(rows)?;
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
