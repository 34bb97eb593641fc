//! Table and record output as CSV or JSON, byte-stable across runs.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Rows of a table, or a single record when `record` is set (JSON emits an object then).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub record: bool,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), record: false }
    }

    pub fn record(fields: Vec<(&str, Cell)>) -> Self {
        let (columns, row): (Vec<String>, Vec<Cell>) = fields.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Self { columns, rows: vec![row], record: true }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Num(v) => format_number(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
        Cell::Missing => String::new(),
    }
}

fn json_cell(c: &Cell) -> String {
    match c {
        Cell::Num(v) if v.is_finite() => format_number(*v),
        Cell::Num(_) | Cell::Missing => "null".into(),
        Cell::Int(v) => v.to_string(),
        Cell::Text(s) => serde_json::to_string(s).expect("strings always serialize"),
        Cell::Bool(b) => b.to_string(),
    }
}

pub fn render_csv(t: &Table) -> std::io::Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&t.columns)?;
    for row in &t.rows {
        w.write_record(row.iter().map(csv_cell))?;
    }
    w.into_inner().map_err(|e| e.into_error())
}

fn json_object(columns: &[String], row: &[Cell], indent: &str, out: &mut String) {
    out.push_str("{\n");
    for (i, (k, v)) in columns.iter().zip(row).enumerate() {
        let sep = if i + 1 == columns.len() { "" } else { "," };
        let key = serde_json::to_string(k).expect("strings always serialize");
        let _ = writeln!(out, "{indent}  {key}: {}{sep}", json_cell(v));
    }
    out.push_str(indent);
    out.push('}');
}

pub fn render_json(t: &Table) -> Vec<u8> {
    let mut out = String::new();
    if t.record {
        let empty = Vec::new();
        json_object(&t.columns, t.rows.first().unwrap_or(&empty), "", &mut out);
    } else {
        out.push('[');
        for (i, row) in t.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n  " } else { ",\n  " });
            json_object(&t.columns, row, "  ", &mut out);
        }
        out.push_str(if t.rows.is_empty() { "]" } else { "\n]" });
    }
    out.push('\n');
    out.into_bytes()
}

pub fn render(t: &Table, format: Format) -> std::io::Result<Vec<u8>> {
    match format {
        Format::Csv => render_csv(t),
        Format::Json => Ok(render_json(t)),
    }
}

/// Write the table to `path`, or to stdout when `path` is None.
pub fn emit(t: &Table, format: Format, path: Option<&Path>) -> std::io::Result<()> {
    let bytes = render(t, format)?;
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, bytes)
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["t", "D"]);
        assert_eq!(render_csv(&t).unwrap(), b"t,D\n");
        assert_eq!(render_json(&t), b"[]\n");
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
    }
}
