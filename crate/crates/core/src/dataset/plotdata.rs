use std::path::Path;

use super::{format_real, DatasetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotFormat {
    Csv,
    JsonLines,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Real(f64),
    /// Absent value: empty in CSV, null in JSON.
    Missing,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Real)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

/// Named columns and rows of cells, written in insertion order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlotTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl PlotTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Panics if the row width differs from the column count.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match columns"
        );
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: PlotTable) {
        assert_eq!(self.columns, other.columns, "column sets must match");
        self.rows.extend(other.rows);
    }
}

pub fn render_plotdata(table: &PlotTable, format: PlotFormat) -> String {
    let mut out = String::new();
    match format {
        PlotFormat::Csv => {
            let header: Vec<String> = table.columns.iter().map(|c| csv_field(c)).collect();
            out.push_str(&header.join(","));
            out.push('\n');
            for row in &table.rows {
                let fields: Vec<String> = row
                    .iter()
                    .map(|cell| match cell {
                        Cell::Text(s) => csv_field(s),
                        Cell::Missing => String::new(),
                        other => number(other),
                    })
                    .collect();
                out.push_str(&fields.join(","));
                out.push('\n');
            }
        }
        PlotFormat::JsonLines => {
            for row in &table.rows {
                let fields: Vec<String> = table
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| {
                        let value = match cell {
                            Cell::Text(s) => json_string(s),
                            other => number(other),
                        };
                        format!("{}:{}", json_string(name), value)
                    })
                    .collect();
                out.push('{');
                out.push_str(&fields.join(","));
                out.push_str("}\n");
            }
        }
    }
    out
}

pub fn save_plotdata(
    table: &PlotTable,
    path: impl AsRef<Path>,
    format: PlotFormat,
) -> Result<(), DatasetError> {
    let path = path.as_ref();
    std::fs::write(path, render_plotdata(table, format)).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn number(cell: &Cell) -> String {
    match cell {
        Cell::Int(i) => i.to_string(),
        Cell::Real(v) if v.is_finite() => format_real(*v),
        // JSON has no NaN or infinity
        Cell::Real(_) | Cell::Missing => "null".to_string(),
        Cell::Text(s) => s.clone(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}
