//! Rectangular numeric tables rendered as deterministic CSV.

use crate::error::{Error, Result};

/// Column-labeled table of f64 values. Rendering is byte-deterministic:
/// every value prints with 9 significant digits in scientific notation and
/// negative zero is normalized away.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Self {
        CsvTable {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch {
                expected: self.columns.len(),
                got: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn render(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for &v in row {
                if !first {
                    out.push(',');
                }
                out.push_str(&format_value(v));
                first = false;
            }
            out.push('\n');
        }
        out
    }
}

/// 9 significant digits, scientific notation, -0 folded into 0.
pub fn format_value(value: f64) -> String {
    let v = if value == 0.0 { 0.0 } else { value };
    format!("{v:.8e}")
}
