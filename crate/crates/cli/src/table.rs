use std::fmt::Write as _;

use crate::args::Format;

/// A rectangular numeric table with a parameter-echo comment line.
pub struct Table {
    pub comment: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(comment: String, columns: Vec<&'static str>) -> Self {
        Self {
            comment,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        let sep = format.separator();
        let mut out = String::new();
        writeln!(out, "# {}", self.comment).unwrap();
        out.push_str(&self.columns.join(&sep.to_string()));
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(sep);
                }
                write_number(&mut out, *v);
            }
            out.push('\n');
        }
        out
    }
}

/// Shortest round-trip form, in exponent notation outside `[1e-4, 1e15)`.
fn write_number(out: &mut String, v: f64) {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        write!(out, "{v}").unwrap();
    } else {
        write!(out, "{v:e}").unwrap();
    }
}

/// Parses rendered output back into rows, checking the header.
pub fn parse(text: &str, format: Format, columns: &[&str]) -> Result<Vec<Vec<f64>>, String> {
    let sep = format.separator();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().ok_or("missing header")?;
    let got: Vec<&str> = header.split(sep).collect();
    if got != columns {
        return Err(format!("header {got:?} does not match {columns:?}"));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let row = line
                .split(sep)
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| format!("row {}: {f:?}: {e}", i + 1))
                })
                .collect::<Result<Vec<f64>, String>>()?;
            if row.len() != columns.len() {
                return Err(format!("row {} has {} fields", i + 1, row.len()));
            }
            Ok(row)
        })
        .collect()
}
