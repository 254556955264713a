//! Tables rendered as CSV (12 significant digits) or JSON (17).
//!
//! JSON numbers are written with the same `%g` formatter as CSV so both
//! formats carry identical values; non-finite reals become the strings
//! `"inf"`, `"-inf"` and `"nan"`.

use std::fmt::Write as _;

use gls_core::format::format_sig;
use gls_core::verify::Report;

pub const CSV_DIGITS: usize = 12;
pub const JSON_DIGITS: usize = 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Real(x) => format_sig(*x, CSV_DIGITS),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Real(x) if x.is_finite() => format_sig(*x, JSON_DIGITS),
            Cell::Real(x) => json_string(&format_sig(*x, JSON_DIGITS)),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => json_string(s),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn csv_field(s: &str) -> String {
        if s.contains([',', '"', '\n']) {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|c| Self::csv_field(&c.csv())).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of row objects.
    pub fn to_json(&self) -> String {
        let mut out = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n  {" } else { ",\n  {" });
            for (j, (col, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{}: {}", json_string(col), cell.json());
            }
            out.push('}');
        }
        out.push_str(if self.rows.is_empty() { "]\n" } else { "\n]\n" });
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Rows as a table; checks as `{version, rows, checks}` in JSON.
pub fn render_report(report: &Report, format: Format) -> String {
    let mut table = Table::new(&[
        "family", "param", "k", "lambda", "value", "target", "metric",
    ]);
    for r in &report.rows {
        table.push(vec![
            r.family.clone().into(),
            r.param.clone().into(),
            Cell::Int(r.k.into()),
            r.lambda.into(),
            r.value.into(),
            r.target.into(),
            r.metric.into(),
        ]);
    }
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut checks = Table::new(&["name", "pass", "detail"]);
            for c in &report.checks {
                checks.push(vec![
                    c.name.clone().into(),
                    Cell::Bool(c.pass),
                    c.detail.clone().into(),
                ]);
            }
            format!(
                "{{\"version\": {}, \"rows\": {}, \"checks\": {}}}\n",
                report.version,
                table.to_json().trim_end(),
                checks.to_json().trim_end()
            )
        }
    }
}

/// A single value, printed bare in either format.
pub fn render_scalar(x: f64, format: Format) -> String {
    match format {
        Format::Csv => format!("{}\n", format_sig(x, CSV_DIGITS)),
        Format::Json => format!("{}\n", Cell::Real(x).json()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_rendering() {
        let mut t = Table::new(&["p", "mu"]);
        t.push(vec![3.0.into(), (1.0f64 / 12.0).into()]);
        t.push(vec![f64::INFINITY.into(), 0.5.into()]);
        assert_eq!(t.to_csv(), "p,mu\n3,0.0833333333333\ninf,0.5\n");
        let json = t.to_json();
        assert!(json.contains("\"p\": 3, \"mu\": 0.083333333333333329"));
        assert!(json.contains("\"p\": \"inf\""));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 2);
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let mut t = Table::new(&["psi"]);
        t.push(vec!["const:1@(2,6)".into()]);
        assert_eq!(t.to_csv(), "psi\n\"const:1@(2,6)\"\n");
    }

    #[test]
    fn scalars() {
        assert_eq!(render_scalar(6.0, Format::Csv), "6\n");
        assert_eq!(render_scalar(f64::INFINITY, Format::Json), "\"inf\"\n");
    }
}
