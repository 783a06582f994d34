//! CSV tables with a metadata comment block.

use std::io::{self, Write};

/// Marker written for sweep points where no feasible allocation exists.
pub const INFEASIBLE: &str = "infeasible";
/// Marker for values that are not defined at a point (for example an
/// analytic outage whose closed form is ill-conditioned).
pub const NOT_AVAILABLE: &str = "na";

/// A cell of a sweep table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Infeasible,
    Missing,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Infeasible, Cell::Num)
    }

    pub fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Infeasible => INFEASIBLE.to_string(),
            Cell::Missing => NOT_AVAILABLE.to_string(),
        }
    }

    pub fn as_num(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Twelve significant digits in scientific notation.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.11e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    meta: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            meta: Vec::new(),
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric values of a column; non-numeric cells become `None`.
    pub fn values(&self, name: &str) -> Vec<Option<f64>> {
        let c = self.column(name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[c].as_num()).collect()
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (k, v) in &self.meta {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("utf-8")
    }
}
