//! Tabular output shared by every emitter: CSV with a header row, JSON arrays
//! of objects, and headerless two-column plot text.
//!
//! Real numbers are always written with 17 significant digits, which is
//! enough for a bit-exact round trip through any correctly rounded parser.

use std::io::{Read, Write};

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};

/// `x` with 17 significant digits in scientific notation.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
}

impl Cell {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Cell::Int(i) => i as f64,
            Cell::Real(x) => x,
        }
    }

    fn render(&self) -> String {
        match *self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => fmt17(x),
        }
    }

    fn parse(field: &str) -> Result<Cell> {
        let field = field.trim();
        if let Ok(i) = field.parse::<i64>() {
            return Ok(Cell::Int(i));
        }
        field
            .parse::<f64>()
            .map(Cell::Real)
            .map_err(|_| Error::Parse(format!("not a number: {field:?}")))
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Cell::Int(i) => s.serialize_i64(i),
            Cell::Real(x) if x.is_finite() => {
                let raw = RawValue::from_string(fmt17(x)).map_err(serde::ser::Error::custom)?;
                raw.serialize(s)
            }
            Cell::Real(_) => s.serialize_none(),
        }
    }
}

/// Named columns of numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx].as_f64()).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is ASCII")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Table> {
        let mut r = csv::Reader::from_reader(input);
        let columns = r.headers()?.iter().map(str::to_string).collect::<Vec<_>>();
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record?;
            if record.len() != columns.len() {
                return Err(Error::Parse(format!(
                    "row has {} fields, header has {}",
                    record.len(),
                    columns.len()
                )));
            }
            rows.push(record.iter().map(Cell::parse).collect::<Result<Vec<_>>>()?);
        }
        Ok(Table { columns, rows })
    }

    /// Two whitespace-separated columns, no header.
    pub fn write_plot<W: Write>(&self, mut out: W, x: usize, y: usize) -> Result<()> {
        for row in &self.rows {
            writeln!(out, "{} {}", row[x].render(), row[y].render())?;
        }
        Ok(())
    }
}

/// Serializes as a JSON array of objects keyed by column name, in column order.
impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [String], &'a [Cell]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0.iter().zip(self.1) {
                    map.serialize_entry(k, v)?;
                }
                map.end()
            }
        }
        let mut seq = s.serialize_seq(Some(self.rows.len()))?;
        for row in &self.rows {
            seq.serialize_element(&Row(&self.columns, row))?;
        }
        seq.end()
    }
}
