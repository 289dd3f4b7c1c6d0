use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use num_bigint::BigUint;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Int(BigUint),
    Signed(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Signed(n) => n.to_string(),
            Cell::Float(x) => format!("{x:.9}"),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // integers beyond u64 stay exact as strings
            Cell::Int(n) => u64::try_from(n).map_or_else(|_| Value::String(n.to_string()), Value::from),
            Cell::Signed(n) => Value::from(*n),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

macro_rules! cell_from_uint {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(n: $t) -> Self {
                Cell::Int(BigUint::from(n))
            }
        }
    )*};
}
cell_from_uint!(u32, u64, usize);

impl From<isize> for Cell {
    fn from(n: isize) -> Self {
        Cell::Signed(n as i64)
    }
}

impl From<BigUint> for Cell {
    fn from(n: BigUint) -> Self {
        Cell::Int(n)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Rows under fixed headers. A record is a one-row table shown as
/// `key  value` lines in table format.
pub struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    record: bool,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table {
            headers: headers.to_vec(),
            rows: Vec::new(),
            record: false,
        }
    }

    pub fn record(fields: Vec<(&'static str, Cell)>) -> Self {
        let (headers, row): (Vec<_>, Vec<_>) = fields.into_iter().unzip();
        Table {
            headers,
            rows: vec![row],
            record: true,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Table if self.record => Ok(self.render_record()),
            Format::Table => Ok(self.render_table()),
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_record(&self) -> String {
        let width = self.headers.iter().map(|h| h.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (h, c) in self.headers.iter().zip(&self.rows[0]) {
            let _ = writeln!(out, "{h:<width$}  {}", c.text());
        }
        out
    }

    fn render_table(&self) -> String {
        let texts: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::text).collect())
            .collect();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
        for row in &texts {
            for (w, t) in widths.iter_mut().zip(row) {
                *w = (*w).max(t.chars().count());
            }
        }
        let mut out = String::new();
        let line = |cells: Vec<&str>, out: &mut String| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(self.headers.clone(), &mut out);
        for row in &texts {
            line(row.iter().map(String::as_str).collect(), &mut out);
        }
        out
    }

    fn render_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    fn render_json(&self) -> Result<String> {
        let objects: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let m: Map<String, Value> = self
                    .headers
                    .iter()
                    .zip(row)
                    .map(|(h, c)| (h.to_string(), c.json()))
                    .collect();
                Value::Object(m)
            })
            .collect();
        let doc = if self.record {
            objects.into_iter().next().unwrap_or(Value::Null)
        } else {
            Value::Array(objects)
        };
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }
}
