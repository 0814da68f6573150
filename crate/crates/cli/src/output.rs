//! Tabular output in CSV, JSON or aligned text.

use std::fmt::Write as _;

use clap::ValueEnum;
use powerfree_core::format_real;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

/// One cell. Integers are kept as decimal strings so arbitrarily large
/// counts survive JSON unchanged.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(String),
    Real(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn int(x: impl ToString) -> Self {
        Cell::Int(x.to_string())
    }

    pub fn text(x: impl Into<String>) -> Self {
        Cell::Text(x.into())
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(s) | Cell::Text(s) => s.clone(),
            Cell::Real(x) => format_real(*x),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(s) => match s.parse::<u64>() {
                Ok(v) => v.into(),
                Err(_) => s.clone().into(),
            },
            Cell::Real(x) => real_json(*x),
            Cell::Text(s) => s.clone().into(),
            Cell::Empty => Value::Null,
        }
    }
}

/// A real rounded to 12 significant digits as a JSON number.
pub fn real_json(x: f64) -> Value {
    format_real(x)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(h, c)| (h.to_string(), c.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn aligned(&self) -> String {
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::render).collect())
            .collect();
        let widths: Vec<usize> = (0..self.header.len())
            .map(|i| {
                rendered
                    .iter()
                    .map(|r| r[i].len())
                    .chain([self.header[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |cells: Vec<&str>, out: &mut String| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(self.header.clone(), &mut out);
        for r in &rendered {
            line(r.iter().map(String::as_str).collect(), &mut out);
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => json_text(&self.json_value()),
            Format::Table => self.aligned(),
        }
    }
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::approx_constant)]
    fn formats() {
        let mut t = Table::new(&["n", "h"]);
        t.push(vec![Cell::int(1), Cell::Real(std::f64::consts::LN_2)]);
        t.push(vec![
            Cell::int("123456789012345678901234567890"),
            Cell::Empty,
        ]);
        assert_eq!(
            t.csv(),
            "n,h\n1,0.69314718056\n123456789012345678901234567890,\n"
        );
        let j = t.json_value();
        assert_eq!(j[0]["n"], 1);
        assert_eq!(j[0]["h"].as_f64(), Some(0.69314718056));
        assert_eq!(j[1]["n"], "123456789012345678901234567890");
        assert!(t
            .aligned()
            .starts_with("                             n              h\n"));
    }
}
