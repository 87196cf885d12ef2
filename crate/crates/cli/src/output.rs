use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use hecke_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A command result: fixed CSV columns plus a JSON document.
pub struct Output {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
}

/// Shortest round-trip text for a float.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

impl Output {
    pub fn new(columns: Vec<&'static str>, json: Value) -> Self {
        Self { columns, rows: Vec::new(), json }
    }

    pub fn row(mut self, r: Vec<String>) -> Self {
        debug_assert_eq!(r.len(), self.columns.len());
        self.rows.push(r);
        self
    }

    pub fn write<W: Write>(&self, format: Format, mut w: W) -> Result<()> {
        match format {
            Format::Csv => {
                let mut c = csv::Writer::from_writer(&mut w);
                let io = |e: csv::Error| Error::Io(e.to_string());
                c.write_record(&self.columns).map_err(io)?;
                for r in &self.rows {
                    c.write_record(r).map_err(io)?;
                }
                c.flush()?;
            }
            Format::Json => {
                let s = serde_json::to_string_pretty(&self.json).map_err(|e| Error::Io(e.to_string()))?;
                writeln!(w, "{s}")?;
            }
        }
        Ok(())
    }
}
