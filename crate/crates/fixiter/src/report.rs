//! CSV and JSON report emission.
//!
//! Numbers are written in the shortest decimal form that parses back to the
//! same `f64`, so re-reading a report reproduces the in-memory values exactly.

use std::io::{Read, Write};

use serde::Serialize;

use crate::error::Result;

/// Shortest round-trip decimal for `v`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// Formats an optional value; `None` becomes an empty cell.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Header plus string cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        CsvTable { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        wtr.write_record(&self.header)?;
        for row in &self.rows {
            wtr.write_record(row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn read_from<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers()?.iter().map(str::to_string).collect();
        let rows = rdr
            .records()
            .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<Vec<Vec<String>>, _>>()?;
        Ok(CsvTable { header, rows })
    }

    /// Parses column `name` as numbers; empty cells become `None`.
    pub fn numeric_column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.header.iter().position(|h| h == name)?;
        self.rows
            .iter()
            .map(|r| {
                let cell = r.get(idx)?;
                if cell.is_empty() {
                    Some(None)
                } else {
                    cell.parse().ok().map(Some)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl InvariantCheck {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        InvariantCheck { name: name.into(), passed, detail: detail.into() }
    }
}

/// `{config, results, invariant_checks}` in that key order.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub config: &'a C,
    pub results: &'a R,
    pub invariant_checks: &'a [InvariantCheck],
}

pub fn to_json<C: Serialize, R: Serialize>(config: &C, results: &R, checks: &[InvariantCheck]) -> Result<String> {
    let env = Envelope { config, results, invariant_checks: checks };
    let mut s = serde_json::to_string_pretty(&env)?;
    s.push('\n');
    Ok(s)
}
