//! Column-oriented numeric tables and their CSV/JSON encodings.
//!
//! CSV cells use 17 significant digits in scientific notation and JSON uses
//! the shortest round-tripping representation, so both decode to the exact
//! `f64` values that were written. Missing cells (gaps at singularities) are
//! empty in CSV and `null` in JSON.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    fn check_finite(&self) -> Result<(), CliError> {
        for row in &self.rows {
            if let Some(x) = row.iter().flatten().find(|x| !x.is_finite()) {
                return Err(CliError::Format(format!("non-finite value {x} in table")));
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        self.check_finite()?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.map(format_number).unwrap_or_default()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, CliError> {
        let mut r = csv::Reader::from_reader(input);
        let columns: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
        let mut table = Table::new(columns);
        for record in r.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|cell| {
                    if cell.is_empty() {
                        Ok(None)
                    } else {
                        cell.parse::<f64>()
                            .map(Some)
                            .map_err(|e| CliError::Format(format!("bad number {cell:?}: {e}")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != table.columns.len() {
                return Err(CliError::Format("row width does not match header".into()));
            }
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        self.check_finite()?;
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }

    pub fn read_json<R: Read>(input: R) -> Result<Self, CliError> {
        Ok(serde_json::from_reader(input)?)
    }
}
