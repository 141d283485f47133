use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::Result;
use clap::ValueEnum;
use mldlab_core::{MldResult, Rational, Witness};
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Tex,
}

/// The structured output of one command.
#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    /// Wall-clock milliseconds per phase. Not part of the stable output.
    pub timing: Timing,
}

#[derive(Debug, Default, Serialize)]
pub struct Timing {
    pub workers: usize,
    pub phases_ms: BTreeMap<String, u128>,
}

impl Timing {
    pub fn new(workers: usize) -> Self {
        Timing { workers, phases_ms: BTreeMap::new() }
    }

    pub fn measure<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.phases_ms.insert(phase.to_string(), start.elapsed().as_millis());
        out
    }
}

/// A tabular view of a report: CSV header plus rows, and TeX rows.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub tex: Vec<String>,
}

pub fn render(doc: &ReportDocument, table: &Table, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Tex => {
            let mut s = String::new();
            for row in &table.tex {
                s.push_str(row);
                s.push('\n');
            }
            Ok(s)
        }
    }
}

pub fn tex_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else if q.is_negative() {
        format!("-\\frac{{{}}}{{{}}}", -q.numer(), q.denom())
    } else {
        format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
    }
}

pub fn tex_row(cells: &[String]) -> String {
    format!("{} \\\\", cells.join(" & "))
}

pub fn witness_text(w: Option<&Witness>) -> String {
    match w {
        Some(Witness::Group(j)) => format!("j={j}"),
        Some(Witness::Basis(i)) => format!("e{i}"),
        None => String::new(),
    }
}

pub fn mld_table(result: &MldResult) -> Table {
    let classification = serde_json::to_value(result.classification)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default();
    let value = result.value.to_string();
    let tex_value = match result.value.finite() {
        Some(q) => format!("${}$", tex_rational(q)),
        None => "$-\\infty$".to_string(),
    };
    let witness = witness_text(result.witness.as_ref());
    Table {
        header: vec!["mld", "witness", "classification"],
        rows: vec![vec![value, witness.clone(), classification.clone()]],
        tex: vec![tex_row(&[tex_value, witness, classification.replace('_', "\\_")])],
    }
}
