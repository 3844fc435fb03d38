// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::ScenarioConfig;
use super::inputs::InputRecord;
use crate::engine::Tomogram;
use crate::error::{Error, Result};

/// One table entry. Complex quantities are stored as separate `_re` / `_im`
/// columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            // `{:?}` keeps the shortest round-tripping representation
            Cell::Float(x) => write!(f, "{x:?}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Float(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedTomogram {
    pub name: String,
    pub tomogram: Tomogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub timestamp_unix: u64,
    pub seed: u64,
    /// SHA-256 of the config's canonical JSON.
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub config: ScenarioConfig,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    #[serde(default)]
    pub summary: BTreeMap<String, f64>,
    #[serde(default)]
    pub tomograms: Vec<NamedTomogram>,
    /// Inputs drawn for each repeat.
    #[serde(default)]
    pub inputs: Vec<Vec<InputRecord>>,
    pub provenance: Provenance,
}

pub fn config_hash(config: &ScenarioConfig) -> Result<String> {
    let bytes = serde_json::to_vec(config).map_err(|e| Error::Serialization(e.to_string()))?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

impl ScenarioResult {
    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].clone()).collect())
    }

    /// Numeric column, skipping text entries.
    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        Some(self.column(name)?.iter().filter_map(Cell::as_f64).collect())
    }

    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Serialization(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::invalid(format!("unknown output format `{other}`"))),
        }
    }
}

/// CSV gets a trailing `seed` column; tomograms and the config echo only
/// appear in JSON.
pub fn render(result: &ScenarioResult, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(result).map_err(|e| Error::Serialization(e.to_string())),
        OutputFormat::Csv => {
            let ser = |e: csv::Error| Error::Serialization(e.to_string());
            let mut w = csv::Writer::from_writer(Vec::new());
            let seed = result.provenance.seed.to_string();
            w.write_record(result.columns.iter().map(String::as_str).chain(["seed"])).map_err(ser)?;
            for row in &result.rows {
                let cells: Vec<String> = row.iter().map(Cell::to_string).chain([seed.clone()]).collect();
                w.write_record(&cells).map_err(ser)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
        }
    }
}

pub fn emit(result: &ScenarioResult, format: OutputFormat, path: &Path) -> Result<()> {
    let text = render(result, format)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
