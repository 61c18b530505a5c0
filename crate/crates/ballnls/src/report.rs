//! CSV tables and JSON summaries.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Reals use 17 significant digits, which round-trips every `f64`.
pub fn real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(&'static str),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(file: impl Into<String>, header: &[&'static str]) -> Self {
        Self {
            file: file.into(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Int(v) => write!(out, "{v}").unwrap(),
                    Cell::Real(v) => out.push_str(&real(*v)),
                    Cell::Text(v) => out.push_str(v),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Files produced by one run.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub tables: Vec<Table>,
    /// Extra JSON documents, e.g. cached sweeps, by file name.
    pub documents: Vec<(String, serde_json::Value)>,
    pub results: serde_json::Value,
}

#[derive(Serialize)]
struct Summary<'a, C: Serialize> {
    experiment: &'a str,
    effective_config: &'a C,
    outputs: Vec<&'a str>,
    results: &'a serde_json::Value,
}

pub const SUMMARY_FILE: &str = "summary.json";

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn pretty<T: Serialize>(value: &T, path: &Path) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    s.push('\n');
    Ok(s)
}

/// Writes every artifact plus `summary.json` and returns the written paths.
pub fn write_all<C: Serialize>(
    dir: &Path,
    experiment: &str,
    effective_config: &C,
    artifacts: &Artifacts,
) -> CliResult<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for table in &artifacts.tables {
        let path = dir.join(&table.file);
        write_file(&path, &table.render())?;
        written.push(path);
    }
    for (name, doc) in &artifacts.documents {
        let path = dir.join(name);
        write_file(&path, &pretty(doc, &path)?)?;
        written.push(path);
    }
    let outputs = artifacts
        .tables
        .iter()
        .map(|t| t.file.as_str())
        .chain(artifacts.documents.iter().map(|d| d.0.as_str()))
        .collect();
    let summary = Summary {
        experiment,
        effective_config,
        outputs,
        results: &artifacts.results,
    };
    let path = dir.join(SUMMARY_FILE);
    write_file(&path, &pretty(&summary, &path)?)?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for v in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02214076e23,
            std::f64::consts::PI,
        ] {
            let s = real(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(real(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn table_rendering() {
        let mut t = Table::new("x.csv", &["tau", "count"]);
        t.push(vec![Cell::Int(61), Cell::Int(2)]);
        t.push(vec![Cell::Int(62), 0.5.into()]);
        assert_eq!(t.render(), "tau,count\n61,2\n62,5.0000000000000000e-1\n");
    }
}
