//! Tab-separated tables plus one JSON metadata sidecar per run. Everything is
//! rendered in memory first and written only when the whole run succeeded.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use super::config::RunConfig;
use crate::error::{Error, Result};
use crate::signal::Trace;

/// Shortest round-trip representation, always in exponent form.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&v| num(v)).collect());
    }

    /// One row per grid time, one column per trace.
    pub fn from_traces(name: &str, columns: &[&str], traces: &[&Trace]) -> Result<Self> {
        if columns.len() != traces.len() + 1 {
            return Err(Error::Invariant("one column name per trace plus time".into()));
        }
        let grid = traces
            .first()
            .map(|t| t.grid)
            .ok_or_else(|| Error::Invariant("no traces".into()))?;
        if traces.iter().any(|t| t.grid != grid) {
            return Err(Error::GridMismatch("traces in one table must share a grid".into()));
        }
        let mut table = Table::new(name, columns);
        for k in 0..grid.len() {
            let mut row = vec![num(grid.time(k))];
            row.extend(traces.iter().map(|t| num(t.values[k])));
            table.push(row);
        }
        Ok(table)
    }

    pub fn file_name(&self) -> String {
        format!("{}.tsv", self.name)
    }

    pub fn to_tsv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .delimiter(b'\t')
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| Error::Io(e.to_string()))
    }
}

/// Everything a command produced, ready to be written.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub command: &'static str,
    pub tables: Vec<Table>,
    pub diagnostics: Map<String, Value>,
    /// Set by commands whose report lists failed checks.
    pub failures: Vec<String>,
}

impl RunOutput {
    pub fn new(command: &'static str) -> Self {
        RunOutput {
            command,
            tables: Vec::new(),
            diagnostics: Map::new(),
            failures: Vec::new(),
        }
    }

    pub fn diagnostic(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        let v = serde_json::to_value(value).map_err(|e| Error::Invariant(e.to_string()))?;
        self.diagnostics.insert(key.to_string(), v);
        Ok(())
    }

    /// Sidecar contents: command, full configuration, diagnostics and file list.
    pub fn metadata(&self, config: &RunConfig) -> Result<Vec<u8>> {
        #[derive(Serialize)]
        struct Meta<'a> {
            tool: &'static str,
            version: &'static str,
            command: &'static str,
            config: &'a RunConfig,
            diagnostics: &'a Map<String, Value>,
            failures: &'a [String],
            files: Vec<FileEntry<'a>>,
        }
        #[derive(Serialize)]
        struct FileEntry<'a> {
            name: String,
            columns: &'a [String],
            rows: usize,
        }
        let meta = Meta {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            config,
            diagnostics: &self.diagnostics,
            failures: &self.failures,
            files: self
                .tables
                .iter()
                .map(|t| FileEntry {
                    name: t.file_name(),
                    columns: &t.columns,
                    rows: t.rows.len(),
                })
                .collect(),
        };
        let mut bytes = serde_json::to_vec_pretty(&meta).map_err(|e| Error::Invariant(e.to_string()))?;
        bytes.push(b'\n');
        Ok(bytes)
    }

    /// Renders all files, then writes each one through a temporary name.
    pub fn write(&self, dir: &Path, config: &RunConfig) -> Result<Vec<PathBuf>> {
        let mut files = Vec::with_capacity(self.tables.len() + 1);
        for t in &self.tables {
            files.push((t.file_name(), t.to_tsv()?));
        }
        files.push((format!("{}.meta.json", self.command), self.metadata(config)?));
        fs::create_dir_all(dir)?;
        let mut written = Vec::with_capacity(files.len());
        for (name, bytes) in files {
            let path = dir.join(&name);
            let tmp = dir.join(format!(".{name}.tmp"));
            fs::write(&tmp, &bytes)?;
            fs::rename(&tmp, &path)?;
            written.push(path);
        }
        Ok(written)
    }
}
