use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, ExperimentError};

/// One CSV table; cells are stored already formatted.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }
}

// cells in the shortest round-trip representation
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$(format!("{}", $x)),*] };
}
pub(crate) use row;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub pipeline: String,
    pub version: String,
    pub config_hash: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub tables: Vec<Table>,
    pub summary: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    /// Extra JSON files written next to the tables, keyed by file name.
    pub documents: BTreeMap<String, serde_json::Value>,
    pub runtime_secs: f64,
}

impl Report {
    pub fn new(pipeline: &str, cfg: &ExperimentConfig) -> Self {
        Report {
            pipeline: pipeline.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config_hash: cfg.hash(),
            seed: cfg.seed,
            config: cfg.clone(),
            tables: Vec::new(),
            summary: BTreeMap::new(),
            checks: Vec::new(),
            documents: BTreeMap::new(),
            runtime_secs: 0.0,
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn stat(&mut self, key: &str, value: f64) {
        self.summary.insert(key.into(), value);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Summary as a table, so every reported number has a row.
    fn summary_table(&self) -> Table {
        let mut t = Table::new("summary", &["key", "value"]);
        for (k, v) in &self.summary {
            t.push(vec![k.clone(), format!("{v}")]);
        }
        t
    }

    /// CSV bytes of a table with its metadata header; no timestamps.
    pub fn csv_bytes(&self, table: &Table) -> Result<Vec<u8>, ExperimentError> {
        let mut out = Vec::new();
        writeln!(out, "# henon-renorm {}", self.version)?;
        writeln!(out, "# pipeline: {}", self.pipeline)?;
        writeln!(out, "# table: {}", table.name)?;
        writeln!(out, "# config_sha256: {}", self.config_hash)?;
        writeln!(out, "# seed: {}", self.seed)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&table.columns)?;
        for r in &table.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| ExperimentError::Io(e.into_error()))
    }

    /// Writes `<pipeline>_<table>.csv` for every table plus `<pipeline>_report.json`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, ExperimentError> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        let summary = self.summary_table();
        for t in self.tables.iter().chain(std::iter::once(&summary)) {
            let p = dir.join(format!("{}_{}.csv", self.pipeline, t.name));
            std::fs::write(&p, self.csv_bytes(t)?)?;
            paths.push(p);
        }
        for (name, doc) in &self.documents {
            let p = dir.join(name);
            let mut bytes = serde_json::to_vec_pretty(doc)?;
            bytes.push(b'\n');
            std::fs::write(&p, bytes)?;
            paths.push(p);
        }
        let stamp =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let meta = serde_json::json!({
            "pipeline": self.pipeline,
            "version": self.version,
            "config_sha256": self.config_hash,
            "seed": self.seed,
            "config": self.config,
            "tables": paths.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect::<Vec<_>>(),
            "summary": self.summary,
            "checks": self.checks,
            "passed": self.passed(),
            "runtime_secs": self.runtime_secs,
            "unix_time": stamp,
        });
        let p = dir.join(format!("{}_report.json", self.pipeline));
        std::fs::write(&p, serde_json::to_vec_pretty(&meta)?)?;
        paths.push(p);
        Ok(paths)
    }
}
