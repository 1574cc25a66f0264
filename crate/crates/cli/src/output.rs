//! CSV tables with a `#` metadata header and JSON sidecars.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use polaron_dicke_core::bath::BathProfile;
use serde::{Deserialize, Serialize};

use crate::commands::Task;
use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const GENERATOR: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fixed-width scientific notation with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// A named table of equally long columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Extra `key=value` metadata.
    pub meta: Vec<(String, String)>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn push(&mut self, row: &[f64]) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row.iter().map(|&x| fmt_num(x)).collect());
    }

    pub fn push_text(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: f64) -> &mut Self {
        self.meta.push((key.into(), fmt_num(value)));
        self
    }

    pub fn meta_text(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.meta.push((key.into(), value.into()));
        self
    }

    /// Numeric column by name, for tests and summaries.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[i].parse().ok()).collect()
    }
}

/// κ, ω_R and the collective rates of the profile a table was computed with.
pub fn profile_meta(profile: &BathProfile) -> Vec<(String, String)> {
    vec![
        ("temperature_k".into(), fmt_num(profile.temperature)),
        ("kappa".into(), fmt_num(profile.kappa)),
        ("reorg_energy_per_ps".into(), fmt_num(profile.reorg_energy)),
        ("gamma_per_ps".into(), fmt_num(profile.gamma)),
        ("rate_sym_per_ps".into(), fmt_num(profile.rate_sym)),
        ("rate_asym_per_ps".into(), fmt_num(profile.rate_asym)),
    ]
}

/// Everything needed to regenerate a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub generator: String,
    pub version: String,
    pub file: String,
    pub task: Task,
    pub config_sha256: String,
    /// Resolved configuration in canonical TOML.
    pub config: String,
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: usize,
}

/// Destination and provenance shared by all files of one command.
#[derive(Debug, Clone)]
pub struct Sink {
    pub dir: PathBuf,
    pub config: RunConfig,
    pub task: Task,
    hash: String,
}

impl Sink {
    pub fn new(dir: &Path, config: &RunConfig, task: Task) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Sink {
            dir: dir.to_path_buf(),
            config: config.clone(),
            hash: config.hash(),
            task,
        })
    }

    /// Writes `<name>.csv` and/or `<name>.json`; returns the paths written.
    pub fn write(&self, table: &Table, profile: Option<&BathProfile>) -> Result<Vec<PathBuf>, CliError> {
        let mut meta = vec![
            ("generator".to_string(), format!("{GENERATOR} {VERSION}")),
            ("task".to_string(), self.task.label()),
            ("config_sha256".to_string(), self.hash.clone()),
        ];
        if let Some(p) = profile {
            meta.extend(profile_meta(p));
        }
        meta.extend(table.meta.iter().cloned());

        let mut written = Vec::new();
        let csv_name = format!("{}.csv", table.name);
        if self.config.wants(Format::Csv) {
            let mut s = String::new();
            for (k, v) in &meta {
                writeln!(s, "# {k}={v}").expect("string write");
            }
            writeln!(s, "{}", table.columns.join(",")).expect("string write");
            for r in &table.rows {
                writeln!(s, "{}", r.join(",")).expect("string write");
            }
            let path = self.dir.join(&csv_name);
            fs::write(&path, s)?;
            written.push(path);
        }
        if self.config.wants(Format::Json) {
            let side = Sidecar {
                generator: GENERATOR.into(),
                version: VERSION.into(),
                file: csv_name,
                task: self.task.clone(),
                config_sha256: self.hash.clone(),
                config: self.config.canonical_toml(),
                metadata: meta,
                columns: table.columns.clone(),
                rows: table.rows.len(),
            };
            let path = self.dir.join(format!("{}.json", table.name));
            let mut text = serde_json::to_string_pretty(&side).expect("sidecar serializes");
            text.push('\n');
            fs::write(&path, text)?;
            written.push(path);
        }
        Ok(written)
    }
}

pub fn read_sidecar(path: &Path) -> Result<Sidecar, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
