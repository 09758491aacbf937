//! Combined-result reports and the `.meta.json` sidecar written next to them.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tcct_core::{CombinedResult, Method};

use crate::error::{CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Identifier printed by `--version` and embedded in every report.
pub fn build_id() -> String {
    format!("tcct {VERSION}")
}

/// Shortest round-trip text for a float, switching to exponent form for
/// very small or large magnitudes. `inf`, `-inf` and `NaN` pass through.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RowOutcome {
    Combined(CombinedResult),
    /// CCT with a weighted 0 and 1 together; no p-value exists.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub group: String,
    pub method: Method,
    pub n_tests: usize,
    pub outcome: RowOutcome,
}

impl ReportRow {
    pub fn p_value(&self) -> Option<f64> {
        match self.outcome {
            RowOutcome::Combined(r) => Some(r.p_value),
            RowOutcome::Indeterminate => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMeta {
    pub version: String,
    pub command: String,
    pub input: String,
    pub methods: Vec<String>,
    pub weights: String,
    pub seed: Option<u64>,
}

/// One row per group per method, plus run metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub rows: Vec<ReportRow>,
    pub meta: ReportMeta,
}

pub const REPORT_HEADER: [&str; 6] = [
    "group",
    "method",
    "n_tests",
    "statistic",
    "p_combined",
    "flags",
];

/// `<output>.meta.json`.
pub fn meta_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

impl RunReport {
    /// Sorts rows by `(group, method name)`.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            (a.group.as_str(), a.method.name()).cmp(&(b.group.as_str(), b.method.name()))
        });
    }

    pub fn find(&self, group: &str, method: Method) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.group == group && r.method == method)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let to_err = |e: csv::Error| CliError::Input(e.to_string());
        w.write_record(REPORT_HEADER).map_err(to_err)?;
        for row in &self.rows {
            let (stat, p, flags) = match row.outcome {
                RowOutcome::Combined(r) => (
                    fmt_f64(r.statistic),
                    fmt_f64(r.p_value),
                    r.flags.to_string(),
                ),
                RowOutcome::Indeterminate => {
                    (String::new(), String::new(), "INDETERMINATE".to_string())
                }
            };
            let n = row.n_tests.to_string();
            w.write_record([row.group.as_str(), row.method.name(), &n, &stat, &p, &flags])
                .map_err(to_err)?;
        }
        w.into_inner().map_err(|e| CliError::Input(e.to_string()))
    }

    /// Writes the CSV to `output` and the metadata to `<output>.meta.json`.
    pub fn write(&self, output: &Path) -> Result<()> {
        write_bytes(output, &self.to_csv()?)?;
        let mut json =
            serde_json::to_vec_pretty(&self.meta).map_err(|e| CliError::Input(e.to_string()))?;
        json.push(b'\n');
        write_bytes(&meta_path(output), &json)
    }
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::write(dir, e))?;
    }
    let mut f = File::create(path).map_err(|e| CliError::write(path, e))?;
    f.write_all(bytes).map_err(|e| CliError::write(path, e))
}
