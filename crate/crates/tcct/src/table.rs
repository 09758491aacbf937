//! CSV ingestion for grouped p-values and long-format longitudinal data.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};

use crate::error::{CliError, Result};

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| CliError::Open {
        path: path.to_path_buf(),
        source,
    })
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    ReaderBuilder::new().trim(Trim::All).from_reader(input)
}

fn column(headers: &StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| CliError::MissingColumn(name.to_string()))
}

fn line_of(record: &StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn csv_error(err: csv::Error) -> CliError {
    let row = err.position().map_or(0, |p| p.line());
    CliError::data(row, err.to_string())
}

fn number(record: &StringRecord, idx: usize, what: &str) -> Result<f64> {
    let raw = &record[idx];
    raw.parse::<f64>()
        .map_err(|_| CliError::data(line_of(record), format!("{what} `{raw}` is not a number")))
}

/// Column names used by [`read_grouped`].
#[derive(Debug, Clone)]
pub struct GroupedColumns {
    pub group: String,
    pub p: String,
    pub weight: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupedRow {
    pub group: String,
    pub p: f64,
    pub weight: Option<f64>,
    /// Line in the source file, header being line 1.
    pub line: u64,
}

/// P-values keyed by a group label, e.g. SNPs keyed by chromosome.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroupedPTable {
    pub rows: Vec<GroupedRow>,
}

/// One group's p-values in file order, with weights if a weight column was read.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Group {
    pub p: Vec<f64>,
    pub weights: Option<Vec<f64>>,
}

impl GroupedPTable {
    /// Groups in lexicographic order of their label.
    pub fn groups(&self) -> BTreeMap<&str, Group> {
        let mut out: BTreeMap<&str, Group> = BTreeMap::new();
        for row in &self.rows {
            let g = out.entry(row.group.as_str()).or_default();
            g.p.push(row.p);
            if let Some(w) = row.weight {
                g.weights.get_or_insert_with(Vec::new).push(w);
            }
        }
        out
    }
}

pub fn read_grouped(path: &Path, cols: &GroupedColumns) -> Result<GroupedPTable> {
    parse_grouped(open(path)?, cols)
}

pub fn parse_grouped<R: Read>(input: R, cols: &GroupedColumns) -> Result<GroupedPTable> {
    let mut rdr = reader(input);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let g_idx = column(&headers, &cols.group)?;
    let p_idx = column(&headers, &cols.p)?;
    let w_idx = cols
        .weight
        .as_deref()
        .map(|w| column(&headers, w))
        .transpose()?;

    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = line_of(&record);
        let p = number(&record, p_idx, "p-value")?;
        if !(0.0..=1.0).contains(&p) {
            return Err(CliError::data(line, format!("p-value {p} outside [0, 1]")));
        }
        let weight = match w_idx {
            Some(i) => {
                let w = number(&record, i, "weight")?;
                if !(w.is_finite() && w >= 0.0) {
                    return Err(CliError::data(
                        line,
                        format!("weight {w} must be finite and nonnegative"),
                    ));
                }
                Some(w)
            }
            None => None,
        };
        rows.push(GroupedRow {
            group: record[g_idx].to_string(),
            p,
            weight,
            line,
        });
    }
    if rows.is_empty() {
        return Err(CliError::Input("no data rows".into()));
    }
    Ok(GroupedPTable { rows })
}

/// Fixed column names of a longitudinal table.
pub const LONGITUDINAL_COLUMNS: [&str; 5] =
    ["unit", "timepoint", "feature", "response", "covariate"];

#[derive(Debug, Clone, PartialEq)]
pub struct LongitudinalRow {
    pub unit: String,
    pub timepoint: i64,
    pub feature: String,
    pub response: f64,
    pub covariate: f64,
}

/// Long-format measurements: one row per `(unit, timepoint, feature)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LongitudinalTable {
    pub rows: Vec<LongitudinalRow>,
}

/// Responses and covariates of one `(feature, timepoint)` cell.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Cell {
    pub response: Vec<f64>,
    pub covariate: Vec<f64>,
}

impl LongitudinalTable {
    /// Cells ordered by feature label, then timepoint.
    pub fn cells(&self) -> BTreeMap<(&str, i64), Cell> {
        let mut out: BTreeMap<(&str, i64), Cell> = BTreeMap::new();
        for row in &self.rows {
            let c = out
                .entry((row.feature.as_str(), row.timepoint))
                .or_default();
            c.response.push(row.response);
            c.covariate.push(row.covariate);
        }
        out
    }

    /// Distinct covariate values, sorted.
    pub fn covariate_levels(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.rows.iter().map(|r| r.covariate).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

pub fn read_longitudinal(path: &Path) -> Result<LongitudinalTable> {
    parse_longitudinal(open(path)?)
}

pub fn parse_longitudinal<R: Read>(input: R) -> Result<LongitudinalTable> {
    let mut rdr = reader(input);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let idx: Vec<usize> = LONGITUDINAL_COLUMNS
        .iter()
        .map(|c| column(&headers, c))
        .collect::<Result<_>>()?;

    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = line_of(&record);
        let raw_t = &record[idx[1]];
        let timepoint = raw_t
            .parse::<i64>()
            .map_err(|_| CliError::data(line, format!("timepoint `{raw_t}` is not an integer")))?;
        let response = number(&record, idx[3], "response")?;
        let covariate = number(&record, idx[4], "covariate")?;
        if !response.is_finite() || !covariate.is_finite() {
            return Err(CliError::data(
                line,
                "response and covariate must be finite",
            ));
        }
        let row = LongitudinalRow {
            unit: record[idx[0]].to_string(),
            timepoint,
            feature: record[idx[2]].to_string(),
            response,
            covariate,
        };
        if !seen.insert((row.unit.clone(), row.timepoint, row.feature.clone())) {
            return Err(CliError::data(
                line,
                format!(
                    "duplicate (unit, timepoint, feature) = ({}, {}, {})",
                    row.unit, row.timepoint, row.feature
                ),
            ));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Input("no data rows".into()));
    }
    Ok(LongitudinalTable { rows })
}
