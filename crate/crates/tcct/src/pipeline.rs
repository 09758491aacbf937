//! Grouped and longitudinal combination pipelines behind the `combine` and
//! `longitudinal` commands.

use tcct_core::combine::combine;
use tcct_core::elementary::{ols_slope_test, two_part_test, Sample, TestOutcome};
use tcct_core::{Error, Method, PValueVector, WeightVector};

use crate::error::{CliError, Result};
use crate::report::{fmt_f64, ReportRow, RowOutcome};
use crate::table::{Group, GroupedPTable, LongitudinalTable};

/// Runs every method on one vector of p-values.
pub fn combine_vector(
    group: &str,
    p: Vec<f64>,
    weights: Option<&WeightVector>,
    methods: &[Method],
) -> Result<Vec<ReportRow>> {
    let n_tests = p.len();
    let p = PValueVector::new(p)?;
    methods
        .iter()
        .map(|&method| {
            let outcome = match combine(method, &p, weights) {
                Ok(r) => RowOutcome::Combined(r),
                Err(Error::IndeterminateStatistic) => RowOutcome::Indeterminate,
                Err(e) => return Err(e.into()),
            };
            Ok(ReportRow {
                group: group.to_string(),
                method,
                n_tests,
                outcome,
            })
        })
        .collect()
}

/// Supplied weights normalized to sum 1 within the group. Equal weights
/// collapse to the uniform default so they reproduce the unweighted result
/// bit for bit.
fn group_weights(label: &str, g: &Group) -> Result<Option<WeightVector>> {
    let Some(raw) = &g.weights else {
        return Ok(None);
    };
    if raw.iter().all(|&w| w == raw[0]) && raw[0] > 0.0 {
        return Ok(None);
    }
    WeightVector::normalized(raw)
        .map(Some)
        .map_err(|e| CliError::Input(format!("group `{label}`: {e}")))
}

/// One row per group and method; groups in lexicographic order.
pub fn combine_groups(table: &GroupedPTable, methods: &[Method]) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for (label, g) in table.groups() {
        let w = group_weights(label, &g)?;
        rows.extend(combine_vector(label, g.p, w.as_ref(), methods)?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Linear regression of the response on the covariate.
    OnePart,
    /// Logistic test on zero / nonzero plus linear test on the nonzero values.
    TwoPart,
}

/// One elementary test of the longitudinal pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub feature: String,
    pub timepoint: i64,
    /// `linear`, `prevalence` or `magnitude`.
    pub part: &'static str,
    pub n: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LongitudinalRun {
    pub cells: Vec<CellResult>,
    pub rows: Vec<ReportRow>,
}

fn degenerate_note(e: &Error) -> &'static str {
    match e {
        Error::ConstantCovariate => "CONSTANT_COVARIATE",
        Error::DegenerateSample => "CONSTANT_RESPONSE",
        _ => "DEGENERATE_CELL",
    }
}

/// Group label used for the single pooled row per method.
pub const POOLED_GROUP: &str = "all";

/// Tests every `(feature, timepoint)` cell and pools all resulting p-values.
///
/// Cells whose test cannot be computed contribute `p = 1` with a note and
/// never abort the run.
pub fn run_longitudinal(
    table: &LongitudinalTable,
    mode: Mode,
    methods: &[Method],
) -> Result<LongitudinalRun> {
    if mode == Mode::TwoPart && table.covariate_levels().len() > 2 {
        return Err(CliError::Input(
            "two-part mode needs a binary covariate".into(),
        ));
    }
    let mut cells = Vec::new();
    for ((feature, timepoint), cell) in table.cells() {
        let n = cell.response.len();
        let push = |cells: &mut Vec<CellResult>, part, out: &TestOutcome| {
            cells.push(CellResult {
                feature: feature.to_string(),
                timepoint,
                part,
                n,
                statistic: out.statistic,
                p_value: out.p_value,
                note: out.note.map(|n| n.name()),
            });
        };
        let failed = |cells: &mut Vec<CellResult>, part, e: &Error| {
            cells.push(CellResult {
                feature: feature.to_string(),
                timepoint,
                part,
                n,
                statistic: 0.0,
                p_value: 1.0,
                note: Some(degenerate_note(e)),
            });
        };
        let sample = Sample::new(&cell.response, &cell.covariate);
        match mode {
            Mode::OnePart => match sample.and_then(|s| ols_slope_test(&s)) {
                Ok(out) => push(&mut cells, "linear", &out),
                Err(e) => failed(&mut cells, "linear", &e),
            },
            Mode::TwoPart => match sample.and_then(|s| two_part_test(&s)) {
                Ok(out) => {
                    push(&mut cells, "prevalence", &out.prevalence);
                    push(&mut cells, "magnitude", &out.magnitude);
                }
                Err(e) => {
                    failed(&mut cells, "prevalence", &e);
                    failed(&mut cells, "magnitude", &e);
                }
            },
        }
    }
    let p: Vec<f64> = cells.iter().map(|c| c.p_value).collect();
    let rows = combine_vector(POOLED_GROUP, p, None, methods)?;
    Ok(LongitudinalRun { cells, rows })
}

pub const CELLS_HEADER: [&str; 7] = [
    "feature",
    "timepoint",
    "part",
    "n",
    "statistic",
    "p_value",
    "note",
];

/// The per-cell p-value matrix as CSV.
pub fn cells_csv(cells: &[CellResult]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| CliError::Input(e.to_string());
    w.write_record(CELLS_HEADER).map_err(to_err)?;
    for c in cells {
        w.write_record([
            c.feature.as_str(),
            &c.timepoint.to_string(),
            c.part,
            &c.n.to_string(),
            &fmt_f64(c.statistic),
            &fmt_f64(c.p_value),
            c.note.unwrap_or(""),
        ])
        .map_err(to_err)?;
    }
    w.into_inner().map_err(|e| CliError::Input(e.to_string()))
}
