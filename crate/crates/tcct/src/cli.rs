//! Argument parsing and dispatch for the `tcct` binary.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tcct_core::sim::DEFAULT_SEED;
use tcct_core::Method;

use crate::error::Result;
use crate::parallel::Parallel;
use crate::pipeline::{cells_csv, combine_groups, run_longitudinal, Mode};
use crate::report::{build_id, write_bytes, ReportMeta, RunReport};
use crate::simulate::{run_simulate, Experiment, SimulateOptions};
use crate::table::{read_grouped, read_longitudinal, GroupedColumns};

#[derive(Debug, Parser)]
#[command(
    name = "tcct",
    version,
    about = "Truncated Cauchy combination of correlated p-values"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Combine p-values within each group of a CSV file.
    Combine(CombineArgs),
    /// Test every (feature, timepoint) cell of a long-format table and pool the p-values.
    Longitudinal(LongitudinalArgs),
    /// Run a seeded Monte Carlo experiment.
    Simulate(SimulateArgs),
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse::<Method>()
        .map_err(|_| format!("unknown method `{s}` (expected tcct, cct, fisher, tippett, tmin)"))
}

#[derive(Debug, Args)]
pub struct CombineArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub group_col: String,
    #[arg(long)]
    pub p_col: String,
    /// Nonnegative weights, normalized to sum 1 within each group.
    #[arg(long)]
    pub weight_col: Option<String>,
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "tcct,cct")]
    pub methods: Vec<Method>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    OnePart,
    TwoPart,
}

#[derive(Debug, Args)]
pub struct LongitudinalArgs {
    /// CSV with columns unit, timepoint, feature, response, covariate.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "tcct,cct")]
    pub methods: Vec<Method>,
    /// Combined rows go here; per-cell p-values go to `<stem>.cells.csv` beside it.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ExperimentArg {
    Table1,
    Table2,
    #[value(name = "tableA1", alias = "tablea1")]
    TableA1,
    Figure1,
    Figure2,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub experiment: ExperimentArg,
    /// Tests combined per replication.
    #[arg(long)]
    pub d: Option<usize>,
    /// Observations per test.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub rho: Option<Vec<f64>>,
    #[arg(long)]
    pub effect: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long)]
    pub reps: Option<u64>,
    #[arg(long, env = "TCCT_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Full-size runs: 100,000 replications for type I error, 10,000 for power.
    #[arg(long)]
    pub full: bool,
    /// Half-widths for figure1.
    #[arg(long, value_delimiter = ',')]
    pub c: Option<Vec<f64>>,
    /// Cells per axis for figure2.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Code the regression covariate 0/1 instead of -1/+1.
    #[arg(long)]
    pub zero_one: bool,
    #[arg(long, default_value = ".")]
    pub output_dir: PathBuf,
}

fn dedup(methods: &[Method]) -> Vec<Method> {
    let mut out: Vec<Method> = Vec::new();
    for &m in methods {
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

fn method_names(methods: &[Method]) -> Vec<String> {
    methods.iter().map(|m| m.name().to_string()).collect()
}

fn combine_cmd(a: &CombineArgs) -> Result<()> {
    let methods = dedup(&a.methods);
    let cols = GroupedColumns {
        group: a.group_col.clone(),
        p: a.p_col.clone(),
        weight: a.weight_col.clone(),
    };
    let table = read_grouped(&a.input, &cols)?;
    let mut report = RunReport {
        rows: combine_groups(&table, &methods)?,
        meta: ReportMeta {
            version: build_id(),
            command: "combine".into(),
            input: a.input.display().to_string(),
            methods: method_names(&methods),
            weights: a
                .weight_col
                .as_ref()
                .map_or_else(|| "uniform".into(), |c| format!("normalized:{c}")),
            seed: None,
        },
    };
    report.sort();
    report.write(&a.output)
}

/// `<dir>/<stem>.cells.csv` for an output path `<dir>/<stem>.<ext>`.
pub fn cells_path(output: &std::path::Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map_or_else(|| "output".into(), |s| s.to_string_lossy().into_owned());
    output.with_file_name(format!("{stem}.cells.csv"))
}

fn longitudinal_cmd(a: &LongitudinalArgs) -> Result<()> {
    let methods = dedup(&a.methods);
    let mode = match a.mode {
        ModeArg::OnePart => Mode::OnePart,
        ModeArg::TwoPart => Mode::TwoPart,
    };
    let table = read_longitudinal(&a.input)?;
    let run = run_longitudinal(&table, mode, &methods)?;
    let mut report = RunReport {
        rows: run.rows,
        meta: ReportMeta {
            version: build_id(),
            command: format!(
                "longitudinal {}",
                if mode == Mode::OnePart {
                    "one-part"
                } else {
                    "two-part"
                }
            ),
            input: a.input.display().to_string(),
            methods: method_names(&methods),
            weights: "uniform".into(),
            seed: None,
        },
    };
    report.sort();
    report.write(&a.output)?;
    write_bytes(&cells_path(&a.output), &cells_csv(&run.cells)?)
}

fn simulate_cmd(a: &SimulateArgs) -> Result<()> {
    let exp = match a.experiment {
        ExperimentArg::Table1 => Experiment::Table1,
        ExperimentArg::Table2 => Experiment::Table2,
        ExperimentArg::TableA1 => Experiment::TableA1,
        ExperimentArg::Figure1 => Experiment::Figure1,
        ExperimentArg::Figure2 => Experiment::Figure2,
    };
    let opts = SimulateOptions {
        d: a.d,
        n: a.n,
        rho: a.rho.clone(),
        effect: a.effect,
        alpha: a.alpha.clone(),
        reps: a.reps,
        seed: a.seed,
        full: a.full,
        c: a.c.clone(),
        grid: a.grid,
        zero_one: a.zero_one,
    };
    run_simulate(exp, &opts, &a.output_dir, &Parallel).map(|_| ())
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Combine(a) => combine_cmd(a),
        Command::Longitudinal(a) => longitudinal_cmd(a),
        Command::Simulate(a) => simulate_cmd(a),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("tcct: error: {e}");
            e.exit_code()
        }
    }
}
