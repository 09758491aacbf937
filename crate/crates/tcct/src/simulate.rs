//! The `simulate` experiments and their CSV / SVG outputs.

use std::path::{Path, PathBuf};

use serde::Serialize;
use tcct_core::sim::{
    run_beta_heatmap, run_one_sided_curve, run_regression_scenario, run_tmin_comparison,
    CovariateCoding, CurveConfig, Executor, HeatmapConfig, PowerCurve, PowerHeatmap,
    RejectionTable, ScenarioConfig, DEFAULT_RHOS, DESK_REPLICATIONS, FULL_POWER_REPLICATIONS,
    FULL_TYPE_I_REPLICATIONS,
};
use tcct_core::Method;

use crate::error::{CliError, Result};
use crate::report::{build_id, fmt_f64, meta_path, write_bytes};
use crate::svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    /// Type I error of TCCT, CCT, Fisher and Tippett.
    Table1,
    /// Power of the same four methods.
    Table2,
    /// T_min against Tippett, under the null and the alternative.
    TableA1,
    /// One-sided power curve over `c`.
    Figure1,
    /// Beta-distributed p-value heatmap.
    Figure2,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Table1 => "table1",
            Experiment::Table2 => "table2",
            Experiment::TableA1 => "tableA1",
            Experiment::Figure1 => "figure1",
            Experiment::Figure2 => "figure2",
        }
    }
}

/// Overrides accepted by `simulate`; `None` keeps the experiment default.
#[derive(Debug, Clone, Default)]
pub struct SimulateOptions {
    pub d: Option<usize>,
    pub n: Option<usize>,
    pub rho: Option<Vec<f64>>,
    pub effect: Option<f64>,
    pub alpha: Option<Vec<f64>>,
    pub reps: Option<u64>,
    pub seed: u64,
    /// Full-size runs: 100,000 replications for type I error, 10,000 for power.
    pub full: bool,
    pub c: Option<Vec<f64>>,
    /// Cells per axis of the Beta grid.
    pub grid: Option<usize>,
    pub zero_one: bool,
}

#[derive(Debug, Serialize)]
struct SimMeta {
    version: String,
    command: String,
    seed: u64,
    replications: u64,
    d: usize,
    n: Option<usize>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn reject_options(exp: Experiment, opts: &SimulateOptions, names: &[&str]) -> Result<()> {
    for &name in names {
        let given = match name {
            "n" => opts.n.is_some(),
            "rho" => opts.rho.is_some(),
            "effect" => opts.effect.is_some(),
            "c" => opts.c.is_some(),
            "grid" => opts.grid.is_some(),
            "zero-one" => opts.zero_one,
            _ => false,
        };
        if given {
            return Err(usage(format!("--{name} does not apply to {}", exp.name())));
        }
    }
    Ok(())
}

fn single_alpha(exp: Experiment, opts: &SimulateOptions) -> Result<f64> {
    match opts.alpha.as_deref() {
        None => Ok(0.05),
        Some([a]) => Ok(*a),
        Some(_) => Err(usage(format!("{} takes a single --alpha", exp.name()))),
    }
}

fn scenario(opts: &SimulateOptions, rho: f64, effect: f64, full_reps: u64) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(rho, effect);
    cfg.d = opts.d.unwrap_or(cfg.d);
    cfg.n = opts.n.unwrap_or(cfg.n);
    if let Some(a) = &opts.alpha {
        cfg.alpha_levels = a.clone();
    }
    cfg.replications = opts.reps.unwrap_or(if opts.full {
        full_reps
    } else {
        DESK_REPLICATIONS
    });
    cfg.seed = opts.seed;
    if opts.zero_one {
        cfg.coding = CovariateCoding::ZeroOne;
    }
    cfg
}

pub const REJECTION_HEADER: [&str; 9] = [
    "rho",
    "effect",
    "alpha",
    "method",
    "replications",
    "rejections",
    "indeterminate",
    "rate",
    "se",
];

pub fn rejection_csv(table: &RejectionTable) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| CliError::Input(e.to_string());
    w.write_record(REJECTION_HEADER).map_err(to_err)?;
    for r in &table.rows {
        w.write_record([
            fmt_f64(r.rho),
            fmt_f64(r.effect),
            fmt_f64(r.alpha),
            r.method.name().to_string(),
            r.replications.to_string(),
            r.rejections.to_string(),
            r.indeterminate.to_string(),
            fmt_f64(r.rate()),
            fmt_f64(r.se()),
        ])
        .map_err(to_err)?;
    }
    w.into_inner().map_err(|e| CliError::Input(e.to_string()))
}

pub fn curve_csv(curve: &PowerCurve) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| CliError::Input(e.to_string());
    w.write_record([
        "c",
        "method",
        "alpha",
        "replications",
        "power",
        "se",
        "indeterminate",
    ])
    .map_err(to_err)?;
    for (i, &c) in curve.c.iter().enumerate() {
        for (method, power, se, indet) in [
            (Method::Tcct, curve.tcct[i], curve.tcct_se(i), 0),
            (
                Method::Cct,
                curve.cct[i],
                curve.cct_se(i),
                curve.cct_indeterminate[i],
            ),
        ] {
            w.write_record([
                fmt_f64(c),
                method.name().to_string(),
                fmt_f64(curve.alpha),
                curve.replications.to_string(),
                fmt_f64(power),
                fmt_f64(se),
                indet.to_string(),
            ])
            .map_err(to_err)?;
        }
    }
    w.into_inner().map_err(|e| CliError::Input(e.to_string()))
}

pub fn heatmap_csv(map: &PowerHeatmap) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| CliError::Input(e.to_string());
    w.write_record([
        "shape1",
        "shape2",
        "alpha",
        "replications",
        "tcct",
        "cct",
        "gain",
        "cct_indeterminate",
        "dominance_violations",
    ])
    .map_err(to_err)?;
    for c in &map.cells {
        w.write_record([
            fmt_f64(c.shape1),
            fmt_f64(c.shape2),
            fmt_f64(map.alpha),
            map.replications.to_string(),
            fmt_f64(c.tcct),
            fmt_f64(c.cct),
            fmt_f64(c.gain),
            c.cct_indeterminate.to_string(),
            c.dominance_violations.to_string(),
        ])
        .map_err(to_err)?;
    }
    w.into_inner().map_err(|e| CliError::Input(e.to_string()))
}

fn write_meta(csv_path: &Path, meta: &SimMeta) -> Result<()> {
    let mut json = serde_json::to_vec_pretty(meta).map_err(|e| CliError::Input(e.to_string()))?;
    json.push(b'\n');
    write_bytes(&meta_path(csv_path), &json)
}

/// Runs `exp` and writes its files into `out_dir`. Returns the paths written.
pub fn run_simulate<E: Executor + ?Sized>(
    exp: Experiment,
    opts: &SimulateOptions,
    out_dir: &Path,
    exec: &E,
) -> Result<Vec<PathBuf>> {
    let name = exp.name();
    let csv_path = out_dir.join(format!("{name}.csv"));
    let mut written = vec![csv_path.clone()];
    let rhos = opts.rho.clone().unwrap_or_else(|| DEFAULT_RHOS.to_vec());
    if rhos.is_empty() {
        return Err(usage("--rho needs at least one value"));
    }

    let (bytes, replications, d, n) = match exp {
        Experiment::Table1 | Experiment::Table2 => {
            reject_options(exp, opts, &["c", "grid"])?;
            let (effect, full) = if exp == Experiment::Table1 {
                (opts.effect.unwrap_or(0.0), FULL_TYPE_I_REPLICATIONS)
            } else {
                (opts.effect.unwrap_or(0.25), FULL_POWER_REPLICATIONS)
            };
            let configs: Vec<_> = rhos
                .iter()
                .map(|&rho| scenario(opts, rho, effect, full))
                .collect();
            let mut table = RejectionTable::default();
            for cfg in &configs {
                table.extend(run_regression_scenario(cfg, exec)?);
            }
            let c0 = &configs[0];
            (rejection_csv(&table)?, c0.replications, c0.d, Some(c0.n))
        }
        Experiment::TableA1 => {
            reject_options(exp, opts, &["c", "grid"])?;
            let effects = opts.effect.map_or_else(|| vec![0.0, 0.25], |e| vec![e]);
            let configs: Vec<_> = effects
                .iter()
                .flat_map(|&effect| rhos.iter().map(move |&rho| (rho, effect)))
                .map(|(rho, effect)| scenario(opts, rho, effect, FULL_POWER_REPLICATIONS))
                .collect();
            let mut table = RejectionTable::default();
            for cfg in &configs {
                table.extend(run_tmin_comparison(cfg, exec)?);
            }
            let c0 = &configs[0];
            (rejection_csv(&table)?, c0.replications, c0.d, Some(c0.n))
        }
        Experiment::Figure1 => {
            reject_options(exp, opts, &["rho", "effect", "grid", "zero-one"])?;
            let mut cfg = CurveConfig::new();
            if let Some(c) = &opts.c {
                cfg.c_grid = c.clone();
            }
            cfg.d = opts.d.unwrap_or(cfg.d);
            cfg.n = opts.n.unwrap_or(cfg.n);
            cfg.alpha = single_alpha(exp, opts)?;
            cfg.replications = opts.reps.unwrap_or(if opts.full {
                FULL_POWER_REPLICATIONS
            } else {
                DESK_REPLICATIONS
            });
            cfg.seed = opts.seed;
            let curve = run_one_sided_curve(&cfg, exec)?;
            let svg_path = out_dir.join(format!("{name}.svg"));
            write_bytes(&svg_path, svg::power_curve(&curve).as_bytes())?;
            written.push(svg_path);
            (curve_csv(&curve)?, cfg.replications, cfg.d, Some(cfg.n))
        }
        Experiment::Figure2 => {
            reject_options(exp, opts, &["n", "rho", "effect", "c", "zero-one"])?;
            let cells = opts.grid.unwrap_or(20);
            if cells == 0 {
                return Err(usage("--grid must be at least 1"));
            }
            let mut cfg = HeatmapConfig::with_grid(cells);
            cfg.d = opts.d.unwrap_or(cfg.d);
            cfg.alpha = single_alpha(exp, opts)?;
            cfg.replications = opts.reps.unwrap_or(if opts.full {
                FULL_POWER_REPLICATIONS
            } else {
                DESK_REPLICATIONS
            });
            cfg.seed = opts.seed;
            let map = run_beta_heatmap(&cfg, exec)?;
            let svg_path = out_dir.join(format!("{name}.svg"));
            write_bytes(&svg_path, svg::power_heatmap(&map).as_bytes())?;
            written.push(svg_path);
            (heatmap_csv(&map)?, cfg.replications, cfg.d, None)
        }
    };
    write_bytes(&csv_path, &bytes)?;
    let meta = SimMeta {
        version: build_id(),
        command: format!("simulate {name}"),
        seed: opts.seed,
        replications,
        d,
        n,
    };
    write_meta(&csv_path, &meta)?;
    written.push(meta_path(&csv_path));
    Ok(written)
}
