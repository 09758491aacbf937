//! Seeded Monte Carlo scenarios for type I error and power.
//!
//! Each replication draws from its own [`RngStream`] derived from
//! `(seed, job index)` and only returns integer rejection counts, so results
//! are identical no matter how an [`Executor`] schedules the jobs.

use alloc::vec;
use alloc::vec::Vec;

use crate::combine::{cct, combine, tcct, Method, PValueVector};
use crate::elementary::{ols_slope_test, one_sided_mean_test, Sample};
use crate::error::{Error, Result};
use crate::gof::binomial_se;
use crate::rng::{fill_exchangeable_normal, sample_beta, RngStream};

pub const DEFAULT_SEED: u64 = 20_240_501;
/// Replications used when nothing else is requested.
pub const DESK_REPLICATIONS: u64 = 2_000;
/// Full-size replication counts for type I error and power runs.
pub const FULL_TYPE_I_REPLICATIONS: u64 = 100_000;
pub const FULL_POWER_REPLICATIONS: u64 = 10_000;
pub const DEFAULT_ALPHAS: [f64; 4] = [0.05, 0.01, 0.001, 0.0001];
pub const DEFAULT_RHOS: [f64; 4] = [0.0, 0.3, 0.6, 0.9];

/// A job body: adds its counts for job `index` into `counts`.
pub type Job<'a> = dyn Fn(u64, &mut [u64]) -> Result<()> + Sync + 'a;

/// Runs `jobs` independent jobs and sums their count vectors.
pub trait Executor {
    fn accumulate(&self, jobs: u64, width: usize, job: &Job<'_>) -> Result<Vec<u64>>;
}

/// Runs jobs one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn accumulate(&self, jobs: u64, width: usize, job: &Job<'_>) -> Result<Vec<u64>> {
        let mut counts = vec![0u64; width];
        for index in 0..jobs {
            job(index, &mut counts)?;
        }
        Ok(counts)
    }
}

/// How the balanced binary covariate is coded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CovariateCoding {
    /// First half `-1`, second half `+1`; group means differ by `2 * effect`.
    #[default]
    PlusMinusOne,
    /// First half `0`, second half `1`; group means differ by `effect`.
    ZeroOne,
}

impl CovariateCoding {
    pub fn design(self, n: usize) -> Vec<f64> {
        let (lo, hi) = match self {
            CovariateCoding::PlusMinusOne => (-1.0, 1.0),
            CovariateCoding::ZeroOne => (0.0, 1.0),
        };
        (0..n).map(|j| if j < n / 2 { lo } else { hi }).collect()
    }
}

/// One correlated-regression Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Number of tests combined per replication.
    pub d: usize,
    /// Subjects per test.
    pub n: usize,
    /// Exchangeable correlation between the tests' errors.
    pub rho: f64,
    /// Regression slope of the response on the covariate.
    pub effect: f64,
    pub alpha_levels: Vec<f64>,
    pub replications: u64,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub coding: CovariateCoding,
}

impl ScenarioConfig {
    /// `d = n = 100`, all four alpha levels, the four table methods, desk-scale replications.
    pub fn new(rho: f64, effect: f64) -> Self {
        ScenarioConfig {
            d: 100,
            n: 100,
            rho,
            effect,
            alpha_levels: DEFAULT_ALPHAS.to_vec(),
            replications: DESK_REPLICATIONS,
            seed: DEFAULT_SEED,
            methods: vec![Method::Tcct, Method::Cct, Method::Fisher, Method::Tippett],
            coding: CovariateCoding::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidConfig("d must be at least 1"));
        }
        if self.n < 3 {
            return Err(Error::InvalidConfig("n must be at least 3"));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::InvalidConfig("rho must lie in [0, 1]"));
        }
        if !self.effect.is_finite() {
            return Err(Error::InvalidConfig("effect must be finite"));
        }
        validate_alphas(&self.alpha_levels)?;
        if self.replications == 0 {
            return Err(Error::InvalidConfig("replications must be at least 1"));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("no methods requested"));
        }
        Ok(())
    }
}

fn validate_alphas(alphas: &[f64]) -> Result<()> {
    if alphas.is_empty() {
        return Err(Error::InvalidConfig("no alpha levels requested"));
    }
    if alphas.iter().any(|a| !(*a > 0.0 && *a < 1.0)) {
        return Err(Error::InvalidConfig("alpha levels must lie in (0, 1)"));
    }
    Ok(())
}

/// Estimated rejection rate for one `(rho, alpha, method)` cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RejectionRow {
    pub rho: f64,
    pub effect: f64,
    pub alpha: f64,
    pub method: Method,
    pub rejections: u64,
    /// Replications where the method had no defined p-value (CCT with 0 and 1).
    pub indeterminate: u64,
    pub replications: u64,
}

impl RejectionRow {
    pub fn rate(&self) -> f64 {
        self.rejections as f64 / self.replications as f64
    }

    /// `sqrt(r (1 - r) / R)`.
    pub fn se(&self) -> f64 {
        binomial_se(self.rate(), self.replications)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RejectionTable {
    pub rows: Vec<RejectionRow>,
}

impl RejectionTable {
    pub fn get(&self, rho: f64, effect: f64, alpha: f64, method: Method) -> Option<&RejectionRow> {
        self.rows
            .iter()
            .find(|r| r.rho == rho && r.effect == effect && r.alpha == alpha && r.method == method)
    }

    pub fn extend(&mut self, other: RejectionTable) {
        self.rows.extend(other.rows);
    }
}

/// The `d` p-values of replication `rep`.
///
/// Subject `j` contributes one exchangeable error vector across the `d`
/// tests; test `i` regresses `y_ij = effect * x_j + e_ij` on the fixed
/// balanced covariate.
pub fn regression_p_values(cfg: &ScenarioConfig, design: &[f64], rep: u64) -> Result<Vec<f64>> {
    let (d, n) = (cfg.d, cfg.n);
    let mut rng = RngStream::new(cfg.seed, rep);
    let mut errors = vec![0.0; d];
    let mut y = vec![0.0; d * n];
    for (j, &xj) in design.iter().enumerate() {
        fill_exchangeable_normal(&mut rng, cfg.rho, &mut errors)?;
        let shift = cfg.effect * xj;
        for (i, e) in errors.iter().enumerate() {
            y[i * n + j] = shift + e;
        }
    }
    y.chunks_exact(n)
        .map(|yi| Ok(ols_slope_test(&Sample::new(yi, design)?)?.p_value))
        .collect()
}

fn tally(methods: &[Method], alphas: &[f64], p: &PValueVector, counts: &mut [u64]) -> Result<()> {
    let stride = alphas.len() + 1;
    for (m_idx, &method) in methods.iter().enumerate() {
        let slot = &mut counts[m_idx * stride..(m_idx + 1) * stride];
        match combine(method, p, None) {
            Ok(r) => {
                for (a_idx, &alpha) in alphas.iter().enumerate() {
                    if r.p_value <= alpha {
                        slot[a_idx] += 1;
                    }
                }
            }
            Err(Error::IndeterminateStatistic) => slot[alphas.len()] += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// Rejection rates of every requested method on the correlated-regression design.
pub fn run_regression_scenario<E: Executor + ?Sized>(
    cfg: &ScenarioConfig,
    exec: &E,
) -> Result<RejectionTable> {
    cfg.validate()?;
    let design = cfg.coding.design(cfg.n);
    let stride = cfg.alpha_levels.len() + 1;
    let width = cfg.methods.len() * stride;
    let counts = exec.accumulate(cfg.replications, width, &|rep, counts| {
        let p = PValueVector::new(regression_p_values(cfg, &design, rep)?)?;
        tally(&cfg.methods, &cfg.alpha_levels, &p, counts)
    })?;

    let mut rows = Vec::with_capacity(cfg.methods.len() * cfg.alpha_levels.len());
    for (a_idx, &alpha) in cfg.alpha_levels.iter().enumerate() {
        for (m_idx, &method) in cfg.methods.iter().enumerate() {
            rows.push(RejectionRow {
                rho: cfg.rho,
                effect: cfg.effect,
                alpha,
                method,
                rejections: counts[m_idx * stride + a_idx],
                indeterminate: counts[m_idx * stride + cfg.alpha_levels.len()],
                replications: cfg.replications,
            });
        }
    }
    Ok(RejectionTable { rows })
}

/// Same mechanics as [`run_regression_scenario`] restricted to T_min and Tippett,
/// which therefore see identical p-value draws.
pub fn run_tmin_comparison<E: Executor + ?Sized>(
    cfg: &ScenarioConfig,
    exec: &E,
) -> Result<RejectionTable> {
    let cfg = ScenarioConfig {
        methods: vec![Method::TMin, Method::Tippett],
        ..cfg.clone()
    };
    run_regression_scenario(&cfg, exec)
}

/// Power of TCCT and CCT against a spread of one-sided alternatives.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveConfig {
    /// Half-widths `c`; means run over `[-c, c]`.
    pub c_grid: Vec<f64>,
    pub d: usize,
    pub n: usize,
    pub replications: u64,
    pub alpha: f64,
    pub seed: u64,
}

impl CurveConfig {
    /// `c = 0, 0.05, ..., 0.45`, `d = n = 100`, alpha 0.05.
    pub fn new() -> Self {
        CurveConfig {
            c_grid: (0..10).map(|k| k as f64 * 0.05).collect(),
            d: 100,
            n: 100,
            replications: DESK_REPLICATIONS,
            alpha: 0.05,
            seed: DEFAULT_SEED,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.c_grid.is_empty() {
            return Err(Error::InvalidConfig("empty c grid"));
        }
        if self.c_grid.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidConfig(
                "c values must be finite and nonnegative",
            ));
        }
        if self.c_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("c grid must be strictly increasing"));
        }
        if self.d == 0 {
            return Err(Error::InvalidConfig("d must be at least 1"));
        }
        if self.n < 2 {
            return Err(Error::InvalidConfig("n must be at least 2"));
        }
        if self.replications == 0 {
            return Err(Error::InvalidConfig("replications must be at least 1"));
        }
        validate_alphas(&[self.alpha])
    }
}

impl Default for CurveConfig {
    fn default() -> Self {
        CurveConfig::new()
    }
}

/// `d` equally spaced means over `[-c, c]`, endpoints included.
pub fn mean_grid(c: f64, d: usize) -> Vec<f64> {
    if d == 1 {
        return vec![0.0];
    }
    (0..d)
        .map(|k| -c + 2.0 * c * k as f64 / (d - 1) as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerCurve {
    pub c: Vec<f64>,
    pub alpha: f64,
    pub replications: u64,
    pub tcct: Vec<f64>,
    pub cct: Vec<f64>,
    pub cct_indeterminate: Vec<u64>,
}

impl PowerCurve {
    pub fn tcct_se(&self, i: usize) -> f64 {
        binomial_se(self.tcct[i], self.replications)
    }

    pub fn cct_se(&self, i: usize) -> f64 {
        binomial_se(self.cct[i], self.replications)
    }
}

fn cauchy_pair_tally(p: &PValueVector, alpha: f64, slot: &mut [u64]) -> Result<()> {
    let t = tcct(p, None)?;
    let t_rejects = t.p_value <= alpha;
    slot[0] += t_rejects as u64;
    match cct(p, None) {
        Ok(c) => {
            let c_rejects = c.p_value <= alpha;
            slot[1] += c_rejects as u64;
            slot[3] += (c_rejects && !t_rejects) as u64;
        }
        Err(Error::IndeterminateStatistic) => slot[2] += 1,
        Err(e) => return Err(e),
    }
    Ok(())
}

/// Each `(c, replication)` pair redraws its data from stream `c_index * R + rep`.
pub fn run_one_sided_curve<E: Executor + ?Sized>(
    cfg: &CurveConfig,
    exec: &E,
) -> Result<PowerCurve> {
    cfg.validate()?;
    let reps = cfg.replications;
    let grids: Vec<Vec<f64>> = cfg.c_grid.iter().map(|&c| mean_grid(c, cfg.d)).collect();
    let jobs = reps * cfg.c_grid.len() as u64;
    let counts = exec.accumulate(jobs, cfg.c_grid.len() * 4, &|job, counts| {
        let c_idx = (job / reps) as usize;
        let mut rng = RngStream::new(cfg.seed, job);
        let mut y = vec![0.0; cfg.n];
        let mut p = Vec::with_capacity(cfg.d);
        for &mu in &grids[c_idx] {
            for v in y.iter_mut() {
                *v = mu + rng.standard_normal();
            }
            p.push(one_sided_mean_test(&y)?.p_value);
        }
        cauchy_pair_tally(
            &PValueVector::new(p)?,
            cfg.alpha,
            &mut counts[c_idx * 4..c_idx * 4 + 4],
        )
    })?;
    let rate = |k: usize| -> Vec<f64> {
        (0..cfg.c_grid.len())
            .map(|i| counts[i * 4 + k] as f64 / reps as f64)
            .collect()
    };
    Ok(PowerCurve {
        c: cfg.c_grid.clone(),
        alpha: cfg.alpha,
        replications: reps,
        tcct: rate(0),
        cct: rate(1),
        cct_indeterminate: (0..cfg.c_grid.len()).map(|i| counts[i * 4 + 2]).collect(),
    })
}

/// Power of TCCT and CCT when the p-values themselves are Beta draws.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapConfig {
    pub shape1: Vec<f64>,
    pub shape2: Vec<f64>,
    pub d: usize,
    pub replications: u64,
    pub alpha: f64,
    pub seed: u64,
}

impl HeatmapConfig {
    /// A `cells x cells` grid at `2k / cells`, `k = 1..=cells`.
    pub fn with_grid(cells: usize) -> Self {
        let grid: Vec<f64> = (1..=cells).map(|k| 2.0 * k as f64 / cells as f64).collect();
        HeatmapConfig {
            shape1: grid.clone(),
            shape2: grid,
            d: 100,
            replications: DESK_REPLICATIONS,
            alpha: 0.05,
            seed: DEFAULT_SEED,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |g: &[f64]| !g.is_empty() && g.iter().all(|s| s.is_finite() && *s > 0.0);
        if !ok(&self.shape1) || !ok(&self.shape2) {
            return Err(Error::InvalidConfig(
                "beta shapes must be positive and finite",
            ));
        }
        if self.d == 0 {
            return Err(Error::InvalidConfig("d must be at least 1"));
        }
        if self.replications == 0 {
            return Err(Error::InvalidConfig("replications must be at least 1"));
        }
        validate_alphas(&[self.alpha])
    }
}

impl Default for HeatmapConfig {
    /// 20 x 20 cells at 0.1, 0.2, ..., 2.0.
    fn default() -> Self {
        HeatmapConfig::with_grid(20)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapCell {
    pub shape1: f64,
    pub shape2: f64,
    pub tcct: f64,
    pub cct: f64,
    /// `tcct - cct`.
    pub gain: f64,
    pub cct_indeterminate: u64,
    /// Replications where CCT rejected and TCCT did not. Always zero.
    pub dominance_violations: u64,
}

/// Cells are stored row-major: `shape1` outer, `shape2` inner.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerHeatmap {
    pub shape1: Vec<f64>,
    pub shape2: Vec<f64>,
    pub alpha: f64,
    pub replications: u64,
    pub cells: Vec<HeatmapCell>,
}

impl PowerHeatmap {
    pub fn cell(&self, i: usize, j: usize) -> &HeatmapCell {
        &self.cells[i * self.shape2.len() + j]
    }

    pub fn find(&self, shape1: f64, shape2: f64) -> Option<&HeatmapCell> {
        self.cells.iter().find(|c| {
            libm::fabs(c.shape1 - shape1) < 1e-12 && libm::fabs(c.shape2 - shape2) < 1e-12
        })
    }

    pub fn se(&self, rate: f64) -> f64 {
        binomial_se(rate, self.replications)
    }
}

/// Per cell and replication: `d` iid Beta p-values combined by TCCT and CCT.
pub fn run_beta_heatmap<E: Executor + ?Sized>(
    cfg: &HeatmapConfig,
    exec: &E,
) -> Result<PowerHeatmap> {
    cfg.validate()?;
    let reps = cfg.replications;
    let n_cells = cfg.shape1.len() * cfg.shape2.len();
    let counts = exec.accumulate(reps * n_cells as u64, n_cells * 4, &|job, counts| {
        let cell = (job / reps) as usize;
        let a = cfg.shape1[cell / cfg.shape2.len()];
        let b = cfg.shape2[cell % cfg.shape2.len()];
        let mut rng = RngStream::new(cfg.seed, job);
        let p: Vec<f64> = (0..cfg.d)
            .map(|_| sample_beta(&mut rng, a, b).map(|p| p.get()))
            .collect::<Result<_>>()?;
        cauchy_pair_tally(
            &PValueVector::new(p)?,
            cfg.alpha,
            &mut counts[cell * 4..cell * 4 + 4],
        )
    })?;
    let mut cells = Vec::with_capacity(n_cells);
    for (i, &shape1) in cfg.shape1.iter().enumerate() {
        for (j, &shape2) in cfg.shape2.iter().enumerate() {
            let k = (i * cfg.shape2.len() + j) * 4;
            let tcct = counts[k] as f64 / reps as f64;
            let cct = counts[k + 1] as f64 / reps as f64;
            cells.push(HeatmapCell {
                shape1,
                shape2,
                tcct,
                cct,
                gain: tcct - cct,
                cct_indeterminate: counts[k + 2],
                dominance_violations: counts[k + 3],
            });
        }
    }
    Ok(PowerHeatmap {
        shape1: cfg.shape1.clone(),
        shape2: cfg.shape2.clone(),
        alpha: cfg.alpha,
        replications: reps,
        cells,
    })
}
