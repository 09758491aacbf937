//! End-to-end acceptance suite. Prints one `[PASS]`, `[FAIL]` or `[SKIP]`
//! line per criterion, with the offending cells indented underneath.
//!
//! Exits non-zero if any check fails, except checks listed in
//! `KNOWN_UNATTAINABLE`. Those are still printed as failures, with the reason.

use std::path::{Path, PathBuf};
use std::process::Command;

use tcct::parallel::Parallel;
use tcct::pipeline::combine_groups;
use tcct::table::{read_grouped, GroupedColumns};
use tcct_core::combine::{cct, t_min, tcct, Method, PValueVector};
use tcct_core::elementary::{
    fit_logistic, fit_ols, logistic_wald_test, ols_slope_test, two_part_test, Sample,
};
use tcct_core::gof::binomial_se;
use tcct_core::rng::RngStream;
use tcct_core::sim::{
    run_beta_heatmap, run_one_sided_curve, run_regression_scenario, run_tmin_comparison,
    CurveConfig, HeatmapConfig, RejectionTable, ScenarioConfig, DEFAULT_SEED,
};
use tcct_core::special::chisq_even_sf;
use tcct_core::transform::{cauchy_survival, cauchy_transform, f_transform, h_transform, Prob};

const SEED: u64 = DEFAULT_SEED;
const RHOS: [f64; 4] = [0.0, 0.3, 0.6, 0.9];
const ALPHAS: [f64; 2] = [0.05, 0.01];

/// `(criterion, check)` pairs that cannot hold as stated, with the reason.
const KNOWN_UNATTAINABLE: &[(u32, &str, &str)] = &[(
    5,
    "null cell gain",
    "TCCT is anti-conservative at alpha = 0.05 for d = 100 iid uniforms (type I error ~0.072, \
     as in the published rho = 0 row), so the gain at Beta(1,1) is ~0.02, several SEs above 0",
)];

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

enum Outcome {
    Ran(Vec<Check>),
    Skipped(String),
}

struct Criterion {
    id: u32,
    title: &'static str,
    outcome: Outcome,
}

/// Standard error for comparing our estimate with a published one.
fn pooled_se(ours: f64, reps: u64, reference: f64, reference_reps: u64) -> f64 {
    (binomial_se(ours, reps).powi(2) + binomial_se(reference, reference_reps).powi(2)).sqrt()
}

// Published cells, ordered by rho then alpha in {0.05, 0.01}.
const TABLE1: [[f64; 4]; 8] = [
    [0.07235, 0.05056, 0.04941, 0.05072],
    [0.01121, 0.01033, 0.00993, 0.01046],
    [0.08315, 0.06716, 0.19468, 0.04184],
    [0.01421, 0.01366, 0.15313, 0.00979],
    [0.07392, 0.07045, 0.25732, 0.02406],
    [0.01405, 0.01399, 0.22736, 0.00580],
    [0.05359, 0.05359, 0.29549, 0.00517],
    [0.01053, 0.01053, 0.27177, 0.00129],
];
const TABLE2: [[f64; 4]; 8] = [
    [1.0000, 1.0000, 1.0000, 1.0000],
    [1.0000, 1.0000, 1.0000, 0.9988],
    [0.9930, 0.9914, 0.9991, 0.9520],
    [0.9358, 0.9351, 0.9989, 0.8378],
    [0.9079, 0.9055, 0.9810, 0.7500],
    [0.7378, 0.7375, 0.9768, 0.5597],
    [0.7477, 0.7477, 0.9441, 0.4037],
    [0.5192, 0.5192, 0.9362, 0.2438],
];
const TABLE_METHODS: [Method; 4] = [Method::Tcct, Method::Cct, Method::Fisher, Method::Tippett];
// [T_min type I, Tippett type I, T_min power, Tippett power]
const TABLE_A1: [[f64; 4]; 8] = [
    [0.0489, 0.0500, 1.0000, 1.0000],
    [0.0086, 0.0086, 0.9988, 0.9988],
    [0.0437, 0.0448, 0.9515, 0.9520],
    [0.0103, 0.0104, 0.8377, 0.8378],
    [0.0264, 0.0272, 0.7480, 0.7500],
    [0.0073, 0.0073, 0.5589, 0.5597],
    [0.0060, 0.0061, 0.4016, 0.4037],
    [0.0012, 0.0012, 0.2435, 0.2438],
];

fn regression_table(effect: f64, reps: u64, tmin: bool) -> RejectionTable {
    let mut table = RejectionTable::default();
    for rho in RHOS {
        let cfg = ScenarioConfig {
            alpha_levels: ALPHAS.to_vec(),
            replications: reps,
            seed: SEED,
            ..ScenarioConfig::new(rho, effect)
        };
        let t = if tmin {
            run_tmin_comparison(&cfg, &Parallel)
        } else {
            run_regression_scenario(&cfg, &Parallel)
        };
        table.extend(t.expect("scenario runs"));
    }
    table
}

fn compare_table(
    table: &RejectionTable,
    effect: f64,
    expected: &[[f64; 4]; 8],
    methods: &[(usize, Method)],
    reference_reps: u64,
) -> Vec<Check> {
    let mut checks = Vec::new();
    for (ri, rho) in RHOS.iter().enumerate() {
        for (ai, alpha) in ALPHAS.iter().enumerate() {
            for &(col, method) in methods {
                let row = table
                    .get(*rho, effect, *alpha, method)
                    .expect("cell present");
                let reference = expected[ri * 2 + ai][col];
                let se = pooled_se(row.rate(), row.replications, reference, reference_reps);
                let diff = row.rate() - reference;
                checks.push(check(
                    format!("rho={rho} alpha={alpha} {method}"),
                    diff.abs() <= 3.0 * se,
                    format!(
                        "{:.5} vs {reference:.5} ({:+.2} SE)",
                        row.rate(),
                        if se > 0.0 { diff / se } else { 0.0 }
                    ),
                ));
            }
        }
    }
    checks
}

fn criterion_1() -> Outcome {
    let table = regression_table(0.0, 10_000, false);
    let methods: Vec<_> = TABLE_METHODS.iter().copied().enumerate().collect();
    Outcome::Ran(compare_table(&table, 0.0, &TABLE1, &methods, 100_000))
}

fn criterion_2() -> Outcome {
    let table = regression_table(0.25, 2_000, false);
    let methods: Vec<_> = TABLE_METHODS.iter().copied().enumerate().collect();
    Outcome::Ran(compare_table(&table, 0.25, &TABLE2, &methods, 10_000))
}

fn criterion_3() -> Outcome {
    let mut checks = Vec::new();
    for (effect, offset) in [(0.0, 0usize), (0.25, 2)] {
        let table = regression_table(effect, 2_000, true);
        checks.extend(compare_table(
            &table,
            effect,
            &TABLE_A1,
            &[(offset, Method::TMin), (offset + 1, Method::Tippett)],
            10_000,
        ));
        for rho in RHOS {
            for alpha in ALPHAS {
                let a = table.get(rho, effect, alpha, Method::TMin).unwrap();
                let b = table.get(rho, effect, alpha, Method::Tippett).unwrap();
                let se = (a.se().powi(2) + b.se().powi(2)).sqrt();
                let gap = (a.rate() - b.rate()).abs();
                checks.push(check(
                    format!("effect={effect} rho={rho} alpha={alpha} |tmin - tippett|"),
                    gap <= 0.01 + 3.0 * se,
                    format!("{gap:.4} <= {:.4}", 0.01 + 3.0 * se),
                ));
            }
        }
    }
    Outcome::Ran(checks)
}

fn criterion_4() -> Outcome {
    let cfg = CurveConfig {
        c_grid: vec![0.0, 0.45],
        replications: 2_000,
        seed: SEED,
        ..CurveConfig::new()
    };
    let curve = run_one_sided_curve(&cfg, &Parallel).expect("curve runs");
    let band = |p: f64| (0.02..=0.10).contains(&p);
    Outcome::Ran(vec![
        check(
            "c=0 TCCT in [0.02, 0.10]",
            band(curve.tcct[0]),
            format!("{:.4}", curve.tcct[0]),
        ),
        check(
            "c=0 CCT in [0.02, 0.10]",
            band(curve.cct[0]),
            format!("{:.4}", curve.cct[0]),
        ),
        check(
            "c=0.45 TCCT >= 0.9",
            curve.tcct[1] >= 0.9,
            format!("{:.4}", curve.tcct[1]),
        ),
        check(
            "c=0.45 CCT <= 0.55",
            curve.cct[1] <= 0.55,
            format!("{:.4}", curve.cct[1]),
        ),
    ])
}

fn criterion_5() -> Outcome {
    let cfg = HeatmapConfig {
        replications: 2_000,
        seed: SEED,
        ..HeatmapConfig::default()
    };
    let map = run_beta_heatmap(&cfg, &Parallel).expect("heatmap runs");
    let null = map.find(1.0, 1.0).expect("grid has (1, 1)");
    let sharp = map.find(0.2, 0.1).expect("grid has (0.2, 0.1)");
    // per replication the gain indicator is 0 or 1, so its SE is binomial in the gain itself
    let null_se = map.se(null.gain);
    let negative: Vec<_> = map
        .cells
        .iter()
        .filter(|c| c.gain < 0.0 || c.dominance_violations > 0)
        .collect();
    Outcome::Ran(vec![
        check(
            "null cell gain",
            null.gain.abs() <= 3.0 * null_se,
            format!(
                "gain {:.4} (TCCT {:.4}, CCT {:.4}), SE {:.4}",
                null.gain, null.tcct, null.cct, null_se
            ),
        ),
        check(
            "beta(0.2, 0.1) gain >= 0.4",
            sharp.gain >= 0.4,
            format!("{:.4}", sharp.gain),
        ),
        check(
            "gain >= 0 in every cell",
            negative.is_empty(),
            format!("{} of {} cells negative", negative.len(), map.cells.len()),
        ),
    ])
}

// Published CCT and TCCT per chromosome.
const TABLE3: [(f64, f64); 22] = [
    (0.144, 0.080),
    (0.814, 0.113),
    (1.51e-6, 1.51e-6),
    (0.670, 0.121),
    (0.303, 0.118),
    (0.639, 0.125),
    (0.341, 0.100),
    (0.200, 0.113),
    (0.767, 0.139),
    (0.842, 0.156),
    (0.181, 0.083),
    (0.946, 0.124),
    (0.698, 0.123),
    (0.044, 0.026),
    (0.795, 0.149),
    (0.264, 0.142),
    (0.651, 0.185),
    (0.016, 0.014),
    (0.470, 0.103),
    (0.373, 0.114),
    (0.118, 0.079),
    (0.723, 0.168),
];

fn gwas_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os("TCCT_GWAS_RESULTS") {
        return Some(PathBuf::from(p));
    }
    let vendored = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/gwasResults.csv");
    vendored.exists().then_some(vendored)
}

/// Same value at the precision it was published with: three decimals, or
/// three significant digits in exponent form.
fn matches_published(ours: f64, published: f64) -> bool {
    if published >= 0.001 {
        (ours - published).abs() <= 0.0005 + 1e-12
    } else {
        (ours / published - 1.0).abs() <= 0.005 / 1.51 + 1e-12
    }
}

fn criterion_6() -> Outcome {
    let Some(path) = gwas_path() else {
        return Outcome::Skipped(
            "qqman gwasResults table not found; set TCCT_GWAS_RESULTS or add tests/data/gwasResults.csv \
             (columns SNP, CHR, BP, P)"
                .into(),
        );
    };
    let cols = GroupedColumns {
        group: "CHR".into(),
        p: "P".into(),
        weight: None,
    };
    let table = match read_grouped(&path, &cols) {
        Ok(t) => t,
        Err(e) => return Outcome::Ran(vec![check("dataset readable", false, e.to_string())]),
    };
    let groups = table.groups();
    let size = |chr: &str| groups.get(chr).map_or(0, |g| g.p.len());
    let mut checks = vec![check(
        "dataset shape (16470 SNPs, 22 chromosomes, 1500 on chr1, 535 on chr22)",
        table.rows.len() == 16_470 && groups.len() == 22 && size("1") == 1500 && size("22") == 535,
        format!(
            "{} rows, {} groups, chr1 {}, chr22 {}",
            table.rows.len(),
            groups.len(),
            size("1"),
            size("22")
        ),
    )];
    let rows = combine_groups(&table, &[Method::Cct, Method::Tcct]).expect("combine runs");
    for (i, &(cct_ref, tcct_ref)) in TABLE3.iter().enumerate() {
        let chr = (i + 1).to_string();
        for (method, published) in [(Method::Cct, cct_ref), (Method::Tcct, tcct_ref)] {
            let ours = rows
                .iter()
                .find(|r| r.group == chr && r.method == method)
                .and_then(|r| r.p_value());
            checks.push(check(
                format!("chr{chr} {method}"),
                ours.is_some_and(|v| matches_published(v, published)),
                format!("{ours:?} vs {published}"),
            ));
        }
    }
    Outcome::Ran(checks)
}

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// P(T > t) for `T = (f(X1) + f(X2)) / 2`, X iid standard normal, two ways.
fn tail_probability_d2(t: f64) -> (f64, f64) {
    use std::f64::consts::PI;
    let s = 2.0 * t;
    // each truncated score is 0 w.p. 1/2, otherwise half-Cauchy with density g
    let surv = |z: f64| if z > 0.0 { (1.0 / z).atan() / PI } else { 0.5 };
    let g = |y: f64| 1.0 / (PI * (1.0 + y * y));
    let knots = [
        0.0,
        1.0,
        10.0,
        100.0,
        s / 2.0,
        s - 100.0,
        s - 10.0,
        s - 1.0,
        s,
    ];
    let inner: f64 = knots
        .windows(2)
        .map(|w| simpson(&|y| g(y) * surv(s - y), w[0], w[1], 1e-15))
        .sum();
    let by_score = 1.5 * surv(s) + inner;

    // first p-value integrated directly; for u1 below u_star the first score alone exceeds s
    let score = |u: f64| if u < 0.5 { ((0.5 - u) * PI).tan() } else { 0.0 };
    let u_star = 0.5 - s.atan() / PI;
    let inner_p = |u1: f64| {
        let need = s - score(u1);
        if need < 0.0 {
            1.0
        } else {
            surv(need)
        }
    };
    let mut knots_u = vec![u_star];
    for k in 1..=12 {
        knots_u.push(u_star + (0.5 - u_star) * 10f64.powi(k - 12));
    }
    let middle: f64 = knots_u
        .windows(2)
        .map(|w| simpson(&inner_p, w[0], w[1], 1e-16))
        .sum();
    let by_p_value = u_star + middle + 0.5 * surv(s);
    (by_score, by_p_value)
}

fn ln_factorial(m: u32) -> f64 {
    (2..=m).map(|k| (k as f64).ln()).sum()
}

fn chisq_sf_quadrature(x: f64, df: u32) -> f64 {
    let k = df as f64;
    let ln_norm = (k / 2.0) * 2f64.ln() + ln_factorial(df / 2 - 1);
    let density = |v: f64| {
        if v <= 0.0 {
            if df == 2 {
                0.5
            } else {
                0.0
            }
        } else {
            ((k / 2.0 - 1.0) * v.ln() - v / 2.0 - ln_norm).exp()
        }
    };
    let upper = x + 40.0 * (2.0 * k).sqrt() + 200.0;
    let mut knots = vec![x];
    let mut v = x;
    while v < upper {
        v += 5.0;
        knots.push(v);
    }
    knots
        .windows(2)
        .map(|w| simpson(&density, w[0], w[1], 1e-14))
        .sum()
}

fn criterion_7() -> Outcome {
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    for p in [1e-8, 0.01, 0.3, 0.499] {
        let v = PValueVector::new(vec![p]).unwrap();
        for got in [
            tcct(&v, None).unwrap().p_value,
            cct(&v, None).unwrap().p_value,
            t_min(&v).p_value,
        ] {
            worst = worst.max((got - p).abs());
        }
    }
    checks.push(check(
        "d=1 exactness",
        worst <= 1e-12,
        format!("max error {worst:.1e}"),
    ));

    let mut rng = RngStream::new(SEED, 7);
    let mut violations = 0;
    for _ in 0..10_000 {
        let d = 1 + (rng.next_u32() % 200) as usize;
        let p: Vec<f64> = (0..d)
            .map(|_| match rng.next_u32() % 10 {
                0 => 1.0,
                1 => rng.next_open01().powi(8),
                2 => 1.0 - rng.next_open01().powi(8),
                _ => rng.next_open01(),
            })
            .collect();
        let v = PValueVector::new(p).unwrap();
        let (a, b) = (tcct(&v, None).unwrap(), cct(&v, None).unwrap());
        if !(a.statistic >= b.statistic && a.p_value <= b.p_value) {
            violations += 1;
        }
    }
    checks.push(check(
        "dominance fuzz (10^4 vectors)",
        violations == 0,
        format!("{violations} violations"),
    ));

    let mut mismatches = 0;
    for i in 0..100 {
        let x = -8.0 + 16.0 * i as f64 / 99.0;
        for j in 0..100 {
            let t = 10f64.powf(-3.0 + 9.0 * j as f64 / 99.0);
            let f = f_transform(x).unwrap().get();
            let h = h_transform(x).unwrap().get();
            if (f > t) != (h > t) {
                mismatches += 1;
            }
        }
    }
    checks.push(check(
        "truncation preserves upper events (10^4 pairs)",
        mismatches == 0,
        format!("{mismatches} mismatches"),
    ));

    let mut worst = 0.0f64;
    let mut lg = -12.0;
    while lg <= -0.302 {
        let q = 10f64.powf(lg);
        let back = cauchy_survival(cauchy_transform(Prob::new(q).unwrap()).get())
            .unwrap()
            .get();
        worst = worst.max((back / q - 1.0).abs());
        lg += 0.01;
    }
    checks.push(check(
        "transform round trip",
        worst <= 1e-9,
        format!("max relative error {worst:.1e}"),
    ));

    let t = 1e3;
    let (a, b) = tail_probability_d2(t);
    let ratio = t * std::f64::consts::PI * a;
    let lib_tail = cauchy_survival(t).unwrap().get();
    checks.push(check(
        "tail ratio at t=1000 (d=2, independent)",
        (ratio - 1.0).abs() <= 0.05
            && (a / b - 1.0).abs() <= 1e-6
            && (a / lib_tail - 1.0).abs() <= 0.05,
        format!(
            "t*pi*P = {ratio:.6}; routes agree to {:.1e}; P / library tail = {:.6}",
            (a / b - 1.0).abs(),
            a / lib_tail
        ),
    ));

    let mut worst = 0.0f64;
    for df in [2u32, 4, 8, 200] {
        for x in [
            0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0, 180.0, 200.0, 250.0, 400.0,
        ] {
            worst = worst.max((chisq_even_sf(x, df).unwrap() - chisq_sf_quadrature(x, df)).abs());
        }
    }
    checks.push(check(
        "chi-square closed form vs quadrature",
        worst <= 1e-8,
        format!("max error {worst:.1e}"),
    ));

    checks.extend(golden_values());
    Outcome::Ran(checks)
}

fn golden_values() -> Vec<Check> {
    let close = |a: f64, b: f64, tol: f64| (a - b).abs() <= tol;
    let x = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
    let y = [0.1, -0.2, 0.05, 1.1, 0.9, 1.3];
    let s = Sample::new(&y, &x).unwrap();
    let fit = fit_ols(&s).unwrap();
    let r = ols_slope_test(&s).unwrap();
    let ols_ok = close(fit.slope, 1.1166666666666665, 1e-12)
        && close(fit.slope_se, 0.14813657362192648, 1e-12)
        && close(r.statistic, 7.5380889362043595, 1e-8)
        && close(r.p_value, 0.0016588097798562389, 1e-8);

    let lx = [
        0.03, 1.36, 1.22, -0.51, -0.3, -0.53, 0.57, -0.06, 0.75, -1.85, 1.57, -0.1, 0.68, -0.14,
        -0.38, 0.46, 0.82, -0.2, -0.15, 0.69,
    ];
    let ly = [
        0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0,
        0.0, 1.0,
    ];
    let s = Sample::new(&ly, &lx).unwrap();
    let fit = fit_logistic(&s).unwrap();
    let r = logistic_wald_test(&s).unwrap();
    let logit_ok = close(fit.intercept, 0.5124053875400019, 1e-6)
        && close(fit.slope, 0.7684542019643418, 1e-6)
        && close(fit.slope_se, 0.6724579814217105, 1e-6)
        && close(r.p_value, 0.2531406474580765, 1e-6);

    let tx: Vec<f64> = (0..20).map(|i| if i < 10 { 0.0 } else { 1.0 }).collect();
    let ty = [
        0.0, 0.42, 0.0, 1.3, 0.0, 0.0, 0.8, 0.0, 2.1, 0.0, 0.9, 1.7, 0.0, 2.4, 1.1, 0.0, 3.2, 1.9,
        0.0, 2.6,
    ];
    let r = two_part_test(&Sample::new(&ty, &tx).unwrap()).unwrap();
    let two_ok = close(r.prevalence.p_value, 0.18490605025213647, 1e-6)
        && close(r.magnitude.p_value, 0.1347307100142166, 1e-6);

    vec![
        check("OLS golden values (1e-8)", ols_ok, ""),
        check("logistic golden values (1e-6)", logit_ok, ""),
        check("two-part golden values (1e-6)", two_ok, ""),
    ]
}

fn run_cli(args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_tcct"))
        .args(args)
        .status()
        .is_ok_and(|s| s.success())
}

fn dir_snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map(|rd| {
            rd.flatten()
                .map(|e| {
                    (
                        e.file_name().to_string_lossy().into_owned(),
                        std::fs::read(e.path()).unwrap_or_default(),
                    )
                })
                .collect()
        })
        .unwrap_or_default();
    files.sort();
    files
}

fn criterion_8() -> Outcome {
    let root = tempfile::tempdir().expect("temp dir");
    let runs: [(&str, &[&str]); 5] = [
        ("table1", &["--reps", "200"]),
        ("table2", &["--reps", "200"]),
        ("tableA1", &["--reps", "200"]),
        ("figure1", &["--reps", "100"]),
        ("figure2", &["--reps", "50", "--grid", "6"]),
    ];
    let mut checks = Vec::new();
    for (exp, extra) in runs {
        let mut snaps = Vec::new();
        for attempt in 0..2 {
            let out = root.path().join(format!("{exp}-{attempt}"));
            let out_s = out.to_string_lossy().into_owned();
            let mut args = vec![
                "simulate",
                exp,
                "--seed",
                "11",
                "--output-dir",
                out_s.as_str(),
            ];
            args.extend_from_slice(extra);
            let ok = run_cli(&args);
            snaps.push((ok, dir_snapshot(&out)));
        }
        let same = snaps[0].0 && snaps[1].0 && !snaps[0].1.is_empty() && snaps[0].1 == snaps[1].1;
        let names: Vec<_> = snaps[0].1.iter().map(|(n, _)| n.as_str()).collect();
        checks.push(check(format!("simulate {exp}"), same, names.join(", ")));
    }
    Outcome::Ran(checks)
}

type Runner = fn() -> Outcome;

fn main() {
    let start = std::time::Instant::now();
    let criteria: [(u32, &str, Runner); 8] = [
        (1, "table1 type I error at R = 10,000", criterion_1),
        (2, "table2 power at R = 2,000", criterion_2),
        (3, "tableA1 T_min vs Tippett at R = 2,000", criterion_3),
        (4, "one-sided power curve claims", criterion_4),
        (5, "Beta heatmap claims", criterion_5),
        (6, "per-chromosome GWAS combination", criterion_6),
        (7, "property suite", criterion_7),
        (8, "determinism of every simulate subcommand", criterion_8),
    ];
    let mut results = Vec::new();
    for (id, title, f) in criteria {
        results.push(Criterion {
            id,
            title,
            outcome: f(),
        });
    }

    let mut unexpected = 0;
    for c in &results {
        match &c.outcome {
            Outcome::Skipped(why) => println!("[SKIP] criterion {}: {} ({why})", c.id, c.title),
            Outcome::Ran(checks) => {
                let failed: Vec<&Check> = checks.iter().filter(|k| !k.pass).collect();
                let tag = if failed.is_empty() { "PASS" } else { "FAIL" };
                println!(
                    "[{tag}] criterion {}: {} ({}/{} checks)",
                    c.id,
                    c.title,
                    checks.len() - failed.len(),
                    checks.len()
                );
                for k in checks {
                    if k.pass && !failed.is_empty() {
                        continue;
                    }
                    if !k.pass {
                        let known = KNOWN_UNATTAINABLE
                            .iter()
                            .find(|(id, name, _)| *id == c.id && *name == k.name);
                        match known {
                            Some((_, _, why)) => {
                                println!("    known failure: {}: {} [{why}]", k.name, k.detail)
                            }
                            None => {
                                unexpected += 1;
                                println!("    failed: {}: {}", k.name, k.detail);
                            }
                        }
                    } else if !k.detail.is_empty() && checks.len() <= 12 {
                        println!("    {}: {}", k.name, k.detail);
                    }
                }
            }
        }
    }
    println!(
        "acceptance finished in {:.1} s, {unexpected} unexpected failure(s)",
        start.elapsed().as_secs_f64()
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
