//! Per-coordinate tests that produce the p-values being combined.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::special::{normal_two_sided_p, student_t_sf, student_t_two_sided_p};

/// Newton-Raphson iteration cap for the logistic fit.
pub const LOGISTIC_MAX_ITER: usize = 50;
/// Convergence threshold on the largest score component.
pub const LOGISTIC_SCORE_TOL: f64 = 1e-8;
/// Slope magnitude treated as complete separation.
pub const SEPARATION_BOUND: f64 = 15.0;
/// Smallest nonzero subsample for which the magnitude part is fitted.
pub const MIN_NONZERO: usize = 3;

/// Paired response/covariate observations.
#[derive(Debug, Clone, Copy)]
pub struct Sample<'a> {
    response: &'a [f64],
    covariate: &'a [f64],
}

impl<'a> Sample<'a> {
    pub fn new(response: &'a [f64], covariate: &'a [f64]) -> Result<Self> {
        if response.len() != covariate.len() {
            return Err(Error::LengthMismatch {
                expected: response.len(),
                found: covariate.len(),
            });
        }
        if response.len() < 3 {
            return Err(Error::Domain("a sample needs at least 3 observations"));
        }
        if response.iter().chain(covariate).any(|v| v.is_nan()) {
            return Err(Error::NotANumber);
        }
        Ok(Sample {
            response,
            covariate,
        })
    }

    pub fn len(&self) -> usize {
        self.response.len()
    }

    pub fn is_empty(&self) -> bool {
        self.response.is_empty()
    }

    pub fn response(&self) -> &'a [f64] {
        self.response
    }

    pub fn covariate(&self) -> &'a [f64] {
        self.covariate
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sidedness {
    OneSidedGreater,
    TwoSided,
}

/// Why a test outcome was resolved by a degenerate-case rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Note {
    ConstantResponse,
    Separation,
    TooFewNonzero,
}

impl Note {
    pub fn name(self) -> &'static str {
        match self {
            Note::ConstantResponse => "CONSTANT_RESPONSE",
            Note::Separation => "SEPARATION",
            Note::TooFewNonzero => "TOO_FEW_NONZERO",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub sided: Sidedness,
    pub df: Option<u32>,
    pub note: Option<Note>,
}

/// Least-squares fit of `y = a + b x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OlsFit {
    pub intercept: f64,
    pub slope: f64,
    pub slope_se: f64,
    pub rss: f64,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn fit_ols(s: &Sample<'_>) -> Result<OlsFit> {
    let x = s.covariate;
    let y = s.response;
    let xbar = mean(x);
    let ybar = mean(y);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - xbar;
        let dy = yi - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ConstantCovariate);
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let r = (yi - ybar) - slope * (xi - xbar);
            r * r
        })
        .sum();
    // residuals below rounding noise of the centred response count as zero
    let rss = if rss <= 1e-24 * syy { 0.0 } else { rss };
    let df = (s.len() - 2) as f64;
    let slope_se = libm::sqrt(rss / df / sxx);
    Ok(OlsFit {
        intercept,
        slope,
        slope_se,
        rss,
    })
}

/// Two-sided t-test of the slope in simple linear regression.
///
/// With zero residual variance the outcome is flagged `ConstantResponse`
/// and the p-value is 0 for a nonzero slope and 1 otherwise.
pub fn ols_slope_test(s: &Sample<'_>) -> Result<TestOutcome> {
    let fit = fit_ols(s)?;
    let df = (s.len() - 2) as u32;
    if fit.rss == 0.0 {
        let (statistic, p_value) = if fit.slope == 0.0 {
            (0.0, 1.0)
        } else {
            (fit.slope.signum() * f64::INFINITY, 0.0)
        };
        return Ok(TestOutcome {
            statistic,
            p_value,
            sided: Sidedness::TwoSided,
            df: Some(df),
            note: Some(Note::ConstantResponse),
        });
    }
    let t = fit.slope / fit.slope_se;
    Ok(TestOutcome {
        statistic: t,
        p_value: student_t_two_sided_p(t, df)?,
        sided: Sidedness::TwoSided,
        df: Some(df),
        note: None,
    })
}

/// One-sample t-test of `H0: mu <= 0` against `mu > 0`.
pub fn one_sided_mean_test(y: &[f64]) -> Result<TestOutcome> {
    if y.len() < 2 {
        return Err(Error::Domain("one-sample t-test needs n >= 2"));
    }
    if y.iter().any(|v| v.is_nan()) {
        return Err(Error::NotANumber);
    }
    let n = y.len() as f64;
    let ybar = mean(y);
    let ss: f64 = y.iter().map(|v| (v - ybar) * (v - ybar)).sum();
    if !(ss > 0.0) {
        return Err(Error::DegenerateSample);
    }
    let sd = libm::sqrt(ss / (n - 1.0));
    let t = libm::sqrt(n) * ybar / sd;
    let df = (y.len() - 1) as u32;
    Ok(TestOutcome {
        statistic: t,
        p_value: student_t_sf(t, df)?,
        sided: Sidedness::OneSidedGreater,
        df: Some(df),
        note: None,
    })
}

/// Maximum-likelihood fit of `logit P(y = 1) = a + b x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticFit {
    pub intercept: f64,
    pub slope: f64,
    pub slope_se: f64,
    pub iterations: usize,
    pub converged: bool,
    /// The slope crossed the separation bound and was clamped.
    pub separated: bool,
}

#[inline]
fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + libm::exp(-eta))
    } else {
        let e = libm::exp(eta);
        e / (1.0 + e)
    }
}

fn log_likelihood(x: &[f64], y: &[f64], a: f64, b: f64) -> f64 {
    x.iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let eta = a + b * xi;
            // log(1 + e^eta) without overflow
            let softplus = if eta > 0.0 {
                eta + libm::log1p(libm::exp(-eta))
            } else {
                libm::log1p(libm::exp(eta))
            };
            yi * eta - softplus
        })
        .sum()
}

/// Score vector and Fisher information at `(a, b)`.
fn score_and_information(x: &[f64], y: &[f64], a: f64, b: f64) -> ([f64; 2], [f64; 3]) {
    let mut u = [0.0; 2];
    let mut info = [0.0; 3];
    for (&xi, &yi) in x.iter().zip(y) {
        let mu = sigmoid(a + b * xi);
        let r = yi - mu;
        let w = mu * (1.0 - mu);
        u[0] += r;
        u[1] += r * xi;
        info[0] += w;
        info[1] += w * xi;
        info[2] += w * xi * xi;
    }
    (u, info)
}

fn slope_variance(info: [f64; 3]) -> f64 {
    let det = info[0] * info[2] - info[1] * info[1];
    if det > 0.0 {
        info[0] / det
    } else {
        f64::INFINITY
    }
}

/// Newton-Raphson with step halving. Requires a 0/1 response.
///
/// A constant response has no finite MLE and is reported as
/// [`Error::DegenerateSample`].
pub fn fit_logistic(s: &Sample<'_>) -> Result<LogisticFit> {
    let x = s.covariate;
    let y = s.response;
    if y.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::NonBinaryResponse);
    }
    let ybar = mean(y);
    if ybar == 0.0 || ybar == 1.0 {
        return Err(Error::DegenerateSample);
    }
    if x.iter().all(|&v| v == x[0]) {
        return Err(Error::ConstantCovariate);
    }

    let mut a = libm::log(ybar / (1.0 - ybar));
    let mut b = 0.0;
    let mut converged = false;
    let mut separated = false;
    let mut iterations = 0;
    let mut ll = log_likelihood(x, y, a, b);
    let (mut u, mut info) = score_and_information(x, y, a, b);
    while iterations < LOGISTIC_MAX_ITER {
        if libm::fabs(u[0]).max(libm::fabs(u[1])) < LOGISTIC_SCORE_TOL {
            converged = true;
            break;
        }
        let det = info[0] * info[2] - info[1] * info[1];
        if !(det > 0.0) {
            break;
        }
        let da = (info[2] * u[0] - info[1] * u[1]) / det;
        let db = (info[0] * u[1] - info[1] * u[0]) / det;
        let mut step = 1.0;
        let (mut na, mut nb, mut nll);
        loop {
            na = a + step * da;
            nb = b + step * db;
            nll = log_likelihood(x, y, na, nb);
            if nll >= ll - 1e-12 * libm::fabs(ll) || step < 1e-10 {
                break;
            }
            step *= 0.5;
        }
        a = na;
        b = nb;
        ll = nll;
        iterations += 1;
        if libm::fabs(b) > SEPARATION_BOUND {
            b = b.signum() * SEPARATION_BOUND;
            separated = true;
            let (uu, ii) = score_and_information(x, y, a, b);
            info = ii;
            u = uu;
            break;
        }
        let (uu, ii) = score_and_information(x, y, a, b);
        u = uu;
        info = ii;
    }
    if !converged && !separated && libm::fabs(u[0]).max(libm::fabs(u[1])) < LOGISTIC_SCORE_TOL {
        converged = true;
    }
    Ok(LogisticFit {
        intercept: a,
        slope: b,
        slope_se: libm::sqrt(slope_variance(info)),
        iterations,
        converged,
        separated,
    })
}

/// Wald test of the logistic slope with a two-sided normal p-value.
///
/// A constant response yields `p = 1` flagged `ConstantResponse`; a slope
/// that runs past the separation bound is clamped, flagged `Separation`,
/// and the p-value is evaluated at the clamped estimate.
pub fn logistic_wald_test(s: &Sample<'_>) -> Result<TestOutcome> {
    let fit = match fit_logistic(s) {
        Ok(fit) => fit,
        Err(Error::DegenerateSample) => {
            return Ok(TestOutcome {
                statistic: 0.0,
                p_value: 1.0,
                sided: Sidedness::TwoSided,
                df: None,
                note: Some(Note::ConstantResponse),
            })
        }
        Err(e) => return Err(e),
    };
    let z = if fit.slope_se.is_finite() && fit.slope_se > 0.0 {
        fit.slope / fit.slope_se
    } else {
        0.0
    };
    Ok(TestOutcome {
        statistic: z,
        p_value: normal_two_sided_p(z),
        sided: Sidedness::TwoSided,
        df: None,
        note: fit.separated.then_some(Note::Separation),
    })
}

/// Outcome of the two-part (hurdle) test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPartOutcome {
    /// Logistic test on the zero / nonzero indicator.
    pub prevalence: TestOutcome,
    /// Linear test on the nonzero responses.
    pub magnitude: TestOutcome,
}

impl TwoPartOutcome {
    pub fn p_values(&self) -> [f64; 2] {
        [self.prevalence.p_value, self.magnitude.p_value]
    }
}

fn too_few_nonzero() -> TestOutcome {
    TestOutcome {
        statistic: 0.0,
        p_value: 1.0,
        sided: Sidedness::TwoSided,
        df: None,
        note: Some(Note::TooFewNonzero),
    }
}

/// Two-part test for a zero-inflated response.
pub fn two_part_test(s: &Sample<'_>) -> Result<TwoPartOutcome> {
    let indicator: Vec<f64> = s
        .response
        .iter()
        .map(|&v| if v != 0.0 { 1.0 } else { 0.0 })
        .collect();
    let prevalence = logistic_wald_test(&Sample::new(&indicator, s.covariate)?)?;

    let (ys, xs): (Vec<f64>, Vec<f64>) = s
        .response
        .iter()
        .zip(s.covariate)
        .filter(|(&y, _)| y != 0.0)
        .map(|(&y, &x)| (y, x))
        .unzip();
    let magnitude = if ys.len() < MIN_NONZERO || xs.iter().all(|&x| x == xs[0]) {
        too_few_nonzero()
    } else {
        ols_slope_test(&Sample::new(&ys, &xs)?)?
    };
    Ok(TwoPartOutcome {
        prevalence,
        magnitude,
    })
}
