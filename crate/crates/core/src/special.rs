//! Special functions: normal, Student t and even-df chi-square tails.
//!
//! Everything here goes through `libm`, so results are bit-identical on every
//! platform with IEEE-754 doubles.

use crate::error::{Error, Result};

const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// Standard normal CDF.
///
/// Computed as `erfc(-x / sqrt 2) / 2`, which keeps full relative accuracy in
/// the lower tail. NaN propagates.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal upper tail `P(Z > x)`.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Two-sided normal p-value `P(|Z| > |z|)`.
pub fn normal_two_sided_p(z: f64) -> f64 {
    libm::erfc(libm::fabs(z) * FRAC_1_SQRT_2)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

fn ln_beta(a: f64, b: f64) -> f64 {
    libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 500;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if libm::fabs(d) < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if libm::fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if libm::fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if libm::fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if libm::fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if libm::fabs(del - 1.0) < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`.
///
/// `y` must equal `1 - x`; callers pass it separately so that it can be formed
/// without cancellation (e.g. `t^2 / (df + t^2)`).
fn reg_inc_beta_split(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let ln_front = a * libm::log(x) + b * libm::log(y) - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        libm::exp(ln_front) * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - libm::exp(ln_front) * beta_continued_fraction(b, a, y) / b
    }
}

/// Regularized incomplete beta `I_x(a, b)` for `x` in `[0, 1]` and `a, b > 0`.
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if x.is_nan() || a.is_nan() || b.is_nan() {
        return Err(Error::NotANumber);
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain("incomplete beta argument outside [0, 1]"));
    }
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::Domain("incomplete beta shapes must be positive"));
    }
    Ok(reg_inc_beta_split(a, b, x, 1.0 - x))
}

/// Upper tail `P(T_df > t)` of Student's t distribution.
pub fn student_t_sf(t: f64, df: u32) -> Result<f64> {
    if t.is_nan() {
        return Err(Error::NotANumber);
    }
    if df < 1 {
        return Err(Error::Domain("t distribution needs df >= 1"));
    }
    if t == 0.0 {
        return Ok(0.5);
    }
    if t.is_infinite() {
        return Ok(if t > 0.0 { 0.0 } else { 1.0 });
    }
    let nu = f64::from(df);
    let t2 = t * t;
    let denom = nu + t2;
    // P(|T| > |t|) = I_{nu / (nu + t^2)}(nu / 2, 1 / 2)
    let two_sided = reg_inc_beta_split(0.5 * nu, 0.5, nu / denom, t2 / denom);
    let upper = 0.5 * two_sided;
    Ok(if t > 0.0 { upper } else { 1.0 - upper })
}

/// Two-sided t p-value `P(|T_df| > |t|)`.
pub fn student_t_two_sided_p(t: f64, df: u32) -> Result<f64> {
    let upper = student_t_sf(libm::fabs(t), df)?;
    Ok((2.0 * upper).min(1.0))
}

/// Chi-square survival function for even degrees of freedom.
///
/// Uses the Poisson-sum identity
/// `P(X > x) = exp(-x/2) * sum_{k < df/2} (x/2)^k / k!`, summed in log space
/// so that `df` in the thousands stays finite.
pub fn chisq_even_sf(x: f64, df: u32) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::NotANumber);
    }
    if x < 0.0 {
        return Err(Error::Domain("chi-square argument must be nonnegative"));
    }
    if df == 0 || df % 2 != 0 {
        return Err(Error::Domain("chi-square closed form needs even df >= 2"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let half = 0.5 * x;
    let terms = (df / 2) as usize;
    let ln_half = libm::log(half);

    // Below the mean the survival is close to 1, so sum the small Poisson
    // upper tail instead and subtract.
    if half < terms as f64 {
        let mut ln_pmf = -half + terms as f64 * ln_half - ln_gamma(terms as f64 + 1.0);
        let mut tail = 0.0;
        let mut k = terms as f64;
        loop {
            let term = libm::exp(ln_pmf);
            tail += term;
            if term <= 1e-17 * tail || term == 0.0 {
                break;
            }
            k += 1.0;
            ln_pmf += ln_half - libm::log(k);
        }
        return Ok((1.0 - tail).max(0.0));
    }

    // ln of the k-th term is k ln(x/2) - ln k!; it peaks near k = x/2.
    let peak = libm::floor(half).min((terms - 1) as f64) as usize;
    let mut ln_peak = 0.0;
    for k in 1..=peak {
        ln_peak += ln_half - libm::log(k as f64);
    }
    let mut sum = 0.0;
    let mut ln_term = 0.0;
    for k in 0..terms {
        if k > 0 {
            ln_term += ln_half - libm::log(k as f64);
        }
        sum += libm::exp(ln_term - ln_peak);
    }
    let sf = libm::exp(ln_peak - half + libm::log(sum));
    Ok(sf.min(1.0))
}
