//! Goodness-of-fit helpers used to check calibration of simulated p-values.

/// Result of a one-sample Kolmogorov-Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOutcome {
    pub statistic: f64,
    pub p_value: f64,
}

/// Asymptotic Kolmogorov survival `Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = libm::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if term < 1e-18 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// KS test of `samples` against Uniform(0, 1). Sorts `samples` in place.
///
/// The p-value uses Stephens' small-sample correction of the asymptotic
/// distribution, `lambda = (sqrt n + 0.12 + 0.11 / sqrt n) D`.
pub fn ks_uniform(samples: &mut [f64]) -> KsOutcome {
    let n = samples.len();
    if n == 0 {
        return KsOutcome {
            statistic: 0.0,
            p_value: 1.0,
        };
    }
    samples.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let x = x.clamp(0.0, 1.0);
        let lo = x - i as f64 / nf;
        let hi = (i + 1) as f64 / nf - x;
        d = d.max(lo).max(hi);
    }
    let sqrt_n = libm::sqrt(nf);
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    KsOutcome {
        statistic: d,
        p_value: kolmogorov_sf(lambda),
    }
}

/// Binomial standard error `sqrt(r (1 - r) / reps)`.
pub fn binomial_se(rate: f64, reps: u64) -> f64 {
    if reps == 0 {
        return 0.0;
    }
    libm::sqrt(rate * (1.0 - rate) / reps as f64)
}
