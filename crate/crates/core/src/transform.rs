//! The Cauchy transform `p -> tan((1/2 - p) pi)` and its inverse tail.

use core::f64::consts::PI;
use core::fmt;

use crate::error::{Error, Result};
use crate::special::normal_two_sided_p;

/// Below this the transform switches to its series limit `1 / (p pi)`.
pub const SMALL_P: f64 = 1e-15;
/// Above this the survival switches to its series limit `1 / (t pi)`.
pub const LARGE_T: f64 = 1e15;

/// A probability in `[0, 1]`, never NaN.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Prob(f64);

impl Prob {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Prob(value))
        } else {
            Err(Error::InvalidProbability(value))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Prob {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Prob::new(value)
    }
}

impl From<Prob> for f64 {
    fn from(p: Prob) -> f64 {
        p.0
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// A value on the Cauchy scale; `+inf` for `p = 0` and `-inf` for `p = 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CauchyScore(pub f64);

impl CauchyScore {
    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// `tan((0.5 - p) pi)` for a p already known to lie in `[0, 1]`.
///
/// The three branches keep relative accuracy near both poles: `cot(p pi)`
/// for small p, `-cot((1 - p) pi)` for p near one (`1 - p` is exact there),
/// and the direct form in the middle where `0.5 - p` is exact.
#[inline]
pub(crate) fn cauchy_score(p: f64) -> f64 {
    if p == 0.0 {
        f64::INFINITY
    } else if p == 1.0 {
        f64::NEG_INFINITY
    } else if p < SMALL_P {
        1.0 / (p * PI)
    } else if p <= 0.25 {
        1.0 / libm::tan(p * PI)
    } else if p < 0.75 {
        libm::tan((0.5 - p) * PI)
    } else {
        let q = 1.0 - p;
        if q < SMALL_P {
            -1.0 / (q * PI)
        } else {
            -1.0 / libm::tan(q * PI)
        }
    }
}

/// `0.5 - atan(t) / pi` for non-NaN t.
#[inline]
pub(crate) fn cauchy_tail(t: f64) -> f64 {
    if t > LARGE_T {
        // atan(1/t) == 1/t exactly in this range, so this is the same
        // expression as the branch below.
        (1.0 / t) / PI
    } else if t > 0.0 {
        libm::atan(1.0 / t) / PI
    } else {
        0.5 + libm::atan(-t) / PI
    }
}

/// Maps a p-value onto the standard Cauchy scale.
pub fn cauchy_transform(p: Prob) -> CauchyScore {
    CauchyScore(cauchy_score(p.get()))
}

/// Standard Cauchy upper tail `P(W > t)`.
pub fn cauchy_survival(t: f64) -> Result<Prob> {
    if t.is_nan() {
        return Err(Error::NotANumber);
    }
    Ok(Prob(cauchy_tail(t).clamp(0.0, 1.0)))
}

/// `h(x) = tan((2 Phi(|x|) - 3/2) pi)`, with `h(0) = -inf`.
///
/// `2 Phi(|x|) - 3/2 = 1/2 - p` where `p = P(|Z| > |x|)`, so this is the
/// Cauchy transform of the two-sided normal p-value.
pub fn h_transform(x: f64) -> Result<CauchyScore> {
    if x.is_nan() {
        return Err(Error::NotANumber);
    }
    Ok(CauchyScore(cauchy_score(normal_two_sided_p(x))))
}

/// `f(x) = h(x) I(h(x) > 0)`.
pub fn f_transform(x: f64) -> Result<CauchyScore> {
    let h = h_transform(x)?;
    Ok(if h.0 > 0.0 { h } else { CauchyScore(0.0) })
}
