//! P-value combiners: TCCT, CCT, Fisher, Tippett and the Cauchy-tail minimum.
//!
//! TCCT keeps only the positive Cauchy terms,
//!
//! ```text
//! T = sum_i w_i tan((0.5 - p_i) pi) I(p_i < 0.5)
//! p = 0.5 - atan(T) / pi
//! ```
//!
//! so a single p-value near one can no longer drag the statistic to minus
//! infinity the way it does for CCT.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::special::chisq_even_sf;
use crate::transform::{cauchy_score, cauchy_tail};

/// Tolerance on `sum w_i = 1`.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Tcct,
    Cct,
    Fisher,
    Tippett,
    TMin,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Tcct,
        Method::Cct,
        Method::Fisher,
        Method::Tippett,
        Method::TMin,
    ];

    /// Lowercase name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            Method::Tcct => "tcct",
            Method::Cct => "cct",
            Method::Fisher => "fisher",
            Method::Tippett => "tippett",
            Method::TMin => "tmin",
        }
    }

    /// Whether the method reads the weight vector.
    pub fn is_weighted(self) -> bool {
        matches!(self, Method::Tcct | Method::Cct)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tcct" => Ok(Method::Tcct),
            "cct" => Ok(Method::Cct),
            "fisher" => Ok(Method::Fisher),
            "tippett" => Ok(Method::Tippett),
            "tmin" | "t_min" => Ok(Method::TMin),
            _ => Err(Error::Domain("unknown combination method")),
        }
    }
}

/// Diagnostic flags attached to a [`CombinedResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct Flags(u8);

impl Flags {
    pub const NONE: Flags = Flags(0);
    /// Every p-value was `>= 0.5`, so TCCT had nothing to sum.
    pub const ALL_TRUNCATED: Flags = Flags(1);
    /// The statistic is `+inf` or `-inf`.
    pub const INFINITE_STAT: Flags = Flags(1 << 1);
    /// Input had no defensible combined value (CCT with both 0 and 1).
    pub const DEGENERATE_INPUT: Flags = Flags(1 << 2);
    /// Floating-point evaluation left `[0, 1]` and was clamped.
    pub const CLAMPED: Flags = Flags(1 << 3);

    const NAMES: [(Flags, &'static str); 4] = [
        (Flags::ALL_TRUNCATED, "ALL_TRUNCATED"),
        (Flags::INFINITE_STAT, "INFINITE_STAT"),
        (Flags::DEGENERATE_INPUT, "DEGENERATE_INPUT"),
        (Flags::CLAMPED, "CLAMPED"),
    ];

    pub fn contains(self, other: Flags) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn insert(&mut self, other: Flags) {
        self.0 |= other.0;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn names(self) -> impl Iterator<Item = &'static str> {
        Flags::NAMES
            .into_iter()
            .filter(move |(flag, _)| self.contains(*flag))
            .map(|(_, name)| name)
    }
}

impl core::ops::BitOr for Flags {
    type Output = Flags;

    fn bitor(self, rhs: Flags) -> Flags {
        Flags(self.0 | rhs.0)
    }
}

/// Flag names joined with `|`; empty when no flag is set.
impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, name) in self.names().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            f.write_str(name)?;
        }
        Ok(())
    }
}

/// A non-empty list of p-values, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueVector(Vec<f64>);

impl PValueVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(&bad) = values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidProbability(bad));
        }
        Ok(PValueVector(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl TryFrom<Vec<f64>> for PValueVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        PValueVector::new(values)
    }
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty);
        }
        if weights.iter().any(|w| !(*w >= 0.0) || w.is_infinite()) {
            return Err(Error::InvalidWeights(
                "weights must be finite and nonnegative",
            ));
        }
        let total: f64 = weights.iter().sum();
        if libm::fabs(total - 1.0) > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidWeights("weights must sum to 1"));
        }
        Ok(WeightVector(weights))
    }

    /// `w_i = 1 / d`.
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Empty);
        }
        Ok(WeightVector(vec![1.0 / d as f64; d]))
    }

    /// Divides nonnegative raw weights by their sum.
    pub fn normalized(raw: &[f64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Empty);
        }
        if raw.iter().any(|w| !(*w >= 0.0) || w.is_infinite()) {
            return Err(Error::InvalidWeights(
                "weights must be finite and nonnegative",
            ));
        }
        let total: f64 = raw.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidWeights("weights sum to zero"));
        }
        Ok(WeightVector(raw.iter().map(|w| w / total).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinedResult {
    pub method: Method,
    /// Combined statistic; may be infinite.
    pub statistic: f64,
    /// Combined p-value in `[0, 1]`.
    pub p_value: f64,
    pub flags: Flags,
}

impl CombinedResult {
    fn finish(method: Method, statistic: f64, raw_p: f64, mut flags: Flags) -> Self {
        if statistic.is_infinite() {
            flags.insert(Flags::INFINITE_STAT);
        }
        let p_value = raw_p.clamp(0.0, 1.0);
        if p_value != raw_p {
            flags.insert(Flags::CLAMPED);
        }
        CombinedResult {
            method,
            statistic,
            p_value,
            flags,
        }
    }
}

enum WeightsRef<'a> {
    Uniform(f64),
    Given(&'a [f64]),
}

impl WeightsRef<'_> {
    #[inline]
    fn get(&self, i: usize) -> f64 {
        match self {
            WeightsRef::Uniform(w) => *w,
            WeightsRef::Given(ws) => ws[i],
        }
    }
}

fn weights_for<'a>(p: &PValueVector, w: Option<&'a WeightVector>) -> Result<WeightsRef<'a>> {
    match w {
        None => Ok(WeightsRef::Uniform(1.0 / p.len() as f64)),
        Some(w) if w.len() != p.len() => Err(Error::LengthMismatch {
            expected: p.len(),
            found: w.len(),
        }),
        Some(w) => Ok(WeightsRef::Given(w.as_slice())),
    }
}

/// Truncated Cauchy combination test. `None` weights means uniform `1/d`.
pub fn tcct(p: &PValueVector, w: Option<&WeightVector>) -> Result<CombinedResult> {
    let weights = weights_for(p, w)?;
    let mut statistic = 0.0;
    let mut any_kept = false;
    for (i, &pi) in p.as_slice().iter().enumerate() {
        if pi < 0.5 {
            any_kept = true;
            let wi = weights.get(i);
            if wi > 0.0 {
                statistic += wi * cauchy_score(pi);
            }
        }
    }
    let flags = if any_kept {
        Flags::NONE
    } else {
        Flags::ALL_TRUNCATED
    };
    Ok(CombinedResult::finish(
        Method::Tcct,
        statistic,
        cauchy_tail(statistic),
        flags,
    ))
}

/// Cauchy combination test (untruncated).
///
/// Any positively weighted `p = 1` sends the statistic to `-inf` and the
/// combined p-value to one; a positively weighted exact 0 together with an
/// exact 1 is an [`Error::IndeterminateStatistic`].
pub fn cct(p: &PValueVector, w: Option<&WeightVector>) -> Result<CombinedResult> {
    let weights = weights_for(p, w)?;
    let mut statistic = 0.0;
    let mut has_zero = false;
    let mut has_one = false;
    for (i, &pi) in p.as_slice().iter().enumerate() {
        let wi = weights.get(i);
        if wi > 0.0 {
            has_zero |= pi == 0.0;
            has_one |= pi == 1.0;
            statistic += wi * cauchy_score(pi);
        }
    }
    if has_zero && has_one {
        return Err(Error::IndeterminateStatistic);
    }
    Ok(CombinedResult::finish(
        Method::Cct,
        statistic,
        cauchy_tail(statistic),
        Flags::NONE,
    ))
}

/// Fisher's method, `-2 sum ln p_i ~ chi^2_{2d}` under independence.
pub fn fisher(p: &PValueVector) -> CombinedResult {
    let values = p.as_slice();
    if values.contains(&0.0) {
        return CombinedResult::finish(Method::Fisher, f64::INFINITY, 0.0, Flags::NONE);
    }
    let statistic = -2.0 * values.iter().map(|&pi| libm::log(pi)).sum::<f64>();
    // statistic >= 0 and 2d is even, so the closed form always applies
    let df = 2 * values.len() as u32;
    let p_value = chisq_even_sf(statistic.max(0.0), df).unwrap_or(0.0);
    CombinedResult::finish(Method::Fisher, statistic, p_value, Flags::NONE)
}

/// Tippett's minimum-p method, `1 - (1 - min p)^d`.
pub fn tippett(p: &PValueVector) -> CombinedResult {
    let min = p.min();
    let d = p.len() as f64;
    // -expm1(d log1p(-m)) keeps precision when d * m is small
    let p_value = if min >= 1.0 {
        1.0
    } else {
        -libm::expm1(d * libm::log1p(-min))
    };
    CombinedResult::finish(Method::Tippett, min, p_value, Flags::NONE)
}

/// Cauchy-transformed minimum, `tan((0.5 - p_(1)) pi) / d`, referred to the
/// standard Cauchy tail.
pub fn t_min(p: &PValueVector) -> CombinedResult {
    let statistic = cauchy_score(p.min()) / p.len() as f64;
    CombinedResult::finish(Method::TMin, statistic, cauchy_tail(statistic), Flags::NONE)
}

/// Dispatches to the requested method. Weights are ignored by the
/// unweighted methods (Fisher, Tippett, T_min).
pub fn combine(
    method: Method,
    p: &PValueVector,
    w: Option<&WeightVector>,
) -> Result<CombinedResult> {
    match method {
        Method::Tcct => tcct(p, w),
        Method::Cct => cct(p, w),
        Method::Fisher => Ok(fisher(p)),
        Method::Tippett => Ok(tippett(p)),
        Method::TMin => Ok(t_min(p)),
    }
}
