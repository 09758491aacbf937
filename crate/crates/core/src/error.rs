use core::fmt;

/// Everything that can go wrong in the core crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A probability that is NaN or outside `[0, 1]`.
    InvalidProbability(f64),
    /// A NaN where a real number was required.
    NotANumber,
    /// An argument outside the domain of a function.
    Domain(&'static str),
    /// An input that must hold at least one element was empty.
    Empty,
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    InvalidWeights(&'static str),
    /// CCT saw an exact 0 and an exact 1 together, so the statistic is `inf - inf`.
    IndeterminateStatistic,
    ConstantCovariate,
    /// Zero sample variance where a t statistic needs a positive one.
    DegenerateSample,
    NonBinaryResponse,
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidProbability(p) => {
                write!(f, "invalid probability {p}: must lie in [0, 1]")
            }
            Error::NotANumber => f.write_str("NaN input"),
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::Empty => f.write_str("empty input"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::InvalidWeights(why) => write!(f, "invalid weights: {why}"),
            Error::IndeterminateStatistic => {
                f.write_str("indeterminate CCT statistic: p-values of exactly 0 and 1 together")
            }
            Error::ConstantCovariate => f.write_str("covariate is constant"),
            Error::DegenerateSample => f.write_str("sample variance is zero"),
            Error::NonBinaryResponse => f.write_str("response must be 0/1"),
            Error::InvalidConfig(why) => write!(f, "invalid configuration: {why}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
