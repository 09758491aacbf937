//! Truncated Cauchy combination of arbitrarily correlated p-values.
//!
//! The crate is `no_std` (it needs `alloc`) and contains everything that is
//! pure computation:
//!
//! - [`special`] and [`transform`]: deterministic special functions and the
//!   Cauchy transform pair.
//! - [`rng`]: a counter-based random stream plus the normal, gamma, beta and
//!   exchangeable-normal samplers built on it.
//! - [`combine`]: TCCT, CCT, Fisher, Tippett and the Cauchy-tail minimum.
//! - [`elementary`]: the per-coordinate tests whose p-values get combined.
//! - [`sim`]: seeded Monte Carlo scenario runners.
//!
//! ```
//! use tcct_core::combine::{tcct, cct, PValueVector};
//!
//! let p = PValueVector::new(vec![1e-5, 1.0]).unwrap();
//! let truncated = tcct(&p, None).unwrap();
//! let plain = cct(&p, None).unwrap();
//! assert!(truncated.p_value < 1e-4);
//! assert_eq!(plain.p_value, 1.0);
//! ```
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combine;
pub mod elementary;
mod error;
pub mod gof;
pub mod rng;
pub mod sim;
pub mod special;
pub mod transform;

pub use combine::{CombinedResult, Flags, Method, PValueVector, WeightVector};
pub use error::{Error, Result};
pub use rng::RngStream;
pub use transform::{CauchyScore, Prob};
