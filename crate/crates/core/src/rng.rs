//! Counter-based random streams and the samplers built on them.
//!
//! [`RngStream`] is Philox4x32-10 keyed by a 64-bit seed, with the 128-bit
//! counter split into a 64-bit block index and a 64-bit stream id. Streams
//! that differ in either seed or stream id are independent by construction,
//! so parallel code derives one stream per replication instead of sharing.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::transform::Prob;

const PHILOX_M0: u32 = 0xD251_1F53;
const PHILOX_M1: u32 = 0xCD9E_8D57;
const PHILOX_W0: u32 = 0x9E37_79B9;
const PHILOX_W1: u32 = 0xBB67_AE85;

#[inline(always)]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let prod = u64::from(a) * u64::from(b);
    ((prod >> 32) as u32, prod as u32)
}

#[inline(always)]
fn philox_round(ctr: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let (hi0, lo0) = mulhilo(PHILOX_M0, ctr[0]);
    let (hi1, lo1) = mulhilo(PHILOX_M1, ctr[2]);
    [hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0]
}

/// The Philox4x32 block function with 10 rounds.
pub fn philox4x32_10(mut ctr: [u32; 4], mut key: [u32; 2]) -> [u32; 4] {
    ctr = philox_round(ctr, key);
    for _ in 1..10 {
        key[0] = key[0].wrapping_add(PHILOX_W0);
        key[1] = key[1].wrapping_add(PHILOX_W1);
        ctr = philox_round(ctr, key);
    }
    ctr
}

/// A deterministic random stream identified by `(seed, stream_id)`.
///
/// Not `Sync`-shared by design: advance it from one owner only and derive
/// fresh streams for other workers.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    block: u64,
    buf: [u32; 4],
    pos: usize,
    spare_normal: Option<f64>,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngStream {
            seed,
            stream,
            block: 0,
            buf: [0; 4],
            pos: 4,
            spare_normal: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream
    }

    fn refill(&mut self) {
        let ctr = [
            self.block as u32,
            (self.block >> 32) as u32,
            self.stream as u32,
            (self.stream >> 32) as u32,
        ];
        let key = [self.seed as u32, (self.seed >> 32) as u32];
        self.buf = philox4x32_10(ctr, key);
        self.block = self.block.wrapping_add(1);
        self.pos = 0;
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        if self.pos == 4 {
            self.refill();
        }
        let v = self.buf[self.pos];
        self.pos += 1;
        v
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let lo = u64::from(self.next_u32());
        let hi = u64::from(self.next_u32());
        lo | (hi << 32)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the open interval `(0, 1)`.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw (Marsaglia polar method).
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let scale = libm::sqrt(-2.0 * libm::log(s) / s);
                self.spare_normal = Some(v * scale);
                return u * scale;
            }
        }
    }

    /// Log of a Gamma(shape, 1) draw.
    ///
    /// Marsaglia-Tsang squeeze/rejection for `shape >= 1`; for `shape < 1`
    /// the boost `G(a) = G(a + 1) U^(1/a)` is applied in log space so tiny
    /// shapes do not underflow.
    fn ln_gamma_variate(&mut self, shape: f64) -> f64 {
        if shape < 1.0 {
            let boosted = self.ln_gamma_variate(shape + 1.0);
            return boosted + libm::log(self.next_open01()) / shape;
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / libm::sqrt(9.0 * d);
        loop {
            let x = self.standard_normal();
            let v = 1.0 + c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = self.next_open01();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 {
                return libm::log(d * v);
            }
            let ln_v = libm::log(v);
            if libm::log(u) < 0.5 * x2 + d * (1.0 - v + ln_v) {
                return libm::log(d) + ln_v;
            }
        }
    }

    /// Gamma(shape, 1) draw.
    pub fn gamma(&mut self, shape: f64) -> Result<f64> {
        if !(shape > 0.0) || shape.is_infinite() {
            return Err(Error::Domain("gamma shape must be positive and finite"));
        }
        Ok(libm::exp(self.ln_gamma_variate(shape)))
    }
}

/// One Beta(alpha, beta) draw from the ratio of two gamma draws.
pub fn sample_beta(rng: &mut RngStream, alpha: f64, beta: f64) -> Result<Prob> {
    if !(alpha > 0.0 && beta > 0.0) || alpha.is_infinite() || beta.is_infinite() {
        return Err(Error::Domain("beta shapes must be positive and finite"));
    }
    let lx = rng.ln_gamma_variate(alpha);
    let ly = rng.ln_gamma_variate(beta);
    // x / (x + y) evaluated so the smaller side keeps its relative precision
    let v = if lx >= ly {
        1.0 / (1.0 + libm::exp(ly - lx))
    } else {
        let r = libm::exp(lx - ly);
        r / (1.0 + r)
    };
    Prob::new(v)
}

/// Fills `out` with one exchangeable normal vector:
/// `X_i = sqrt(rho) Z_0 + sqrt(1 - rho) Z_i`.
pub fn fill_exchangeable_normal(rng: &mut RngStream, rho: f64, out: &mut [f64]) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain("exchangeable correlation must lie in [0, 1]"));
    }
    let shared = libm::sqrt(rho) * rng.standard_normal();
    let own = libm::sqrt(1.0 - rho);
    for x in out.iter_mut() {
        *x = shared + own * rng.standard_normal();
    }
    Ok(())
}

/// A d-vector of N(0, 1) marginals with every pairwise correlation `rho`.
pub fn sample_exchangeable_normal(rng: &mut RngStream, d: usize, rho: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; d];
    fill_exchangeable_normal(rng, rho, &mut out)?;
    Ok(out)
}
