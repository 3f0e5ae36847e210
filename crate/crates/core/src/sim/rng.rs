//! Seeded, stream-separated randomness.
//!
//! Every stream is a ChaCha8 keystream (`rand_chacha::ChaCha8Rng`, stream id
//! 0, block counter starting at 0). The 32-byte key is
//!
//! ```text
//! SHA-256( "powlab/rng/v1" || seed as u64 little-endian || stream name as UTF-8 )
//! ```
//!
//! so the same `(seed, stream)` pair yields the same draws on every
//! platform, and independent components draw from independent streams.
//! Uniform `f64` values are the top 53 bits of `next_u64` scaled by 2^-53.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{SimError, SimTime};

const DOMAIN: &[u8] = b"powlab/rng/v1";

#[derive(Clone, Debug)]
pub struct SimRng {
    seed: u64,
    stream: String,
    inner: ChaCha8Rng,
}

impl SimRng {
    pub fn new(seed: u64, stream: impl Into<String>) -> Self {
        let stream = stream.into();
        let mut h = Sha256::new();
        h.update(DOMAIN);
        h.update(seed.to_le_bytes());
        h.update(stream.as_bytes());
        let key: [u8; 32] = h.finalize().into();
        Self {
            seed,
            stream,
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    /// Child stream `"<parent>/<name>"` with the same seed. Independent of how
    /// many values the parent has already produced.
    pub fn substream(&self, name: &str) -> Self {
        Self::new(self.seed, format!("{}/{}", self.stream, name))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> &str {
        &self.stream
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.random::<f64>()
    }
}

impl RngCore for SimRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Exponential draw with the given mean, by inversion: `-mean * ln(1 - u)`.
pub fn sample_exponential(rng: &mut SimRng, mean: SimTime) -> Result<SimTime, SimError> {
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(SimError::NonPositiveMean(mean));
    }
    Ok(exp_draw(rng, mean))
}

#[inline]
pub(crate) fn exp_draw(rng: &mut impl Rng, mean: f64) -> f64 {
    let u: f64 = rng.random();
    -mean * (-u).ln_1p()
}
