//! Reproducible, splittable random streams.
//!
//! Every sample in a batch owns one ChaCha8 stream addressed by
//! `(seed, stream_id)`. ChaCha is counter based, so the draw sequence of a
//! stream does not depend on which worker produced it or in what order.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// The `i`-th sub-stream of a batch that starts at this stream id.
    pub fn offset(&self, i: u64) -> Self {
        Self {
            seed: self.seed,
            stream_id: self.stream_id.wrapping_add(i),
        }
    }
}

/// Uniform draw on the open interval (0, 1).
#[inline]
pub fn uniform_open<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

#[inline]
pub fn exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Exp1)
}

#[inline]
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_stream_same_draws() {
        let s = RngStream::new(7, 3);
        let a: Vec<u64> = (0..16).map(|_| s.rng().random()).collect();
        let mut r1 = s.rng();
        let mut r2 = s.rng();
        for _ in 0..100 {
            assert_eq!(r1.random::<u64>(), r2.random::<u64>());
        }
        assert!(a.iter().all(|&x| x == a[0]));
    }

    #[test]
    fn distinct_streams_differ() {
        let mut r1 = RngStream::new(7, 3).rng();
        let mut r2 = RngStream::new(7, 4).rng();
        let same = (0..64)
            .filter(|_| r1.random::<u64>() == r2.random::<u64>())
            .count();
        assert_eq!(same, 0);
    }

    #[test]
    fn open_uniform_never_hits_the_boundary() {
        let mut rng = RngStream::new(1, 1).rng();
        for _ in 0..100_000 {
            let u = uniform_open(&mut rng);
            assert!(u > 0.0 && u < 1.0);
        }
    }
}
