//! Seeded, splittable random streams.
//!
//! A [`StreamSeed`] names a ChaCha8 keystream: the 64-bit seed selects the key and
//! the stream id selects one of 2^64 independent counter-based streams under that key.
//! Estimators split their sample budget into [`BATCHES`] fixed batches, each drawing
//! from its own substream, and merge batch results in index order. The batch layout
//! does not depend on the worker count, so results are bit-identical for any thread pool.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Number of batches every sampled quantity is split into.
pub const BATCHES: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamSeed {
    pub seed: u64,
    pub stream: u64,
}

impl StreamSeed {
    pub fn new(seed: u64) -> Self {
        StreamSeed { seed, stream: 0 }
    }

    /// Child stream `k`. Children of distinct parents or distinct `k` do not collide
    /// except with negligible probability.
    pub fn substream(&self, k: u64) -> Self {
        StreamSeed {
            seed: self.seed,
            stream: splitmix64(self.stream ^ splitmix64(k.wrapping_add(0x9e37_79b9_7f4a_7c15))),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Size of batch `i` when `total` samples are split into [`BATCHES`] batches.
pub fn batch_size(total: u64, i: u64) -> u64 {
    total / BATCHES + u64::from(i < total % BATCHES)
}

/// Run `work(rng, batch_len)` once per batch and return the results in batch order.
pub fn run_batches<T, F>(seed: StreamSeed, total: u64, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    map_indexed(BATCHES, |i| {
        let mut rng = seed.substream(i).rng();
        work(&mut rng, batch_size(total, i))
    })
}

/// Evaluate `f(0..count)` and return the results in index order.
pub fn map_indexed<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(&f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Running sums for a sample mean and its standard error.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum / self.count as f64
        }
    }

    /// Standard error of the mean using the unbiased sample variance.
    pub fn stderr(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        let mean = self.sum / n;
        let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }

    pub fn merged<'a>(parts: impl IntoIterator<Item = &'a Moments>) -> Moments {
        let mut acc = Moments::default();
        for p in parts {
            acc.merge(p);
        }
        acc
    }
}

/// Mean and standard error of a 0/1 indicator with `hits` successes in `total` trials.
pub fn binomial(hits: u64, total: u64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 0.0);
    }
    let n = total as f64;
    let p = hits as f64 / n;
    let se = if total > 1 {
        (p * (1.0 - p) / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (p, se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn batches_cover_total() {
        for total in [0u64, 1, 63, 64, 65, 1_000_003] {
            let s: u64 = (0..BATCHES).map(|i| batch_size(total, i)).sum();
            assert_eq!(s, total);
        }
    }

    #[test]
    fn substreams_differ() {
        let s = StreamSeed::new(7);
        let a: u64 = s.substream(0).rng().random();
        let b: u64 = s.substream(1).rng().random();
        let c: u64 = s.substream(0).rng().random();
        assert_ne!(a, b);
        assert_eq!(a, c);
        assert_ne!(s.substream(1).substream(0), s.substream(0).substream(1));
    }

    #[test]
    fn batch_results_ordered() {
        let out = run_batches(StreamSeed::new(3), 640, |rng, len| (len, rng.random::<u32>()));
        let again = run_batches(StreamSeed::new(3), 640, |rng, len| (len, rng.random::<u32>()));
        assert_eq!(out, again);
        assert!(out.iter().all(|(len, _)| *len == 10));
    }

    #[test]
    fn moments_stderr() {
        let mut m = Moments::default();
        for x in [1.0, 2.0, 3.0, 4.0] {
            m.push(x);
        }
        assert!((m.mean() - 2.5).abs() < 1e-15);
        // sample variance 5/3, stderr sqrt(5/12)
        assert!((m.stderr() - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }
}
