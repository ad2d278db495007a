//! Seedable, splittable random streams.

#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// A ChaCha keystream addressed by `(seed, stream)`.
///
/// Equal pairs reproduce equal draw sequences. Different stream ids select
/// disjoint keystreams of the same key, so streams are independent.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        RngStream { seed, stream, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Child stream for index `child`; a pure function of `(seed, stream, child)`,
    /// independent of how far this stream has been consumed.
    pub fn split(&self, child: u64) -> RngStream {
        let id = splitmix64(self.stream ^ splitmix64(child.wrapping_add(0x5851_f42d_4c95_7f2d)));
        RngStream::new(self.seed, id)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on [0, 1) with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform on the open interval (0, 1).
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal by Box-Muller (one variate per call).
    #[inline]
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform_open();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
    }

    /// Uniform sign in {-1, +1}.
    #[inline]
    pub fn sign(&mut self) -> f64 {
        if self.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Uniform integer in `0..n` (Lemire's multiply-shift with rejection).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = (self.next_u64() as u128) * (n as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            xs.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_address_same_sequence() {
        let mut a = RngStream::new(7, 3);
        let mut b = RngStream::new(7, 3);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = RngStream::new(7, 3);
        let mut b = RngStream::new(7, 4);
        let same = (0..64).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn split_ignores_consumption() {
        let a = RngStream::new(1, 0);
        let mut b = a.clone();
        b.next_u64();
        assert_eq!(a.split(5).stream(), b.split(5).stream());
        assert_ne!(a.split(5).stream(), a.split(6).stream());
    }

    #[test]
    fn split_streams_uncorrelated() {
        let base = RngStream::new(11, 0);
        let mut x = base.split(0);
        let mut y = base.split(1);
        let n = 100_000;
        let mut sxy = 0.0;
        for _ in 0..n {
            sxy += (x.uniform() - 0.5) * (y.uniform() - 0.5);
        }
        // sd of the mean product is 1/(12 sqrt(n))
        assert!((sxy / n as f64).abs() < 5.0 / (12.0 * (n as f64).sqrt()));
    }

    #[test]
    fn below_in_range() {
        let mut r = RngStream::new(2, 2);
        let mut hits = [0u32; 7];
        for _ in 0..70_000 {
            hits[r.below(7) as usize] += 1;
        }
        for h in hits {
            assert!((h as i64 - 10_000).abs() < 500);
        }
    }
}
