//! Counter-based splittable random stream.
//!
//! The `n`-th output of a stream is `mix(seed + n * gamma)`, so any position
//! can be reached in O(1) and a stream never carries hidden state beyond its
//! counter. Sub-streams derive a fresh `(seed, gamma)` pair from the parent
//! key and an index, which is how Monte Carlo batches get independent,
//! scheduling-invariant randomness.

use num_complex::Complex64;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn mix64_alt(mut z: u64) -> u64 {
    z = (z ^ (z >> 33)).wrapping_mul(0xff51_afd7_ed55_8ccd);
    z = (z ^ (z >> 33)).wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    z ^ (z >> 33)
}

/// Odd increment with enough bit transitions to avoid weak Weyl sequences.
fn mix_gamma(z: u64) -> u64 {
    let g = mix64_alt(z) | 1;
    if (g ^ (g >> 1)).count_ones() < 24 {
        g ^ 0xaaaa_aaaa_aaaa_aaaa
    } else {
        g
    }
}

/// A reproducible stream of 64-bit random words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomStream {
    seed: u64,
    gamma: u64,
    counter: u64,
}

impl RandomStream {
    /// Root stream for a user-visible seed.
    pub fn new(seed: u64) -> Self {
        RandomStream {
            seed: mix64(seed),
            gamma: mix_gamma(seed.wrapping_add(GOLDEN_GAMMA)),
            counter: 0,
        }
    }

    /// Independent child stream number `index`. Does not depend on how many
    /// words the parent has produced.
    pub fn substream(&self, index: u64) -> Self {
        let key = mix64(self.seed ^ mix64_alt(index.wrapping_mul(GOLDEN_GAMMA) ^ self.gamma));
        RandomStream {
            seed: mix64(key),
            gamma: mix_gamma(key ^ self.seed),
            counter: 0,
        }
    }

    /// Number of words drawn so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    /// Moves to an absolute position.
    pub fn seek(&mut self, position: u64) {
        self.counter = position;
    }

    /// Next raw 64-bit word.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.seed.wrapping_add(self.counter.wrapping_mul(self.gamma)))
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`, safe to pass to `ln`.
    #[inline]
    pub fn uniform_open_zero(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Exponential variable with unit mean.
    #[inline]
    pub fn exp1(&mut self) -> f64 {
        -libm::log(self.uniform_open_zero())
    }

    /// Circularly symmetric complex Gaussian with unit total variance:
    /// real and imaginary parts are independent `N(0, 1/2)`.
    #[inline]
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let radius = libm::sqrt(self.exp1());
        let theta = core::f64::consts::TAU * self.uniform();
        let (s, c) = libm::sincos(theta);
        Complex64::new(radius * c, radius * s)
    }

    /// Standard normal variable (Box-Muller, one of the pair discarded).
    pub fn standard_normal(&mut self) -> f64 {
        self.complex_gaussian().re * core::f64::consts::SQRT_2
    }

    /// Bernoulli trial with `P(true) = p`, resolved at 2^-64.
    #[inline]
    pub fn bernoulli_threshold(p: f64) -> u64 {
        if p <= 0.0 {
            0
        } else if p >= 1.0 {
            u64::MAX
        } else {
            (p * 18_446_744_073_709_551_616.0) as u64
        }
    }
}
