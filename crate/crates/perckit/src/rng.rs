//! Counter-based random streams for reproducible parallel Monte Carlo.
//!
//! Every path / lattice sample gets its own stream derived from
//! `(master seed, stream index)`; values within a stream are a pure function
//! of the counter. Results are therefore independent of thread count and
//! scheduling, and any word of any stream can be regenerated in isolation
//! (used by the lattice sampler to fill occupancy words in parallel).
//!
//! The generator is the splitmix64 finalizer over a golden-ratio counter
//! walk, a standard construction for this purpose.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer: full-avalanche 64-bit mix.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn stream_key(seed: u64, stream: u64) -> u64 {
    mix64(mix64(seed ^ 0xA076_1D64_78BD_642F) ^ stream.wrapping_mul(GOLDEN))
}

/// Stateless access to word `index` of stream `(seed, stream)`.
#[inline]
pub fn word_at(seed: u64, stream: u64, index: u64) -> u64 {
    mix64(stream_key(seed, stream).wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// One independent random stream.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    ctr: u64,
    spare_normal: Option<f64>,
}

impl CounterRng {
    /// Stream `stream` of master seed `seed`.
    pub fn stream(seed: u64, stream: u64) -> Self {
        CounterRng {
            key: stream_key(seed, stream),
            ctr: 0,
            spare_normal: None,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.ctr = self.ctr.wrapping_add(GOLDEN);
        mix64(self.key.wrapping_add(self.ctr))
    }

    /// Uniform in the half-open interval (0, 1].
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal via the Box-Muller pair method (the project-wide
    /// convention; the second variate of each pair is cached).
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let mag = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        self.spare_normal = Some(mag * s);
        mag * c
    }
}
