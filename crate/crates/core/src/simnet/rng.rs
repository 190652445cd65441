//! Counter-based deterministic random numbers.
//!
//! Simulation outputs must be reproducible bit-for-bit from a seed, and must
//! stay reproducible when generation code is reordered. A stateful generator
//! breaks under reordering, so this one is purely functional: a
//! [`CounterRng`] is just a seed, child streams are derived by mixing in a
//! label, and the `i`-th draw of a stream is a pure function of (seed,
//! labels…, i). Any draw can be recomputed in any order.
//!
//! Mixing is splitmix64's finalizer applied twice, which is plenty for
//! low-entropy counter inputs; string labels are folded in with FNV-1a.

/// A labeled, counter-indexed random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    seed: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    let mut h = 0xCBF2_9CE4_8422_2325u64;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01B3);
    }
    h
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { seed }
    }

    /// Child stream for a numeric label. Distinct labels give independent
    /// streams; deriving is associative-free, so fix a label order and keep
    /// it.
    pub fn stream(&self, label: u64) -> CounterRng {
        CounterRng { seed: mix(self.seed ^ label) }
    }

    /// Child stream for a string label.
    pub fn stream_str(&self, label: &str) -> CounterRng {
        self.stream(fnv1a(label))
    }

    /// The `i`-th 64-bit draw of this stream.
    pub fn draw(&self, i: u64) -> u64 {
        mix(mix(self.seed ^ i))
    }

    /// The `i`-th draw as a uniform f64 in `[0, 1)`.
    pub fn unit(&self, i: u64) -> f64 {
        (self.draw(i) >> 11) as f64 / (1u64 << 53) as f64
    }

    /// The `i`-th draw reduced below `n` (`n > 0`). Modulo bias is
    /// irrelevant at the `n` values used here (thousands at most).
    pub fn below(&self, i: u64, n: u64) -> u64 {
        self.draw(i) % n
    }
}

/// Deterministically choose `k` distinct values from `0..n`.
pub fn sample_indices(rng: &CounterRng, n: usize, k: usize) -> Vec<usize> {
    assert!(k <= n, "cannot sample {k} of {n}");
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.below(i as u64, (n - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool.sort_unstable();
    pool
}
