//! Counter-based Gaussian sampling.
//!
//! A draw is a pure function of `(seed, stream, row, column)`. The bits come
//! from ChaCha8 addressed by word position, and the normal deviate is formed
//! with a Box-Muller step evaluated through `libm`, so the same key gives the
//! same value regardless of thread count or evaluation order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TWO_PI: f64 = std::f64::consts::TAU;

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent child seed, e.g. one per trial.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x632B_E59B_D9B4_E019)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StreamKey {
    seed: u64,
    stream: u64,
}

impl StreamKey {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    fn generator(&self) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        let mut state = self.seed;
        for chunk in key.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream);
        rng
    }

    // Four 32-bit words per cell; rows are 2^32 cells apart.
    fn word_pos(row: u64, col: u64) -> u128 {
        ((u128::from(row) << 32) + u128::from(col)) * 4
    }

    /// Standard normal draw at cell `(row, col)`.
    pub fn normal(&self, row: u64, col: u64) -> f64 {
        let mut rng = self.generator();
        rng.set_word_pos(Self::word_pos(row, col));
        box_muller(rng.next_u64(), rng.next_u64())
    }

    /// Standard normal draws for cells `(row, 0..len)`; equal to calling
    /// [`StreamKey::normal`] cell by cell.
    pub fn normal_row(&self, row: u64, len: usize) -> Vec<f64> {
        let mut rng = self.generator();
        rng.set_word_pos(Self::word_pos(row, 0));
        (0..len)
            .map(|_| box_muller(rng.next_u64(), rng.next_u64()))
            .collect()
    }

    /// Uniform draw in the open interval (0, 1) at cell `(row, col)`.
    pub fn uniform(&self, row: u64, col: u64) -> f64 {
        let mut rng = self.generator();
        rng.set_word_pos(Self::word_pos(row, col));
        open_unit(rng.next_u64())
    }

    /// Uniform draws in (0, 1) for cells `(row, 0..len)`.
    pub fn uniform_row(&self, row: u64, len: usize) -> Vec<f64> {
        let mut rng = self.generator();
        rng.set_word_pos(Self::word_pos(row, 0));
        (0..len)
            .map(|_| {
                let u = open_unit(rng.next_u64());
                rng.next_u64();
                u
            })
            .collect()
    }
}

fn open_unit(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

fn box_muller(a: u64, b: u64) -> f64 {
    let u1 = open_unit(a);
    let u2 = open_unit(b);
    (-2.0 * libm::log(u1)).sqrt() * libm::cos(TWO_PI * u2)
}
