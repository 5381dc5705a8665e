//! Seeded random streams with a fixed splitting rule, so every run is
//! reproducible bit-for-bit from (seed, stream id).

use rand::rngs::StdRng;
use rand::{RngCore, SeedableRng};

/// splitmix64 finalizer; decorrelates nearby seeds.
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// The root stream for a run seed.
pub fn run_rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(mix(seed))
}

/// A derived stream: stream `id` of run `seed`. Distinct ids give
/// independent streams; the same (seed, id) always gives the same stream.
pub fn stream_rng(seed: u64, id: u64) -> StdRng {
    StdRng::seed_from_u64(mix(mix(seed) ^ mix(id.wrapping_add(1))))
}

/// Draws an index from a probability vector using a single uniform draw and
/// a cumulative scan. Rounding slack falls to the last index with positive
/// probability, so a zero-probability action is never drawn.
pub fn sample_index<R: RngCore>(probs: &[f64], rng: &mut R) -> usize {
    debug_assert!(!probs.is_empty());
    let draw: f64 = rand::Rng::gen(rng);
    let mut cumulative = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        cumulative += p;
        if p > 0.0 && draw < cumulative {
            return i;
        }
    }
    probs
        .iter()
        .rposition(|&p| p > 0.0)
        .expect("distribution has positive mass")
}

/// An `RngCore` that replays a scripted sequence of unit-interval draws.
///
/// Useful for forcing a sampler down a chosen path in tests: each scripted
/// value comes back from `rng.gen::<f64>()` rounded down to the generator's
/// 2^-53 grid. Panics when the script runs dry.
pub struct ScriptedRng {
    draws: Vec<u64>,
    next: usize,
}

impl ScriptedRng {
    /// Scripts the given unit-interval values, in order.
    pub fn new(values: &[f64]) -> ScriptedRng {
        let draws = values
            .iter()
            .map(|&v| {
                assert!((0.0..1.0).contains(&v), "scripted draw outside [0, 1)");
                // Inverse of rand's Standard f64 conversion (53-bit mantissa).
                ((v * (1u64 << 53) as f64) as u64) << 11
            })
            .collect();
        ScriptedRng { draws, next: 0 }
    }

    pub fn exhausted(&self) -> bool {
        self.next == self.draws.len()
    }
}

impl RngCore for ScriptedRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let v = self.draws[self.next];
        self.next += 1;
        v
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        for chunk in dest.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}
