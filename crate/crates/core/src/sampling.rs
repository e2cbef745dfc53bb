//! Deterministic, seed-driven randomness: uniform machine samples without
//! replacement and per-machine pseudo-random input tapes.
//!
//! Everything here is pinned so results reproduce bit-for-bit on any
//! platform:
//!
//! * The generator is splitmix64: state advances by 0x9e3779b97f4a7c15 and
//!   each output is the two-multiply finalizer of the new state.
//! * Per-machine tape seeds come from
//!   `mix64(seed_base ^ mix64(machine_index + 0x9e3779b97f4a7c15))` where
//!   `mix64` is the same finalizer.
//! * Samples without replacement use Floyd's algorithm over the index range,
//!   with unbiased rejection sampling for the uniform draws; the chosen set
//!   is returned sorted ascending.
//! * Tape bits fill the window left to right, one generator output per cell,
//!   keeping the low bit.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::machine::{MachineIndex, Tape, TmClass};

const GAMMA: u64 = 0x9e3779b97f4a7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a base seed and a discriminator
/// (machine index, stream id, ...).
#[inline]
pub fn mix_seed(seed_base: u64, discriminator: u64) -> u64 {
    mix64(seed_base ^ mix64(discriminator.wrapping_add(GAMMA)))
}

/// The splitmix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// A single fair bit (the low bit of the next output).
    #[inline]
    pub fn next_bit(&mut self) -> u8 {
        (self.next_u64() & 1) as u8
    }

    /// Uniform draw in `[0, bound)` by rejection, bias-free.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let zone = (u64::MAX / bound) * bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}

/// A reproducible uniform sample of a machine class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplePlan {
    pub class: TmClass,
    pub size: u64,
    pub seed: u64,
}

/// Draws `size` distinct values uniformly from `[0, space)`, sorted
/// ascending. Floyd's algorithm: for j over the last `size` slots, draw
/// uniformly from `[0, j]` and fall back to `j` itself on collision.
pub(crate) fn sample_range(space: u64, size: u64, seed: u64) -> Result<Vec<u64>> {
    if size > space {
        return Err(Error::SampleTooLarge { size, space });
    }
    let mut rng = SplitMix64::new(seed);
    let mut chosen: HashSet<u64> = HashSet::with_capacity(size as usize);
    for j in space - size..space {
        let candidate = rng.next_below(j + 1);
        if !chosen.insert(candidate) {
            chosen.insert(j);
        }
    }
    let mut indices: Vec<u64> = chosen.into_iter().collect();
    indices.sort_unstable();
    Ok(indices)
}

/// Uniform sample without replacement from the plan's machine space,
/// deterministic in the seed, sorted ascending by index.
pub fn sample_indices(plan: &SamplePlan) -> Result<Vec<MachineIndex>> {
    let space = plan.class.space_size()?;
    let indices = sample_range(space, plan.size, plan.seed)?;
    indices
        .into_iter()
        .map(|index| MachineIndex::new(plan.class, index))
        .collect()
}

/// Recipe for one machine's random input tape: fair bits on `[-radius,
/// radius]`, background 0 outside, fully determined by (seed_base,
/// machine_index).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomTapeSpec {
    /// Half-width of the explicit window; covering the step budget suffices
    /// since the head never leaves `[-steps, steps]`.
    pub radius: u32,
    pub seed_base: u64,
    pub machine_index: u64,
}

/// Generates the tape described by `spec`.
pub fn random_tape(spec: &RandomTapeSpec) -> Tape {
    let mut rng = SplitMix64::new(mix_seed(spec.seed_base, spec.machine_index));
    let width = 2 * spec.radius as usize + 1;
    let cells: Vec<u8> = (0..width).map(|_| rng.next_bit()).collect();
    Tape::with_window(0, -(spec.radius as i64), cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tm22() -> TmClass {
        TmClass::new(2, 2).unwrap()
    }

    fn tm32() -> TmClass {
        TmClass::new(3, 2).unwrap()
    }

    #[test]
    fn full_size_sample_is_every_index() {
        let plan = SamplePlan {
            class: tm22(),
            size: 4096,
            seed: 11,
        };
        let sample = sample_indices(&plan).unwrap();
        assert_eq!(sample.len(), 4096);
        for (i, m) in sample.iter().enumerate() {
            assert_eq!(m.index(), i as u64);
        }
    }

    #[test]
    fn same_seed_same_sample() {
        let plan = SamplePlan {
            class: tm32(),
            size: 5000,
            seed: 0xfeed,
        };
        assert_eq!(sample_indices(&plan).unwrap(), sample_indices(&plan).unwrap());
    }

    #[test]
    fn sample_is_sorted_and_distinct() {
        let plan = SamplePlan {
            class: tm32(),
            size: 20_000,
            seed: 3,
        };
        let sample = sample_indices(&plan).unwrap();
        assert_eq!(sample.len(), 20_000);
        for pair in sample.windows(2) {
            assert!(pair[0].index() < pair[1].index());
        }
        let space = tm32().space_size().unwrap();
        assert!(sample.iter().all(|m| m.index() < space));
    }

    #[test]
    fn oversized_sample_rejected() {
        let plan = SamplePlan {
            class: tm22(),
            size: 4097,
            seed: 0,
        };
        assert!(matches!(
            sample_indices(&plan),
            Err(Error::SampleTooLarge { .. })
        ));
    }

    #[test]
    fn two_seeds_overlap_like_independent_uniform_samples() {
        let size = 5000u64;
        let a = sample_range(2_985_984, size, 1).unwrap();
        let b = sample_range(2_985_984, size, 2).unwrap();
        let set: HashSet<u64> = a.into_iter().collect();
        let overlap = b.iter().filter(|i| set.contains(i)).count() as f64;
        // Expected overlap is size^2 / space = 8.37; allow a generous 5x.
        let expected = size as f64 * size as f64 / 2_985_984.0;
        assert!(
            overlap <= 5.0 * expected,
            "overlap {overlap} vs expected {expected}"
        );
    }

    #[test]
    fn next_below_is_in_range_and_hits_everything_small() {
        let mut rng = SplitMix64::new(123);
        let mut seen = [false; 7];
        for _ in 0..1000 {
            let v = rng.next_below(7);
            assert!(v < 7);
            seen[v as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn tapes_are_deterministic_per_machine() {
        let spec = RandomTapeSpec {
            radius: 100,
            seed_base: 42,
            machine_index: 31337,
        };
        assert_eq!(random_tape(&spec), random_tape(&spec));
    }

    #[test]
    fn different_machines_get_different_tapes() {
        let mut differing = 0;
        for pair in 0..1000u64 {
            let a = random_tape(&RandomTapeSpec {
                radius: 30,
                seed_base: 9,
                machine_index: 2 * pair,
            });
            let b = random_tape(&RandomTapeSpec {
                radius: 30,
                seed_base: 9,
                machine_index: 2 * pair + 1,
            });
            if a != b {
                differing += 1;
            }
        }
        assert_eq!(differing, 1000);
    }

    #[test]
    fn window_has_exact_cell_count() {
        let tape = random_tape(&RandomTapeSpec {
            radius: 3,
            seed_base: 5,
            machine_index: 0,
        });
        assert_eq!(tape.window_len(), 7);
        assert_eq!(tape.background(), 0);
        // Outside the window the background shows through.
        assert_eq!(tape.read(4), 0);
        assert_eq!(tape.read(-4), 0);
    }

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 1234567, per the published splitmix64
        // reference implementation.
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
        assert_eq!(rng.next_u64(), 9817491932198370423);
    }

    #[test]
    fn index_bins_pass_chi_square_smoke_test() {
        // 10^5 single-index draws over TM(3,2), 64 equal bins (the space
        // divides evenly). This guards the generator plumbing, nothing more.
        let space = 2_985_984u64;
        let bin_width = space / 64;
        let mut bins = [0u64; 64];
        for seed in 0..100_000u64 {
            let idx = sample_range(space, 1, seed).unwrap()[0];
            bins[(idx / bin_width) as usize] += 1;
        }
        let expected = 100_000.0 / 64.0;
        let chi2: f64 = bins
            .iter()
            .map(|&o| {
                let d = o as f64 - expected;
                d * d / expected
            })
            .sum();
        let dist = statrs::distribution::ChiSquared::new(63.0).unwrap();
        let p = 1.0 - statrs::distribution::ContinuousCDF::cdf(&dist, chi2);
        assert!(p > 1e-6, "chi2 {chi2}, p {p}");
    }
}
