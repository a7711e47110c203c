//! Seeded pseudo-random generator shared by every stochastic step.
//!
//! All randomness (dataset shuffles, weight init, SGD sample order, synthetic
//! corpus bytes) comes from xoshiro256++ seeded through SplitMix64
//! (`SeedableRng::seed_from_u64`). Both algorithms are fully specified and
//! platform-independent, so a seed reproduces the same stream everywhere.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub type Rng = Xoshiro256PlusPlus;

pub fn seeded(seed: u64) -> Rng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}
