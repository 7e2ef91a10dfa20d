//! Seed derivation. Every random stream in a run is keyed by a tuple of
//! integers mixed through splitmix64, so results never depend on the order
//! in which streams are created or consumed.

use rand::SeedableRng;
use rand_pcg::Pcg64Mcg;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// One splitmix64 output step applied to `x`.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(GOLDEN);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Folds `parts` into `base`, one splitmix step per part.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(base), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// A fast generator for the stream keyed by `(base, parts...)`.
pub fn stream(base: u64, parts: &[u64]) -> Pcg64Mcg {
    Pcg64Mcg::seed_from_u64(derive_seed(base, parts))
}

/// Stream labels used by the simulator.
pub mod label {
    pub const TOPOLOGY: u64 = 1;
    pub const RATES: u64 = 2;
    pub const ARRIVALS: u64 = 3;
    pub const SERVICE: u64 = 4;
    pub const PROTOCOL: u64 = 5;
    pub const RUN: u64 = 6;
}
