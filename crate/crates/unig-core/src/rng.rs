//! Seed derivation for reproducible sub-streams.

/// Derives an independent seed for sub-run `index` of a base seed.
///
/// Uses the splitmix64 finalizer, so neighbouring indices yield unrelated
/// streams. Every seeded component (splits, per-split training runs, trial
/// subsampling) goes through this, which keeps whole-experiment outputs a
/// pure function of one user-facing seed.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
