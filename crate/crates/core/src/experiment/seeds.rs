//! Seed splitting. A child seed is the `(index + 1)`-th output of a SplitMix64
//! generator whose state starts at the parent seed, so children depend only on
//! `(parent, index)` and are stable when the number of siblings changes.

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Documented in every manifest.
pub const SEED_SCHEME: &str =
    "splitmix64: realization seed = child(master_seed, realization_index); state seed = child(realization seed, state_index); child(p, i) = mix(p + (i + 1) * 0x9e3779b97f4a7c15)";

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn child_seed(parent: u64, index: u64) -> u64 {
    mix(parent.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

pub fn realization_seed(master: u64, realization: usize) -> u64 {
    child_seed(master, realization as u64)
}

pub fn state_seed(realization_seed: u64, state: usize) -> u64 {
    child_seed(realization_seed, state as u64)
}
