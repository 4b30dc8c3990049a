use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent sub-seed from a base seed and a list of tags.
pub(crate) fn derive(base: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(splitmix64(base.wrapping_add(GOLDEN)), |acc, &t| {
        splitmix64(acc ^ splitmix64(t.wrapping_add(GOLDEN)))
    })
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
