//! Reproducible random streams for parallel Monte Carlo.
//!
//! Every trial draws from its own ChaCha8 stream: the key comes from the seed and the
//! 64-bit stream id is the trial index. ChaCha is counter based, so streams never overlap and
//! a trial's draws do not depend on which worker ran it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream for `(seed, index)`.
pub fn derive_substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Child seed for a named consumer, so adding a consumer never perturbs existing ones.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    // FNV-1a over the label, then one SplitMix64 finalization with the master seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix64(master ^ splitmix64(h))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
