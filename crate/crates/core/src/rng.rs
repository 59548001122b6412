//! Seed derivation. Every run has one root seed; components get independent
//! generators through labeled splits, so two algorithms compared on the same
//! root seed see the same stream permutation but flip different coins.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type RunRng = ChaCha8Rng;

pub const STREAM_LABEL: &str = "stream";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a over the label, mixed with the root and a numeric discriminator.
pub fn derive_seed(root: u64, label: &str, index: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(splitmix64(root ^ h).wrapping_add(index))
}

pub fn derive_rng(root: u64, label: &str, index: u64) -> RunRng {
    RunRng::seed_from_u64(derive_seed(root, label, index))
}
