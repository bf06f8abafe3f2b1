//! Counter-based randomness.
//!
//! Every random quantity in the crate is a pure function of a 64-bit key and
//! a counter, so results never depend on evaluation order or thread count.
//!
//! The mixer is the splitmix64 finalizer:
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//! z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//! z =  z ^ (z >> 31)
//! ```
//!
//! Keys are derived with [`mix`]: `mix(key, i) = fmix(fmix(key) + (i + 1) * 0x9e3779b97f4a7c15)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
pub fn fmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive the key of stream `index` under `key`.
#[inline]
pub fn mix(key: u64, index: u64) -> u64 {
    fmix64(fmix64(key).wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// The `index`-th word of the counter stream keyed by `key`.
#[inline]
pub fn word(key: u64, index: u64) -> u64 {
    mix(key, index)
}

/// `+1` or `-1` from the top bit of [`word`].
#[inline]
pub fn sign(key: u64, index: u64) -> i8 {
    if word(key, index) >> 63 == 0 {
        1
    } else {
        -1
    }
}

/// A sequential generator for a derived stream, used where a stream of
/// non-uniform variates is needed (restart points of the ascent).
pub fn stream(key: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(key, index))
}
