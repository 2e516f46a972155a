//! Counter-based mixing primitives shared by the sketching stages.
//!
//! All randomness in the sketching code is derived by hashing explicit
//! coordinates (seed, feature, sample, stream) so that parameter lookup
//! needs no stored state and is identical across runs and machines.

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Mix an arbitrary coordinate tuple into one 64-bit value.
#[inline]
pub fn mix_coords(seed: u64, coords: &[u64]) -> u64 {
    let mut x = splitmix(seed);
    for &c in coords {
        x = splitmix(x ^ c.wrapping_mul(0xD6E8_FEB8_6659_FD93));
    }
    x
}

/// Map a 64-bit value to a uniform double in the half-open interval (0, 1].
///
/// The top 53 bits are used; the +1 offset excludes zero so logarithms
/// of the result are always finite.
#[inline]
pub fn to_unit_open(x: u64) -> f64 {
    (((x >> 11) + 1) as f64) / (1u64 << 53) as f64
}

/// Map a 64-bit value to a uniform double in [0, 1).
#[inline]
pub fn to_unit_halfopen(x: u64) -> f64 {
    ((x >> 11) as f64) / (1u64 << 53) as f64
}
