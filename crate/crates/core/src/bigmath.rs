//! Small helpers over `num-bigint` used across the crate.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

/// `⌈lg x⌉` for `x ≥ 1`.
pub fn ceil_log2(x: &BigUint) -> u64 {
    assert!(!x.is_zero(), "ceil_log2 of zero");
    let bits = x.bits();
    if x.trailing_zeros() == Some(bits - 1) {
        bits - 1
    } else {
        bits
    }
}

/// Real-valued base-2 logarithm of a positive big integer.
pub fn log2(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log2 of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite for <= 1000 bits").log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit head");
    top.log2() + shift as f64
}

/// Uniform sample from the closed range `[lo, hi]`.
pub fn uniform_inclusive<R: Rng + ?Sized>(rng: &mut R, lo: &BigUint, hi: &BigUint) -> BigUint {
    assert!(lo <= hi, "empty range");
    rng.gen_biguint_range(lo, &(hi + BigUint::one()))
}

/// Lowercase hexadecimal without leading zeros; zero is `"0"`.
pub fn to_hex(x: &BigUint) -> String {
    x.to_str_radix(16)
}
