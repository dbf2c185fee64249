//! Published worked example used as golden vectors.

pub mod appendix_a {
    use num_bigint::BigUint;

    use crate::block::{BitBlock, NoiseVector};
    use crate::decrypt::Branch;
    use crate::keygen::{KeyMaterial, LeverPermutation};
    use crate::sequence::ExtraSuperincreasing;

    pub const A: [u64; 8] = [2, 4, 11, 29, 76, 199, 523, 1368];
    pub const M: u64 = 3581;
    pub const W: u64 = 863;
    pub const DELTA: u64 = 1128;
    pub const DELTA_INV: u64 = 1127;
    pub const NEG_W: u64 = 2718;
    pub const LEVER: [u32; 8] = [13, 2, 9, 7, 8, 3, 6, 11];
    pub const C: [u64; 8] = [2034, 3376, 134, 88, 2402, 746, 2833, 607];
    pub const PLAINTEXT: &str = "10101001";
    pub const NOISE: &str = "00100111";
    pub const L: [u32; 8] = [4, 3, 3, 2, 2, 1, 1, 1];
    pub const CIPHERTEXT: u64 = 3204;
    pub const S0: u64 = 1260;
    pub const K: u64 = 115;
    pub const TARGET: u64 = 2283;
    /// Greedy pass on [`TARGET`]: position, branch, residual after the step.
    pub const TRACE: [(usize, Branch, u64); 8] = [
        (8, Branch::One, 915),
        (7, Branch::Noise, 392),
        (6, Branch::Noise, 193),
        (5, Branch::One, 41),
        (4, Branch::Skip, 41),
        (3, Branch::One, 8),
        (2, Branch::Skip, 8),
        (1, Branch::One, 0),
    ];

    /// The unpadded (`ñ = n = 8`) key built from the published parts.
    pub fn key_material() -> KeyMaterial {
        KeyMaterial::from_parts(
            ExtraSuperincreasing::from_u64s(&A).expect("published sequence is valid"),
            BigUint::from(M),
            BigUint::from(W),
            BigUint::from(DELTA),
            LeverPermutation::new(LEVER.to_vec()).expect("published lever is injective"),
            8,
        )
        .expect("published key is consistent")
    }

    pub fn block() -> BitBlock {
        BitBlock::parse_raw(PLAINTEXT).expect("valid bit string")
    }

    pub fn noise() -> NoiseVector {
        NoiseVector::parse(NOISE).expect("valid bit string")
    }
}
