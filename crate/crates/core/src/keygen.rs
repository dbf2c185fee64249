//! Key generation.
//!
//! The public transform is `C_i = (A_i + W·ℓ(i))·δ mod M` where `{A_i}` is an
//! extra superincreasing sequence and `ℓ` a random injection into `[1, 2ñ]`.
//! The lever values are only held by [`KeyMaterial`]; [`keygen`] drops them.

use log::warn;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::bigmath::{ceil_log2, uniform_inclusive};
use crate::error::{Error, Result};
use crate::sequence::{gen_extra_superincreasing, ExtraSuperincreasing};

const MAX_ATTEMPTS: usize = 256;

/// How a key's block width relates to its payload width.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockLayout {
    /// `ñ = 3n/2`: `n` payload bits followed by `n/2` padding bits.
    Padded,
    /// `ñ = n`: the whole block is payload, no padding.
    Raw,
}

impl BlockLayout {
    pub fn infer(n_tilde: usize, n_payload: usize) -> Result<Self> {
        if n_payload == 0 {
            return Err(Error::InvalidParameter("payload width must be positive".into()));
        }
        if n_tilde == n_payload {
            Ok(BlockLayout::Raw)
        } else if n_payload.is_multiple_of(2) && n_tilde == 3 * n_payload / 2 {
            Ok(BlockLayout::Padded)
        } else {
            Err(Error::InvalidParameter(format!("block width {n_tilde} does not fit payload width {n_payload}")))
        }
    }
}

/// Secret injection from positions `1..=ñ` into `[1, 2ñ]`.
///
/// Deliberately not `Clone` and not serializable.
#[derive(Debug, PartialEq, Eq)]
pub struct LeverPermutation {
    values: Vec<u32>,
}

impl LeverPermutation {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let bound = 2 * values.len() as u32;
        let mut seen = vec![false; bound as usize + 1];
        for &v in &values {
            if v == 0 || v > bound || seen[v as usize] {
                return Err(Error::InvalidParameter(format!("lever value {v} is out of range or repeated")));
            }
            seen[v as usize] = true;
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `W`, `δ` and their inverses modulo `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Units {
    pub w: BigUint,
    pub delta: BigUint,
    pub neg_w: BigUint,
    pub delta_inv: BigUint,
}

impl Units {
    pub fn from_parts(modulus: &BigUint, w: BigUint, delta: BigUint) -> Result<Self> {
        let one = BigUint::one();
        let in_range = |x: &BigUint| x >= &one && x < modulus;
        if !in_range(&w) || !in_range(&delta) {
            return Err(Error::InvalidParameter("W and delta must lie in [1, M-1]".into()));
        }
        let delta_inv =
            delta.modinv(modulus).ok_or_else(|| Error::InvalidParameter("delta is not invertible modulo M".into()))?;
        let neg_w = modulus - &w;
        Ok(Self { w, delta, neg_w, delta_inv })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    weights: Vec<BigUint>,
    modulus: BigUint,
    n_payload: usize,
}

impl PublicKey {
    pub fn new(weights: Vec<BigUint>, modulus: BigUint, n_payload: usize) -> Result<Self> {
        BlockLayout::infer(weights.len(), n_payload)?;
        for (i, c) in weights.iter().enumerate() {
            if c.is_zero() || c >= &modulus {
                return Err(Error::InvalidParameter(format!("public element {} outside [1, M-1]", i + 1)));
            }
        }
        Ok(Self { weights, modulus, n_payload })
    }

    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn n_tilde(&self) -> usize {
        self.weights.len()
    }

    pub fn n_payload(&self) -> usize {
        self.n_payload
    }

    pub fn layout(&self) -> BlockLayout {
        BlockLayout::infer(self.n_tilde(), self.n_payload).expect("checked at construction")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivateKey {
    seq: ExtraSuperincreasing,
    neg_w: BigUint,
    delta_inv: BigUint,
    modulus: BigUint,
    n_payload: usize,
}

impl PrivateKey {
    pub fn new(
        seq: ExtraSuperincreasing,
        neg_w: BigUint,
        delta_inv: BigUint,
        modulus: BigUint,
        n_payload: usize,
    ) -> Result<Self> {
        BlockLayout::infer(seq.len(), n_payload)?;
        if modulus <= seq.modulus_budget() {
            return Err(Error::InvalidParameter("modulus does not exceed the weighted sequence sum".into()));
        }
        let one = BigUint::one();
        if neg_w < one || neg_w >= modulus || delta_inv < one || delta_inv >= modulus {
            return Err(Error::InvalidParameter("-W and delta^-1 must lie in [1, M-1]".into()));
        }
        if !delta_inv.gcd(&modulus).is_one() {
            return Err(Error::InvalidParameter("delta^-1 is not a unit modulo M".into()));
        }
        Ok(Self { seq, neg_w, delta_inv, modulus, n_payload })
    }

    pub fn sequence(&self) -> &ExtraSuperincreasing {
        &self.seq
    }

    pub fn neg_w(&self) -> &BigUint {
        &self.neg_w
    }

    pub fn delta_inv(&self) -> &BigUint {
        &self.delta_inv
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn n_tilde(&self) -> usize {
        self.seq.len()
    }

    pub fn n_payload(&self) -> usize {
        self.n_payload
    }

    pub fn layout(&self) -> BlockLayout {
        BlockLayout::infer(self.n_tilde(), self.n_payload).expect("checked at construction")
    }
}

/// Admissible `⌈lg M⌉` range `[⌈1.585·ñ⌉, 2ñ]`.
pub fn modulus_bit_range(n_tilde: usize) -> (u64, u64) {
    let n = n_tilde as u64;
    ((1585 * n).div_ceil(1000), 2 * n)
}

/// Whether `⌈lg M⌉` falls inside [`modulus_bit_range`].
pub fn modulus_in_bit_range(modulus: &BigUint, n_tilde: usize) -> bool {
    let (lo, hi) = modulus_bit_range(n_tilde);
    let bits = ceil_log2(modulus);
    (lo..=hi).contains(&bits)
}

/// Picks an admissible bit length uniformly, then `M` uniformly among the
/// values above the sequence budget with that `⌈lg M⌉`.
pub fn select_modulus<R: Rng + ?Sized>(seq: &ExtraSuperincreasing, rng: &mut R) -> Result<BigUint> {
    let budget = seq.modulus_budget();
    let (lo, hi) = modulus_bit_range(seq.len());
    // ⌈lg M⌉ = b  ⇔  2^{b-1} < M ≤ 2^b.
    let admissible: Vec<u64> = (lo..=hi).filter(|&b| (BigUint::one() << b) > budget).collect();
    if admissible.is_empty() {
        return Err(Error::SequenceTooLarge { bits: budget.bits(), limit: hi });
    }
    let b = admissible[rng.gen_range(0..admissible.len())];
    let floor = (BigUint::one() << (b - 1)).max(budget);
    Ok(uniform_inclusive(rng, &(floor + 1u32), &(BigUint::one() << b)))
}

/// `W` uniform in `[1, M−1]`, `δ` resampled until coprime to `M`.
pub fn sample_units<R: Rng + ?Sized>(modulus: &BigUint, rng: &mut R) -> Result<Units> {
    if *modulus < BigUint::from(3u32) {
        return Err(Error::InvalidParameter("modulus must be at least 3".into()));
    }
    let one = BigUint::one();
    let top = modulus - 1u32;
    let w = uniform_inclusive(rng, &one, &top);
    loop {
        let delta = uniform_inclusive(rng, &one, &top);
        if delta.gcd(modulus).is_one() {
            return Units::from_parts(modulus, w, delta);
        }
    }
}

/// Uniform injection `[1, ñ] → [1, 2ñ]`.
pub fn sample_lever<R: Rng + ?Sized>(n_tilde: usize, rng: &mut R) -> LeverPermutation {
    let mut pool: Vec<u32> = (1..=2 * n_tilde as u32).collect();
    let (chosen, _) = pool.partial_shuffle(rng, n_tilde);
    LeverPermutation { values: chosen.to_vec() }
}

/// `C_i = (A_i + W·ℓ(i))·δ mod M`.
pub fn derive_public(
    seq: &ExtraSuperincreasing,
    w: &BigUint,
    delta: &BigUint,
    lever: &LeverPermutation,
    modulus: &BigUint,
    n_payload: usize,
) -> Result<PublicKey> {
    if lever.len() != seq.len() {
        return Err(Error::LengthMismatch { expected: seq.len(), got: lever.len() });
    }
    let mut weights = Vec::with_capacity(seq.len());
    for (i, (a, &l)) in seq.terms().iter().zip(lever.values()).enumerate() {
        let c = ((a + w * l) * delta) % modulus;
        if c.is_zero() {
            return Err(Error::DegeneratePublicElement { index: i + 1 });
        }
        weights.push(c);
    }
    PublicKey::new(weights, modulus.clone(), n_payload)
}

/// A key pair together with the generation-time secrets (`W`, `δ`, `ℓ`).
///
/// Only for white-box checks and experiments; regular callers use [`keygen`].
#[derive(Debug)]
pub struct KeyMaterial {
    public: PublicKey,
    private: PrivateKey,
    units: Units,
    lever: LeverPermutation,
}

impl KeyMaterial {
    /// Generates keys for an `n`-bit payload with `ñ = 3n/2`.
    pub fn generate<R: Rng + ?Sized>(n_payload: usize, rng: &mut R) -> Result<Self> {
        if n_payload < 4 || !n_payload.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("payload width must be even and at least 4, got {n_payload}")));
        }
        Self::generate_with(3 * n_payload / 2, n_payload, rng)
    }

    /// Generates an unpadded key with `ñ = n`.
    pub fn generate_raw<R: Rng + ?Sized>(n_tilde: usize, rng: &mut R) -> Result<Self> {
        Self::generate_with(n_tilde, n_tilde, rng)
    }

    fn generate_with<R: Rng + ?Sized>(n_tilde: usize, n_payload: usize, rng: &mut R) -> Result<Self> {
        BlockLayout::infer(n_tilde, n_payload)?;
        for _ in 0..MAX_ATTEMPTS {
            let seq = gen_extra_superincreasing(n_tilde, rng)?;
            let modulus = match select_modulus(&seq, rng) {
                Ok(m) => m,
                Err(Error::SequenceTooLarge { .. }) => continue,
                Err(e) => return Err(e),
            };
            for _ in 0..MAX_ATTEMPTS {
                let units = sample_units(&modulus, rng)?;
                let lever = sample_lever(n_tilde, rng);
                match Self::assemble(seq.clone(), modulus.clone(), units, lever, n_payload) {
                    Ok(km) => return Ok(km),
                    Err(Error::DegeneratePublicElement { .. }) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
        Err(Error::InvalidParameter("key generation did not converge".into()))
    }

    /// Builds keys from explicit parts. The modulus bit range is not enforced
    /// here (only logged), so hand-made examples with small moduli load.
    pub fn from_parts(
        seq: ExtraSuperincreasing,
        modulus: BigUint,
        w: BigUint,
        delta: BigUint,
        lever: LeverPermutation,
        n_payload: usize,
    ) -> Result<Self> {
        if !modulus_in_bit_range(&modulus, seq.len()) {
            warn!("modulus {modulus} is outside the bit range for n~ = {}", seq.len());
        }
        let units = Units::from_parts(&modulus, w, delta)?;
        Self::assemble(seq, modulus, units, lever, n_payload)
    }

    fn assemble(
        seq: ExtraSuperincreasing,
        modulus: BigUint,
        units: Units,
        lever: LeverPermutation,
        n_payload: usize,
    ) -> Result<Self> {
        let public = derive_public(&seq, &units.w, &units.delta, &lever, &modulus, n_payload)?;
        let private = PrivateKey::new(seq, units.neg_w.clone(), units.delta_inv.clone(), modulus, n_payload)?;
        Ok(Self { public, private, units, lever })
    }

    pub fn public(&self) -> &PublicKey {
        &self.public
    }

    pub fn private(&self) -> &PrivateKey {
        &self.private
    }

    pub fn units(&self) -> &Units {
        &self.units
    }

    pub fn lever(&self) -> &LeverPermutation {
        &self.lever
    }

    /// `(C_i·δ⁻¹ − W·ℓ(i)) mod M == A_i` for every position.
    pub fn reconstructs_sequence(&self) -> bool {
        let m = self.public.modulus();
        let wl_mod = |l: u32| (&self.units.w * l) % m;
        self.public
            .weights()
            .iter()
            .zip(self.lever.values())
            .zip(self.private.sequence().terms())
            .all(|((c, &l), a)| ((c * &self.units.delta_inv) % m + m - wl_mod(l)) % m == *a)
    }

    /// Drops the lever and the unit secrets.
    pub fn into_pair(self) -> (PublicKey, PrivateKey) {
        (self.public, self.private)
    }
}

/// Generates a key pair for `n_payload`-bit blocks.
pub fn keygen<R: Rng + ?Sized>(n_payload: usize, rng: &mut R) -> Result<(PublicKey, PrivateKey)> {
    KeyMaterial::generate(n_payload, rng).map(KeyMaterial::into_pair)
}
