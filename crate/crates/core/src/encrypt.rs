//! Randomized encryption by anomalous subset sums.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use crate::block::{extend_block, BitBlock, NoiseVector};
use crate::error::{Error, Result};
use crate::keygen::{BlockLayout, PublicKey};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ciphertext(pub BigUint);

impl Ciphertext {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl From<u64> for Ciphertext {
    fn from(v: u64) -> Self {
        Ciphertext(BigUint::from(v))
    }
}

/// Runs the encryption loop from `i = ñ` down to `1`.
///
/// When `b_i = 1` the running multiplicity `L` is incremented and `L·C_i` is
/// added; otherwise `L·C_i` is added only if `r_i = 1`. Noise on a set plaintext
/// bit therefore has no effect, and the result equals
/// `Σ (b_i ∨ r_i)·L_i·C_i mod M`.
pub fn encrypt_block(pk: &PublicKey, block: &BitBlock, noise: &NoiseVector) -> Result<Ciphertext> {
    let n_tilde = pk.n_tilde();
    if block.n_total() != n_tilde {
        return Err(Error::LengthMismatch { expected: n_tilde, got: block.n_total() });
    }
    if noise.len() != n_tilde {
        return Err(Error::LengthMismatch { expected: n_tilde, got: noise.len() });
    }
    if block.is_zero() {
        return Err(Error::ZeroBlock);
    }
    Ok(Ciphertext(accumulate(pk.weights(), pk.modulus(), block.bits(), noise.bits())))
}

pub(crate) fn accumulate(weights: &[BigUint], modulus: &BigUint, bits: &[bool], noise: &[bool]) -> BigUint {
    let mut sum = BigUint::zero();
    let mut l = 0u32;
    for i in (0..weights.len()).rev() {
        if bits[i] {
            l += 1;
            sum += &weights[i] * l;
        } else if noise[i] {
            sum += &weights[i] * l;
        } else {
            continue;
        }
        if sum >= *modulus {
            sum %= modulus;
        }
    }
    sum
}

/// A block list plus the framing needed to reassemble the message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncryptedMessage {
    pub n_payload: usize,
    /// Number of blocks the sender produced.
    pub block_count: usize,
    pub blocks: Vec<Ciphertext>,
}

impl EncryptedMessage {
    pub fn new(n_payload: usize, blocks: Vec<Ciphertext>) -> Self {
        Self { n_payload, block_count: blocks.len(), blocks }
    }
}

/// Message bits (MSB first) followed by one `1` and zeros up to a multiple
/// of `n`, split into `n`-bit chunks.
pub fn frame_message(message: &[u8], n_payload: usize) -> Vec<Vec<bool>> {
    let mut bits: Vec<bool> = message.iter().flat_map(|byte| (0..8).rev().map(move |k| (byte >> k) & 1 == 1)).collect();
    bits.push(true);
    let padded = bits.len().div_ceil(n_payload) * n_payload;
    bits.resize(padded, false);
    bits.chunks(n_payload).map(<[bool]>::to_vec).collect()
}

/// Inverse of [`frame_message`].
pub fn unframe_message(chunks: &[Vec<bool>]) -> Result<Vec<u8>> {
    let last = chunks.last().ok_or_else(|| Error::Framing("no blocks".into()))?;
    let end_in_last =
        last.iter().rposition(|&b| b).ok_or_else(|| Error::Framing("final block carries no terminator".into()))?;
    let total: usize = chunks[..chunks.len() - 1].iter().map(Vec::len).sum::<usize>() + end_in_last;
    if !total.is_multiple_of(8) {
        return Err(Error::Framing(format!("{total} message bits is not a whole number of bytes")));
    }
    let bits: Vec<bool> = chunks.iter().flatten().copied().take(total).collect();
    Ok(bits.chunks(8).map(|byte| byte.iter().fold(0u8, |acc, &b| (acc << 1) | b as u8)).collect())
}

/// Frames, pads and encrypts a byte string block by block with fresh noise.
pub fn encrypt_message<R: Rng + ?Sized>(pk: &PublicKey, message: &[u8], rng: &mut R) -> Result<EncryptedMessage> {
    let n = pk.n_payload();
    let mut blocks = Vec::new();
    for chunk in frame_message(message, n) {
        let block = match pk.layout() {
            BlockLayout::Padded => extend_block(&chunk, rng)?,
            BlockLayout::Raw => BitBlock::raw(chunk)?,
        };
        let noise = NoiseVector::random(pk.n_tilde(), rng);
        blocks.push(encrypt_block(pk, &block, &noise)?);
    }
    Ok(EncryptedMessage::new(n, blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::parse_bits;
    use crate::vectors::appendix_a;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    /// Closed-form oracle: Σ (b_i ∨ r_i)·L_i·C_i mod M, evaluated term by term.
    fn closed_form(c: &[u64], m: u64, b: &[bool], r: &[bool]) -> u64 {
        let n = c.len();
        (0..n)
            .filter(|&i| b[i] || r[i])
            .map(|i| {
                let l = b[i..].iter().filter(|&&x| x).count() as u64;
                l * c[i]
            })
            .sum::<u64>()
            % m
    }

    fn bits_of(mask: u32, n: usize) -> Vec<bool> {
        (0..n).map(|i| (mask >> (n - 1 - i)) & 1 == 1).collect()
    }

    #[test]
    fn appendix_ciphertext() {
        let km = appendix_a::key_material();
        let ct = encrypt_block(km.public(), &appendix_a::block(), &appendix_a::noise()).unwrap();
        assert_eq!(ct, Ciphertext::from(3204));
        let zero = NoiseVector::zeros(8);
        let ct = encrypt_block(km.public(), &appendix_a::block(), &zero).unwrap();
        assert_eq!(ct, Ciphertext::from(3206));
        let last_only = BitBlock::parse_raw("00000001").unwrap();
        let ct = encrypt_block(km.public(), &last_only, &zero).unwrap();
        assert_eq!(ct, Ciphertext::from(607));
    }

    #[test]
    fn loop_matches_closed_form_exhaustively() {
        let km = appendix_a::key_material();
        for bm in 1u32..256 {
            let b = BitBlock::raw(bits_of(bm, 8)).unwrap();
            for rm in 0u32..256 {
                let r = NoiseVector::new(bits_of(rm, 8));
                let ct = encrypt_block(km.public(), &b, &r).unwrap();
                let expect = closed_form(&appendix_a::C, appendix_a::M, b.bits(), r.bits());
                assert_eq!(ct, Ciphertext::from(expect));
            }
        }
    }

    #[test]
    fn noise_on_set_bits_is_inert() {
        let km = appendix_a::key_material();
        let b = appendix_a::block();
        let base = encrypt_block(km.public(), &b, &NoiseVector::zeros(8)).unwrap();
        let set_only = NoiseVector::parse("10101001").unwrap();
        assert_eq!(encrypt_block(km.public(), &b, &set_only).unwrap(), base);
    }

    #[test]
    fn rejects_bad_input() {
        let km = appendix_a::key_material();
        let zero = BitBlock::parse_raw("00000000").unwrap();
        assert_eq!(encrypt_block(km.public(), &zero, &NoiseVector::zeros(8)), Err(Error::ZeroBlock));
        let short = BitBlock::parse_raw("1010").unwrap();
        assert!(matches!(
            encrypt_block(km.public(), &short, &NoiseVector::zeros(4)),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            encrypt_block(km.public(), &appendix_a::block(), &NoiseVector::zeros(7)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn framing_block_counts() {
        assert_eq!(frame_message(b"", 16).len(), 1);
        assert_eq!(frame_message(b"", 16)[0], parse_bits("1000000000000000").unwrap());
        assert_eq!(frame_message(&[0xab, 0xcd, 0xef, 0x01], 16).len(), 3);
        assert_eq!(frame_message(b"hello", 16).len(), 3);
    }

    #[test]
    fn framing_rejects_missing_terminator() {
        // "hi" at n = 8: the terminator sits alone in a third block.
        let mut chunks = frame_message(b"hi", 8);
        chunks.pop();
        assert!(unframe_message(&chunks).is_err());
        assert!(unframe_message(&[vec![false; 8]]).is_err());
        assert!(unframe_message(&[]).is_err());
    }

    #[test]
    fn message_block_count() {
        let km = crate::keygen::KeyMaterial::generate(16, &mut ChaCha20Rng::seed_from_u64(9)).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let m = encrypt_message(km.public(), &[0u8; 4], &mut rng).unwrap();
        assert_eq!(m.blocks.len(), 3);
        assert_eq!(m.block_count, 3);
        assert!(m.blocks.iter().all(|c| c.value() < km.public().modulus()));
    }

    proptest::proptest! {
        #[test]
        fn framing_round_trip(msg in proptest::collection::vec(proptest::num::u8::ANY, 0..64),
                              half in 1usize..40) {
            let n = 2 * half;
            let chunks = frame_message(&msg, n);
            proptest::prop_assert!(chunks.iter().all(|c| c.len() == n));
            proptest::prop_assert_eq!(unframe_message(&chunks).unwrap(), msg);
        }
    }
}
