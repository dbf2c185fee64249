//! Plaintext blocks and noise vectors.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::keygen::BlockLayout;

/// Parses a string of `0`/`1` characters, position 1 first.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidParameter(format!("not a bit: {c:?}"))),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// `L_i = Σ_{j ≥ i} b_j`.
pub fn compute_l(bits: &[bool]) -> Vec<u32> {
    let mut out = vec![0u32; bits.len()];
    let mut acc = 0u32;
    for (i, &b) in bits.iter().enumerate().rev() {
        acc += b as u32;
        out[i] = acc;
    }
    out
}

/// An `ñ`-bit block: `n` payload bits, then padding (if any).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitBlock {
    bits: Vec<bool>,
    n_payload: usize,
}

impl BitBlock {
    pub fn new(bits: Vec<bool>, n_payload: usize) -> Result<Self> {
        BlockLayout::infer(bits.len(), n_payload)?;
        Ok(Self { bits, n_payload })
    }

    /// An unpadded block.
    pub fn raw(bits: Vec<bool>) -> Result<Self> {
        let n = bits.len();
        Self::new(bits, n)
    }

    pub fn parse_raw(s: &str) -> Result<Self> {
        Self::raw(parse_bits(s)?)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn payload(&self) -> &[bool] {
        &self.bits[..self.n_payload]
    }

    pub fn n_payload(&self) -> usize {
        self.n_payload
    }

    pub fn n_total(&self) -> usize {
        self.bits.len()
    }

    pub fn is_zero(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        compute_l(&self.bits)
    }
}

impl fmt::Display for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_bits(&self.bits))
    }
}

/// Extends an `n`-bit payload to `3n/2` bits. Bit `n + 1` is always 1 so the
/// block is nonzero; bits `n + 2 … 3n/2` are uniform.
pub fn extend_block<R: Rng + ?Sized>(payload: &[bool], rng: &mut R) -> Result<BitBlock> {
    let n = payload.len();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("payload width must be even and positive, got {n}")));
    }
    let mut bits = Vec::with_capacity(3 * n / 2);
    bits.extend_from_slice(payload);
    bits.push(true);
    bits.extend((1..n / 2).map(|_| rng.gen::<bool>()));
    BitBlock::new(bits, n)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NoiseVector(Vec<bool>);

impl NoiseVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.gen::<bool>()).collect())
    }

    pub fn parse(s: &str) -> Result<Self> {
        parse_bits(s).map(Self)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
