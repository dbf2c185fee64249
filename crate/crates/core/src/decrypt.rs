//! Decryption: strip `δ`, scan multiples of `−W`, decompose greedily.
//!
//! After `S₀ = Ṡ·δ⁻¹ mod M` the receiver does not know how many multiples of
//! `W` the lever contributed, so it tries `k = 1, 2, …` and runs the greedy
//! pass on `(S₀ + k·(−W)) mod M` until one closes at zero. The scan is bounded
//! by `k_max = ñ²(ñ+1)`, the largest value `Σ L_i·ℓ(i)` can take.

use std::thread;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::block::BitBlock;
use crate::encrypt::{unframe_message, Ciphertext, EncryptedMessage};
use crate::error::{Error, Result};
use crate::keygen::{BlockLayout, PrivateKey};
use crate::sequence::ExtraSuperincreasing;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `b_i = 1`, subtract `(L+1)·A_i`.
    One,
    /// Noise term, subtract `L·A_i`.
    Noise,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    /// 1-based position.
    pub position: usize,
    pub branch: Branch,
    pub residual: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub bits: Vec<bool>,
    pub steps: Vec<Step>,
    pub residual: BigUint,
}

impl Decomposition {
    pub fn is_success(&self) -> bool {
        self.residual.is_zero()
    }
}

/// One greedy pass from `i = ñ` down to `1`, stopping early at residual zero.
pub fn greedy_decompose(seq: &ExtraSuperincreasing, target: &BigUint) -> Decomposition {
    let terms = seq.terms();
    let mut bits = vec![false; terms.len()];
    let mut steps = Vec::new();
    let mut residual = target.clone();
    let mut l = 0u32;
    for i in (0..terms.len()).rev() {
        if residual.is_zero() {
            break;
        }
        let noise_term = &terms[i] * l;
        let one_term = &noise_term + &terms[i];
        let branch = if residual >= one_term {
            bits[i] = true;
            l += 1;
            residual -= one_term;
            Branch::One
        } else if l > 0 && residual >= noise_term {
            residual -= noise_term;
            Branch::Noise
        } else {
            Branch::Skip
        };
        steps.push(Step { position: i + 1, branch, residual: residual.clone() });
    }
    Decomposition { bits, steps, residual }
}

/// Trace-free greedy pass; `Some(bits)` iff it closes at zero with nonzero bits.
fn greedy_bits(terms: &[BigUint], target: &BigUint) -> Option<Vec<bool>> {
    let mut bits = vec![false; terms.len()];
    let mut residual = target.clone();
    let mut l = 0u32;
    let mut any = false;
    for i in (0..terms.len()).rev() {
        if residual.is_zero() {
            break;
        }
        let noise_term = &terms[i] * l;
        if residual >= noise_term {
            residual -= &noise_term;
            if residual >= terms[i] {
                residual -= &terms[i];
                bits[i] = true;
                any = true;
                l += 1;
            }
        }
    }
    (residual.is_zero() && any).then_some(bits)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Policy {
    /// Return the smallest `k` whose greedy pass succeeds.
    #[default]
    FirstSuccess,
    /// Scan the whole `k` range and report every success.
    Audit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecryptTrace {
    /// Number of `−W` additions applied.
    pub k: u64,
    pub s0: BigUint,
    pub target: BigUint,
    pub steps: Vec<Step>,
    pub final_residual: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub k: u64,
    pub block: BitBlock,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decryption {
    pub block: BitBlock,
    pub trace: DecryptTrace,
    /// Every success in `1..=k_max`; only filled under [`Policy::Audit`].
    pub candidates: Vec<Candidate>,
}

pub fn k_max(n_tilde: usize) -> u64 {
    let n = n_tilde as u64;
    n * n * (n + 1)
}

pub fn strip_delta(sk: &PrivateKey, ct: &Ciphertext) -> Result<BigUint> {
    if ct.value() >= sk.modulus() {
        return Err(Error::CiphertextOutOfRange);
    }
    Ok(ct.value() * sk.delta_inv() % sk.modulus())
}

struct Scanner<'a> {
    terms: &'a [BigUint],
    neg_w: &'a BigUint,
    modulus: &'a BigUint,
    budget: BigUint,
}

impl<'a> Scanner<'a> {
    fn new(sk: &'a PrivateKey) -> Self {
        Self {
            terms: sk.sequence().terms(),
            neg_w: sk.neg_w(),
            modulus: sk.modulus(),
            budget: sk.sequence().modulus_budget(),
        }
    }

    fn target_at(&self, s0: &BigUint, k: u64) -> BigUint {
        (s0 + self.neg_w * k) % self.modulus
    }

    /// Calls `found` for each successful `k` in `[from, to]`, ascending, until
    /// it returns `false`.
    fn scan(&self, s0: &BigUint, from: u64, to: u64, mut found: impl FnMut(u64, Vec<bool>) -> bool) {
        if from > to {
            return;
        }
        let mut t = self.target_at(s0, from - 1);
        for k in from..=to {
            t += self.neg_w;
            if t >= *self.modulus {
                t -= self.modulus;
            }
            // A greedy pass removes at most Σ(ñ+1−i)·A_i in total.
            if t > self.budget {
                continue;
            }
            if let Some(bits) = greedy_bits(self.terms, &t) {
                if !found(k, bits) {
                    return;
                }
            }
        }
    }
}

fn finish(sk: &PrivateKey, s0: BigUint, k: u64, candidates: Vec<Candidate>) -> Result<Decryption> {
    let scanner = Scanner::new(sk);
    let target = scanner.target_at(&s0, k);
    let d = greedy_decompose(sk.sequence(), &target);
    let block = BitBlock::new(d.bits, sk.n_payload())?;
    Ok(Decryption {
        block,
        trace: DecryptTrace { k, s0, target, steps: d.steps, final_residual: d.residual },
        candidates,
    })
}

pub fn decrypt_block(sk: &PrivateKey, ct: &Ciphertext, policy: Policy) -> Result<Decryption> {
    let s0 = strip_delta(sk, ct)?;
    let scanner = Scanner::new(sk);
    let kmax = k_max(sk.n_tilde());
    let mut candidates = Vec::new();
    scanner.scan(&s0, 1, kmax, |k, bits| {
        candidates.push(Candidate { k, block: BitBlock::new(bits, sk.n_payload()).expect("key layout") });
        policy == Policy::Audit
    });
    let first = candidates.first().map(|c| c.k).ok_or(Error::InvalidCiphertext)?;
    if policy == Policy::FirstSuccess {
        candidates.clear();
    }
    finish(sk, s0, first, candidates)
}

/// First-success decryption with the `k` range split across `jobs` threads.
/// The smallest successful `k` wins, so the result matches [`decrypt_block`].
pub fn decrypt_block_parallel(sk: &PrivateKey, ct: &Ciphertext, jobs: usize) -> Result<Decryption> {
    if jobs <= 1 {
        return decrypt_block(sk, ct, Policy::FirstSuccess);
    }
    let s0 = strip_delta(sk, ct)?;
    let scanner = Scanner::new(sk);
    let kmax = k_max(sk.n_tilde());
    let chunk = 4096u64;
    let mut start = 1u64;
    while start <= kmax {
        let ranges: Vec<(u64, u64)> = (0..jobs as u64)
            .map(|j| start + j * chunk)
            .take_while(|&lo| lo <= kmax)
            .map(|lo| (lo, (lo + chunk - 1).min(kmax)))
            .collect();
        start = ranges.last().expect("nonempty").1 + 1;
        let hits: Vec<Option<u64>> = thread::scope(|s| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(lo, hi)| {
                    let (scanner, s0) = (&scanner, &s0);
                    s.spawn(move || {
                        let mut hit = None;
                        scanner.scan(s0, lo, hi, |k, _| {
                            hit = Some(k);
                            false
                        });
                        hit
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("scan thread")).collect()
        });
        if let Some(k) = hits.into_iter().flatten().min() {
            return finish(sk, s0, k, Vec::new());
        }
    }
    Err(Error::InvalidCiphertext)
}

/// Decrypts every block, drops the padding bits and removes the message framing.
pub fn decrypt_message(sk: &PrivateKey, msg: &EncryptedMessage) -> Result<Vec<u8>> {
    decrypt_message_with_jobs(sk, msg, 1)
}

pub fn decrypt_message_with_jobs(sk: &PrivateKey, msg: &EncryptedMessage, jobs: usize) -> Result<Vec<u8>> {
    if msg.n_payload != sk.n_payload() {
        return Err(Error::Framing(format!("message uses {}-bit blocks, key uses {}", msg.n_payload, sk.n_payload())));
    }
    if msg.blocks.len() != msg.block_count {
        return Err(Error::Framing(format!("expected {} blocks, found {}", msg.block_count, msg.blocks.len())));
    }
    let n = sk.n_payload();
    let mut chunks = Vec::with_capacity(msg.blocks.len());
    for (index, ct) in msg.blocks.iter().enumerate() {
        let d = decrypt_block_parallel(sk, ct, jobs).map_err(|e| match e {
            Error::InvalidCiphertext | Error::CiphertextOutOfRange => Error::InvalidBlock { index },
            other => other,
        })?;
        if sk.layout() == BlockLayout::Padded && !d.block.bits()[n] {
            log::debug!("block {index}: marker bit clear after k = {}", d.trace.k);
            return Err(Error::InvalidBlock { index });
        }
        chunks.push(d.block.payload().to_vec());
    }
    unframe_message(&chunks)
}
