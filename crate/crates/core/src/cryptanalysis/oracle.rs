//! Exhaustive oracles for small instances.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_integer::Integer;
use rand::Rng;

use crate::block::{compute_l, BitBlock, NoiseVector};
use crate::encrypt::accumulate;
use crate::error::{Error, Result};
use crate::keygen::{BlockLayout, PublicKey};

/// A plaintext block and the zero positions that contributed a noise term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AsspPattern {
    pub bits: Vec<bool>,
    /// 1-based positions with `b_i = 0`, `L_i > 0` and a noise term.
    pub included: Vec<usize>,
}

impl AsspPattern {
    pub fn noise(&self) -> NoiseVector {
        let mut r = vec![false; self.bits.len()];
        for &p in &self.included {
            r[p - 1] = true;
        }
        NoiseVector::new(r)
    }
}

fn small_modulus(pk: &PublicKey) -> Result<(Vec<u64>, u64)> {
    let m = u64::try_from(pk.modulus())
        .ok()
        .filter(|&m| m < 1 << 62)
        .ok_or_else(|| Error::BoundExceeded("modulus too large for enumeration".into()))?;
    let c = pk.weights().iter().map(|c| u64::try_from(c).expect("below modulus")).collect();
    Ok((c, m))
}

/// Every nonzero block and noise-inclusion set whose anomalous sum is `target`.
///
/// Only noise at positions with `b_i = 0` and `L_i > 0` changes the sum, so the
/// search covers `Σ_b 2^{zeros(b)}` patterns instead of `4^ñ`.
pub fn brute_force_assp(pk: &PublicKey, target: &BigUint) -> Result<Vec<AsspPattern>> {
    let n = pk.n_tilde();
    if n > 16 {
        return Err(Error::BoundExceeded(format!("n~ = {n} exceeds 16")));
    }
    let (c, m) = small_modulus(pk)?;
    let Ok(target) = u64::try_from(target) else { return Ok(Vec::new()) };
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let bits: Vec<bool> = (0..n).map(|i| (mask >> (n - 1 - i)) & 1 == 1).collect();
        let l = compute_l(&bits);
        let mut base = 0u64;
        let mut optional = Vec::new();
        for i in 0..n {
            let term = (l[i] as u64 * c[i]) % m;
            if bits[i] {
                base = (base + term) % m;
            } else if l[i] > 0 {
                optional.push((i + 1, term));
            }
        }
        let k = optional.len();
        for sub in 0u32..(1 << k) {
            let mut s = base;
            for (j, &(_, term)) in optional.iter().enumerate() {
                if (sub >> j) & 1 == 1 {
                    s = (s + term) % m;
                }
            }
            if s == target {
                let included =
                    optional.iter().enumerate().filter(|(j, _)| (sub >> j) & 1 == 1).map(|(_, &(p, _))| p).collect();
                out.push(AsspPattern { bits: bits.clone(), included });
            }
        }
    }
    Ok(out)
}

/// Whether ordered subsequences `A_{x1} < … < A_{xm}` have pairwise distinct
/// sums `m·A_{x1} + (m−1)·A_{x2} + … + A_{xm}`. `m = 0` checks all sizes at
/// once, including collisions across sizes.
pub fn check_property2(terms: &[BigUint], m: usize) -> Result<bool> {
    let n = terms.len();
    if n > 24 {
        return Err(Error::BoundExceeded(format!("{n} terms exceeds 24")));
    }
    if m > n {
        return Err(Error::InvalidParameter(format!("subsequence size {m} exceeds {n}")));
    }
    let mut seen = HashSet::new();
    for mask in 1u32..(1u32 << n) {
        if m != 0 && mask.count_ones() as usize != m {
            continue;
        }
        let mut sum = BigUint::default();
        let mut weight = 0u32;
        for i in (0..n).rev() {
            if (mask >> i) & 1 == 1 {
                weight += 1;
                sum += &terms[i] * weight;
            }
        }
        if !seen.insert(sum) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A private-key candidate reproducing a public key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternativeKey {
    pub seq: Vec<u64>,
    pub w: u64,
    pub delta: u64,
    pub lever: Vec<u32>,
}

struct AltSearch<'a, F> {
    d: Vec<u64>,
    m: u64,
    w: u64,
    delta: u64,
    lever_bound: u32,
    seq: Vec<u64>,
    lever: Vec<u32>,
    used: u64,
    visit: &'a mut F,
}

impl<F: FnMut(&AlternativeKey)> AltSearch<'_, F> {
    fn descend(&mut self, prefix: u64, weighted: u64, budget: u64) {
        let n = self.d.len();
        let i = self.seq.len();
        if i == n {
            (self.visit)(&AlternativeKey {
                seq: self.seq.clone(),
                w: self.w,
                delta: self.delta,
                lever: self.lever.clone(),
            });
            return;
        }
        for l in 1..=self.lever_bound {
            if self.used >> l & 1 == 1 {
                continue;
            }
            let shift = (self.w as u128 * l as u128 % self.m as u128) as u64;
            let a = (self.d[i] + self.m - shift) % self.m;
            let ok = match i {
                _ if a == 0 => false,
                0 => true,
                1 => a > self.seq[0] + 1,
                _ => a > weighted,
            };
            // Budget Σ(ñ+1−i)·A_i must stay below M; every term is positive.
            let budget = budget + (n - i) as u64 * a;
            if !ok || budget >= self.m {
                continue;
            }
            self.seq.push(a);
            self.lever.push(l);
            self.used |= 1 << l;
            let p = prefix + a;
            self.descend(p, weighted + p, budget);
            self.used &= !(1 << l);
            self.seq.pop();
            self.lever.pop();
        }
    }
}

/// Visits every `(A', W', δ', ℓ')` with `C_i ≡ (A'_i + W'·ℓ'(i))·δ' (mod M)`,
/// `{A'_i}` extra superincreasing, `M > Σ(ñ+1−i)·A'_i` and lever values in
/// `[1, lever_bound]`.
pub fn for_each_alternative_key<F: FnMut(&AlternativeKey)>(
    pk: &PublicKey,
    lever_bound: u32,
    mut visit: F,
) -> Result<()> {
    let n = pk.n_tilde();
    let (c, m) = small_modulus(pk)?;
    if m > 1 << 16 || n > 6 {
        return Err(Error::BoundExceeded(format!("M = {m}, n~ = {n}: limits are 2^16 and 6")));
    }
    if (lever_bound as usize) < n || lever_bound > 62 {
        return Err(Error::InvalidParameter(format!("lever bound {lever_bound} unusable for n~ = {n}")));
    }
    let work = (m as f64).powi(2) * (lever_bound as f64).powi(n as i32);
    if work > 1e13 {
        return Err(Error::BoundExceeded(format!("search space ~{work:.1e}")));
    }
    for delta in 1..m {
        if delta.gcd(&m) != 1 {
            continue;
        }
        let inv = BigUint::from(delta).modinv(&BigUint::from(m)).expect("coprime");
        let inv = u64::try_from(inv).expect("below modulus");
        let d: Vec<u64> = c.iter().map(|&ci| (ci as u128 * inv as u128 % m as u128) as u64).collect();
        for w in 1..m {
            let mut s = AltSearch {
                d: d.clone(),
                m,
                w,
                delta,
                lever_bound,
                seq: Vec::with_capacity(n),
                lever: Vec::with_capacity(n),
                used: 0,
                visit: &mut visit,
            };
            s.descend(0, 0, 0);
        }
    }
    Ok(())
}

pub fn search_alternative_keys(pk: &PublicKey, lever_bound: u32) -> Result<Vec<AlternativeKey>> {
    let mut out = Vec::new();
    for_each_alternative_key(pk, lever_bound, |k| out.push(k.clone()))?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplicityMode {
    Enumerate,
    Sample { trials: usize },
}

/// Number of distinct ciphertexts one block can encrypt to.
///
/// With `vary_padding` the random padding bits (`n+2 … ñ`) are varied too;
/// the payload and the marker bit stay fixed.
pub fn ciphertext_multiplicity<R: Rng + ?Sized>(
    pk: &PublicKey,
    block: &BitBlock,
    mode: MultiplicityMode,
    vary_padding: bool,
    rng: &mut R,
) -> Result<usize> {
    let n_tilde = pk.n_tilde();
    if block.n_total() != n_tilde {
        return Err(Error::LengthMismatch { expected: n_tilde, got: block.n_total() });
    }
    if block.is_zero() {
        return Err(Error::ZeroBlock);
    }
    let free: Vec<usize> = if vary_padding && pk.layout() == BlockLayout::Padded {
        (block.n_payload() + 1..n_tilde).collect()
    } else {
        Vec::new()
    };
    let mut seen = HashSet::new();
    match mode {
        MultiplicityMode::Enumerate => {
            let fixed_zeros = (0..n_tilde).filter(|i| !free.contains(i) && !block.bits()[*i]).count();
            // Σ over paddings of 2^{zeros} ≤ 3^p · 2^{fixed zeros}.
            let cost = fixed_zeros as f64 + free.len() as f64 * 3f64.log2();
            if cost > 20.0 {
                return Err(Error::BoundExceeded(format!("~2^{cost:.1} patterns")));
            }
            for pad in 0u32..(1 << free.len()) {
                let mut bits = block.bits().to_vec();
                for (j, &pos) in free.iter().enumerate() {
                    bits[pos] = (pad >> j) & 1 == 1;
                }
                let l = compute_l(&bits);
                let optional: Vec<usize> = (0..n_tilde).filter(|&i| !bits[i] && l[i] > 0).collect();
                for sub in 0u32..(1 << optional.len()) {
                    let mut noise = vec![false; n_tilde];
                    for (j, &pos) in optional.iter().enumerate() {
                        noise[pos] = (sub >> j) & 1 == 1;
                    }
                    seen.insert(accumulate(pk.weights(), pk.modulus(), &bits, &noise));
                }
            }
        }
        MultiplicityMode::Sample { trials } => {
            for _ in 0..trials {
                let mut bits = block.bits().to_vec();
                for &pos in &free {
                    bits[pos] = rng.gen();
                }
                let noise = NoiseVector::random(n_tilde, rng);
                seen.insert(accumulate(pk.weights(), pk.modulus(), &bits, noise.bits()));
            }
        }
    }
    Ok(seen.len())
}
