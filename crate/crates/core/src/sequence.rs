//! Extra superincreasing sequences.
//!
//! A sequence `A_1 … A_n` is extra superincreasing when `A_2 > A_1 + 1` and
//! `A_i > Σ_{j<i} (i − j)·A_j` for every `i > 2`. The weighted tail sums are
//! what make greedy decoding with multiplicities possible.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use crate::bigmath::uniform_inclusive;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtraSuperincreasing {
    terms: Vec<BigUint>,
}

impl ExtraSuperincreasing {
    pub fn new(terms: Vec<BigUint>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter("empty sequence".into()));
        }
        match first_violation(&terms) {
            Some(index) => Err(Error::NotExtraSuperincreasing { index }),
            None => Ok(Self { terms }),
        }
    }

    pub fn from_u64s(terms: &[u64]) -> Result<Self> {
        Self::new(terms.iter().map(|&t| BigUint::from(t)).collect())
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ_{i=1}^{n} (n + 1 − i)·A_i`, the largest value any anomalous subset
    /// sum over this sequence can reach. The modulus must exceed it.
    pub fn modulus_budget(&self) -> BigUint {
        modulus_budget(&self.terms)
    }

    pub fn into_terms(self) -> Vec<BigUint> {
        self.terms
    }
}

/// `Σ (n + 1 − i)·A_i` over an arbitrary list.
pub fn modulus_budget(terms: &[BigUint]) -> BigUint {
    let n = terms.len();
    terms.iter().enumerate().fold(BigUint::zero(), |acc, (i, a)| acc + a * (n - i) as u64)
}

/// 1-based index of the first term breaking the definition, if any.
///
/// A zero term is reported as a violation at its own index.
pub fn first_violation(terms: &[BigUint]) -> Option<usize> {
    let mut prefix = BigUint::zero(); // Σ_{j<i} A_j
    let mut weighted = BigUint::zero(); // Σ_{j<i} (i − j) A_j
    for (idx, a) in terms.iter().enumerate() {
        let i = idx + 1;
        if a.is_zero() {
            return Some(i);
        }
        let ok = match i {
            1 => true,
            2 => *a > &terms[0] + 1u32,
            _ => *a > weighted,
        };
        if !ok {
            return Some(i);
        }
        prefix += a;
        weighted += &prefix;
    }
    None
}

/// True iff every defining inequality holds. An empty list is a parameter error.
pub fn validate_extra_superincreasing(terms: &[BigUint]) -> Result<bool> {
    if terms.is_empty() {
        return Err(Error::InvalidParameter("empty sequence".into()));
    }
    Ok(first_violation(terms).is_none())
}

/// Checks `(k + 1)·A_i > Σ_{j<i} (k + i − j)·A_j` for all `i > 1`.
pub fn check_property1(terms: &[BigUint], k: u64) -> bool {
    let mut prefix = BigUint::zero();
    let mut weighted = BigUint::zero();
    for (idx, a) in terms.iter().enumerate() {
        if idx > 0 {
            let rhs = &prefix * k + &weighted;
            if a * (k + 1) <= rhs {
                return false;
            }
        }
        prefix += a;
        weighted += &prefix;
    }
    true
}

/// Random sequence that stays close to the minimal growth rate.
///
/// `A_1` is uniform in `[1, 4]`; every later term is its lower bound plus a
/// uniform offset in `[1, max(1, ⌊bound/16⌋)]`.
pub fn gen_extra_superincreasing<R: Rng + ?Sized>(n_tilde: usize, rng: &mut R) -> Result<ExtraSuperincreasing> {
    if n_tilde < 2 {
        return Err(Error::InvalidParameter(format!("sequence length must be at least 2, got {n_tilde}")));
    }
    let one = BigUint::one();
    let mut terms = Vec::with_capacity(n_tilde);
    terms.push(BigUint::from(rng.gen_range(1u32..=4)));
    let mut prefix = terms[0].clone();
    let mut weighted = terms[0].clone();
    for i in 2..=n_tilde {
        // Strict lower bound for A_i.
        let bound = if i == 2 { &terms[0] + 1u32 } else { weighted.clone() };
        let slack = (&bound >> 4u32).max(one.clone());
        let a = &bound + uniform_inclusive(rng, &one, &slack);
        prefix += &a;
        weighted += &prefix;
        terms.push(a);
    }
    Ok(ExtraSuperincreasing { terms })
}
