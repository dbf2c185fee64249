//! Subset-sum attack lattices.
//!
//! The basis for weights `w_1 … w_n`, target `S` and modulus `M` (scale `N`,
//! the smallest integer above `√(n+1)`):
//!
//! ```text
//! row i     (2·e_i      | N·w_i | 0)
//! row n+1   (1 … 1      | N·S   | 1)
//! row n+2   (0 … 0      | N·M   | 0)
//! ```
//!
//! A solution `x ∈ {0,1}ⁿ` of `Σ x_i w_i ≡ S (mod M)` gives the lattice vector
//! `(2x − 1 | 0 | −1)`. The last column keeps the rows independent.

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use super::lattice::{lll_reduce, IntegerLattice};
use crate::encrypt::accumulate;
use crate::error::Result;
use crate::keygen::PublicKey;

pub fn lattice_scale(n: usize) -> u64 {
    (n as u64 + 1).sqrt() + 1
}

pub fn build_ssp_lattice(weights: &[BigUint], target: &BigUint, modulus: &BigUint) -> Result<IntegerLattice> {
    let n = weights.len();
    let scale = BigInt::from(lattice_scale(n));
    let width = n + 2;
    let mut rows = Vec::with_capacity(n + 2);
    for (i, w) in weights.iter().enumerate() {
        let mut row = vec![BigInt::zero(); width];
        row[i] = BigInt::from(2);
        row[n] = &scale * BigInt::from(w.clone());
        rows.push(row);
    }
    let mut t = vec![BigInt::one(); width];
    t[n] = &scale * BigInt::from(target.clone());
    rows.push(t);
    let mut m = vec![BigInt::zero(); width];
    m[n] = &scale * BigInt::from(modulus.clone());
    rows.push(m);
    IntegerLattice::new(rows)
}

/// Reads a `(±1 … ±1 | 0 | ±1)` row back into bits.
fn decode_row(row: &[BigInt], n: usize) -> Option<Vec<bool>> {
    if !row[n].is_zero() {
        return None;
    }
    let sign = if row[n + 1] == -BigInt::one() {
        1
    } else if row[n + 1] == BigInt::one() {
        -1
    } else {
        return None;
    };
    row[..n]
        .iter()
        .map(|v| {
            if *v == BigInt::from(sign) {
                Some(true)
            } else if *v == BigInt::from(-sign) {
                Some(false)
            } else {
                None
            }
        })
        .collect()
}

pub fn subset_sum_holds(weights: &[BigUint], x: &[bool], target: &BigUint, modulus: &BigUint) -> bool {
    let s: BigUint = weights.iter().zip(x).filter(|(_, &b)| b).map(|(w, _)| w).sum();
    s % modulus == target % modulus
}

/// One reduction at `δ = 3/4`; returns a verified nonzero solution if a
/// reduced row encodes one.
pub fn lattice_attack(weights: &[BigUint], target: &BigUint, modulus: &BigUint) -> Result<Option<Vec<bool>>> {
    let n = weights.len();
    let basis = build_ssp_lattice(weights, target, modulus)?;
    let reduced = lll_reduce(&basis, Rational64::new(3, 4))?;
    for row in reduced.rows() {
        if let Some(x) = decode_row(row, n) {
            let complement: Vec<bool> = x.iter().map(|b| !b).collect();
            for cand in [x, complement] {
                if cand.iter().any(|&b| b) && subset_sum_holds(weights, &cand, target, modulus) {
                    return Ok(Some(cand));
                }
            }
        }
    }
    Ok(None)
}

/// Repeats [`lattice_attack`] on up to `trials` random orderings of the weights.
pub fn lattice_attack_trials<R: Rng + ?Sized>(
    weights: &[BigUint],
    target: &BigUint,
    modulus: &BigUint,
    trials: usize,
    rng: &mut R,
) -> Result<Option<Vec<bool>>> {
    let n = weights.len();
    for trial in 0..trials.max(1) {
        let mut order: Vec<usize> = (0..n).collect();
        if trial > 0 {
            order.shuffle(rng);
        }
        let permuted: Vec<BigUint> = order.iter().map(|&i| weights[i].clone()).collect();
        if let Some(y) = lattice_attack(&permuted, target, modulus)? {
            let mut x = vec![false; n];
            for (slot, &i) in order.iter().enumerate() {
                x[i] = y[slot];
            }
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Anomalous sum rewritten as a plain subset sum over bit variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedAssp {
    pub weights: Vec<BigUint>,
    /// `(position, t)` for each flat variable; position is 1-based and the
    /// variable carries weight `2^t·C_position mod M`.
    pub vars: Vec<(usize, u32)>,
    pub n_tilde: usize,
}

impl ExpandedAssp {
    /// Coefficients `κ_i = Σ_t x_{i,t}·2^t`.
    pub fn coefficients(&self, x: &[bool]) -> Vec<u64> {
        let mut kappa = vec![0u64; self.n_tilde];
        for (&(pos, t), &bit) in self.vars.iter().zip(x) {
            if bit {
                kappa[pos - 1] += 1u64 << t;
            }
        }
        kappa
    }
}

/// Position `i` can carry a coefficient up to `ñ − i + 1`, so it gets as many
/// bit variables as that bound has binary digits.
pub fn expand_assp_to_ssp(pk: &PublicKey) -> ExpandedAssp {
    let n_tilde = pk.n_tilde();
    let m = pk.modulus();
    let mut weights = Vec::new();
    let mut vars = Vec::new();
    for (idx, c) in pk.weights().iter().enumerate() {
        let max_coeff = (n_tilde - idx) as u64;
        let digits = u64::BITS - max_coeff.leading_zeros();
        for t in 0..digits {
            weights.push((c << t) % m);
            vars.push((idx + 1, t));
        }
    }
    ExpandedAssp { weights, vars, n_tilde }
}

/// Bits and noise inclusions recovered from an anomalous sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsspRecovery {
    pub bits: Vec<bool>,
    /// `r_i` for the positions that contributed a noise term.
    pub noise: Vec<bool>,
    pub coefficients: Vec<u64>,
}

/// Accepts `κ` only if it is what the encryption loop could have produced:
/// scanning from position `ñ` down with running `L`, each `κ_i` must be `L+1`
/// (bit set), `L > 0` (noise term) or `0`.
pub fn structural_check(kappa: &[u64]) -> Option<(Vec<bool>, Vec<bool>)> {
    let n = kappa.len();
    let mut bits = vec![false; n];
    let mut noise = vec![false; n];
    let mut l = 0u64;
    for i in (0..n).rev() {
        let k = kappa[i];
        if k == l + 1 {
            bits[i] = true;
            l += 1;
        } else if k == l && l > 0 {
            noise[i] = true;
        } else if k != 0 {
            return None;
        }
    }
    bits.iter().any(|&b| b).then_some((bits, noise))
}

/// Lattice attack on an anomalous ciphertext through the bit expansion.
pub fn assp_attack<R: Rng + ?Sized>(
    pk: &PublicKey,
    ciphertext: &BigUint,
    trials: usize,
    rng: &mut R,
) -> Result<Option<AsspRecovery>> {
    let expanded = expand_assp_to_ssp(pk);
    let Some(x) = lattice_attack_trials(&expanded.weights, ciphertext, pk.modulus(), trials, rng)? else {
        return Ok(None);
    };
    let coefficients = expanded.coefficients(&x);
    let Some((bits, noise)) = structural_check(&coefficients) else {
        return Ok(None);
    };
    if accumulate(pk.weights(), pk.modulus(), &bits, &noise) != *ciphertext {
        return Ok(None);
    }
    Ok(Some(AsspRecovery { bits, noise, coefficients }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vectors::appendix_a;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| x.into()).collect()
    }

    /// Σ x_i·row_i − row_{n+1} + q·row_{n+2} with q chosen to clear the sum column.
    fn solution_vector(lat: &IntegerLattice, w: &[u64], x: &[bool], s: u64, m: u64) -> Vec<BigInt> {
        let n = w.len();
        let total: u64 = w.iter().zip(x).filter(|(_, &b)| b).map(|(w, _)| w).sum();
        let q = -((total as i128 - s as i128) / m as i128);
        let rows = lat.rows();
        let mut v = vec![BigInt::zero(); n + 2];
        for (i, &b) in x.iter().enumerate() {
            if b {
                for (a, r) in v.iter_mut().zip(&rows[i]) {
                    *a += r;
                }
            }
        }
        for (a, r) in v.iter_mut().zip(&rows[n]) {
            *a -= r;
        }
        for (a, r) in v.iter_mut().zip(&rows[n + 1]) {
            *a += r * BigInt::from(q);
        }
        v
    }

    #[test]
    fn shape_and_scale() {
        assert_eq!(lattice_scale(8), 4);
        assert_eq!(lattice_scale(3), 3);
        let lat = build_ssp_lattice(&big(&[3, 5, 7]), &8u32.into(), &11u32.into()).unwrap();
        assert_eq!(lat.dim(), 5);
        assert_eq!(lat.ncols(), 5);
    }

    #[test]
    fn one_variable_solution_is_in_lattice() {
        let lat = build_ssp_lattice(&big(&[5]), &5u32.into(), &9u32.into()).unwrap();
        let v = solution_vector(&lat, &[5], &[true], 5, 9);
        assert_eq!(v, vec![BigInt::from(1), BigInt::zero(), BigInt::from(-1)]);
    }

    #[test]
    fn appendix_subset_sum_vector_present() {
        // 2034 + 134 + 2402 + 607 = 5177 ≡ 1596 (mod 3581).
        let x = [true, false, true, false, true, false, false, true];
        let lat = build_ssp_lattice(&big(&appendix_a::C), &1596u32.into(), &3581u32.into()).unwrap();
        let v = solution_vector(&lat, &appendix_a::C, &x, 1596, 3581);
        let expect: Vec<BigInt> =
            x.iter().map(|&b| BigInt::from(if b { 1 } else { -1 })).chain([BigInt::zero(), BigInt::from(-1)]).collect();
        assert_eq!(v, expect);
    }

    #[test]
    fn zero_target_has_no_nontrivial_answer() {
        // Weights 1, 2 and 4 modulo 64 only reach 0 with the empty subset.
        let got = lattice_attack(&big(&[1, 2, 4]), &BigUint::zero(), &64u32.into()).unwrap();
        assert_eq!(got, None);
    }

    #[test]
    fn low_density_instance_recovered() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let n = 12;
        let m: BigUint = BigUint::one() << 40u32;
        let w: Vec<BigUint> = (0..n).map(|_| rng.gen_range(1u64..(1 << 40)).into()).collect();
        let x: Vec<bool> = (0..n).map(|i| i % 3 != 0).collect();
        let s: BigUint = w.iter().zip(&x).filter(|(_, &b)| b).map(|(w, _)| w).sum::<BigUint>() % &m;
        let got = lattice_attack_trials(&w, &s, &m, 4, &mut rng).unwrap().expect("recovered");
        assert!(subset_sum_holds(&w, &got, &s, &m));
    }

    #[test]
    fn expansion_shape() {
        let km = appendix_a::key_material();
        let e = expand_assp_to_ssp(km.public());
        // Bit lengths of 8, 7, …, 1.
        let per_pos: Vec<usize> = (1..=8).map(|p| e.vars.iter().filter(|v| v.0 == p).count()).collect();
        assert_eq!(per_pos, vec![4, 3, 3, 3, 3, 2, 2, 1]);
        assert_eq!(e.weights.len(), 21);
    }

    #[test]
    fn expansion_is_linear() {
        let km = appendix_a::key_material();
        let e = expand_assp_to_ssp(km.public());
        let m = appendix_a::M;
        for mask in [0u32, 1, 0x1fffff, 0x15a5a5, 0x12345] {
            let x: Vec<bool> = (0..21).map(|i| (mask >> i) & 1 == 1).collect();
            let kappa = e.coefficients(&x);
            let direct: u64 = kappa.iter().zip(&appendix_a::C).map(|(k, c)| k * c).sum::<u64>() % m;
            let flat: u64 =
                e.weights.iter().zip(&x).filter(|(_, &b)| b).map(|(w, _)| u64::try_from(w).unwrap()).sum::<u64>() % m;
            assert_eq!(direct, flat);
        }
    }

    #[test]
    fn structural_check_examples() {
        // b = 10101001, noise at 6 and 7.
        let (b, r) = structural_check(&[4, 0, 3, 0, 2, 1, 1, 1]).unwrap();
        assert_eq!(crate::block::format_bits(&b), "10101001");
        assert_eq!(crate::block::format_bits(&r), "00000110");
        assert!(structural_check(&[0, 0, 0, 0, 0, 0, 0, 2]).is_none());
        assert!(structural_check(&[0; 8]).is_none());
    }
}
