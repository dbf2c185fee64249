//! Attack experiments over planted and genuine instances.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use num_bigint::{BigUint, RandBigInt};
use num_traits::One;
use rand::Rng;

use super::attack::{assp_attack, lattice_attack_trials, subset_sum_holds};
use super::density::{assp_density, ssp_density};
use crate::bigmath::log2;
use crate::block::{extend_block, NoiseVector};
use crate::encrypt::encrypt_block;
use crate::error::{Error, Result};
use crate::keygen::KeyMaterial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttackOutcome {
    /// The planted bits were recovered.
    Recovered,
    /// A verified solution other than the planted one.
    Alternative,
    Failed,
}

impl AttackOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            AttackOutcome::Recovered => "recovered",
            AttackOutcome::Alternative => "alternative",
            AttackOutcome::Failed => "failed",
        }
    }

    pub fn is_success(self) -> bool {
        self != AttackOutcome::Failed
    }
}

impl fmt::Display for AttackOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AttackRecord {
    pub n: usize,
    pub lg_m: f64,
    pub density: f64,
    pub outcome: AttackOutcome,
    pub wall_time_ms: f64,
}

/// Writes records as CSV with header `n,lgM,density,attack_outcome,wall_time_ms`.
pub fn write_csv<W: Write>(out: W, records: &[AttackRecord]) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "lgM", "density", "attack_outcome", "wall_time_ms"]).map_err(io)?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            format!("{:.4}", r.lg_m),
            format!("{:.4}", r.density),
            r.outcome.to_string(),
            format!("{:.3}", r.wall_time_ms),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidParameter(format!("csv: {e}")))
}

/// Fraction of records whose outcome counts as a success.
pub fn success_rate(records: &[AttackRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.outcome.is_success()).count() as f64 / records.len() as f64
}

/// A modular subset-sum instance with a known solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedSsp {
    pub weights: Vec<BigUint>,
    pub modulus: BigUint,
    pub target: BigUint,
    pub solution: Vec<bool>,
}

/// Weights uniform in `[1, M)` with `M = 2^⌈n/density⌉`, and a random
/// nonzero planted subset.
pub fn planted_ssp<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Result<PlantedSsp> {
    if n == 0 || density.is_nan() || density <= 0.0 {
        return Err(Error::InvalidParameter(format!("n = {n}, density = {density}")));
    }
    let bits = (n as f64 / density).ceil() as u64;
    if bits < 2 {
        return Err(Error::InvalidParameter(format!("density {density} too high for n = {n}")));
    }
    let modulus = BigUint::one() << bits;
    let weights: Vec<BigUint> = (0..n).map(|_| rng.gen_biguint_range(&BigUint::one(), &modulus)).collect();
    let solution = loop {
        let x: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        if x.iter().any(|&b| b) {
            break x;
        }
    };
    let target =
        weights.iter().zip(&solution).filter(|(_, &b)| b).fold(BigUint::default(), |acc, (w, _)| acc + w) % &modulus;
    Ok(PlantedSsp { weights, modulus, target, solution })
}

pub fn run_ssp_experiment<R: Rng + ?Sized>(
    n: usize,
    density: f64,
    instances: usize,
    trials: usize,
    rng: &mut R,
) -> Result<Vec<AttackRecord>> {
    let mut records = Vec::with_capacity(instances);
    for _ in 0..instances {
        let inst = planted_ssp(n, density, rng)?;
        let report = ssp_density(n, &inst.weights)?;
        let start = Instant::now();
        let found = lattice_attack_trials(&inst.weights, &inst.target, &inst.modulus, trials, rng)?;
        let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        let outcome = match found {
            Some(x) if x == inst.solution => AttackOutcome::Recovered,
            Some(x) => {
                debug_assert!(subset_sum_holds(&inst.weights, &x, &inst.target, &inst.modulus));
                AttackOutcome::Alternative
            }
            None => AttackOutcome::Failed,
        };
        records.push(AttackRecord { n, lg_m: log2(&inst.modulus), density: report.density, outcome, wall_time_ms });
    }
    Ok(records)
}

/// Attacks genuine ciphertexts under fresh keys with `n_payload` payload bits.
/// The record's `n` is the block width `ñ` and its density is the anomalous one.
pub fn run_assp_experiment<R: Rng + ?Sized>(
    n_payload: usize,
    instances: usize,
    trials: usize,
    rng: &mut R,
) -> Result<Vec<AttackRecord>> {
    let mut records = Vec::with_capacity(instances);
    for _ in 0..instances {
        let km = KeyMaterial::generate(n_payload, rng)?;
        let pk = km.public();
        let payload: Vec<bool> = (0..n_payload).map(|_| rng.gen()).collect();
        let block = extend_block(&payload, rng)?;
        let noise = NoiseVector::random(pk.n_tilde(), rng);
        let ct = encrypt_block(pk, &block, &noise)?;
        let report = assp_density(pk.n_tilde(), pk.modulus())?;
        let start = Instant::now();
        let found = assp_attack(pk, ct.value(), trials, rng)?;
        let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        let outcome = match found {
            Some(rec) if rec.bits == block.bits() => AttackOutcome::Recovered,
            Some(_) => AttackOutcome::Alternative,
            None => AttackOutcome::Failed,
        };
        records.push(AttackRecord {
            n: pk.n_tilde(),
            lg_m: log2(pk.modulus()),
            density: report.density,
            outcome,
            wall_time_ms,
        });
    }
    Ok(records)
}
