//! Knapsack density metrics.
//!
//! A plain subset sum over `n` weights has density `n / lg max c_i`. For an
//! anomalous subset sum every coefficient `L_i` can reach `n − i + 1`, so the
//! density becomes `Σ lg L_i / lg M = lg n! / lg M`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bigmath::log2;
use crate::error::{Error, Result};

/// Below this density the low-density lattice attack is expected to work.
pub const LLL_THRESHOLD: f64 = 0.6463;
/// Upper threshold reached by the improved lattice.
pub const IMPROVED_THRESHOLD: f64 = 0.9408;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityClass {
    LllVulnerable,
    Borderline,
    Resistant,
    Supercritical,
}

impl DensityClass {
    pub fn of(density: f64) -> Self {
        if density < LLL_THRESHOLD {
            DensityClass::LllVulnerable
        } else if density < IMPROVED_THRESHOLD {
            DensityClass::Borderline
        } else if density > 1.0 {
            DensityClass::Supercritical
        } else {
            DensityClass::Resistant
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DensityClass::LllVulnerable => "lll-vulnerable",
            DensityClass::Borderline => "borderline",
            DensityClass::Resistant => "resistant",
            DensityClass::Supercritical => "supercritical",
        }
    }
}

impl fmt::Display for DensityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub n: usize,
    /// `lg` of the modulus (or of the largest weight for plain subset sums).
    pub lg_m: f64,
    pub density: f64,
    /// `lg n! / (2n)`, reported for anomalous sums only.
    pub lower_bound: Option<f64>,
    pub class: DensityClass,
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} lgM={:.4} D={:.4}", self.n, self.lg_m, self.density)?;
        if let Some(lb) = self.lower_bound {
            write!(f, " lower_bound={lb:.4}")?;
        }
        write!(f, " class={}", self.class)
    }
}

pub fn lg_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).log2()).sum()
}

pub fn ssp_density_bits(n: usize, lg_max: f64) -> Result<DensityReport> {
    if n == 0 || lg_max.is_nan() || lg_max <= 0.0 {
        return Err(Error::InvalidParameter("need n >= 1 and lg max > 0".into()));
    }
    let density = n as f64 / lg_max;
    Ok(DensityReport { n, lg_m: lg_max, density, lower_bound: None, class: DensityClass::of(density) })
}

/// `n / lg max c_i`.
pub fn ssp_density(n: usize, weights: &[BigUint]) -> Result<DensityReport> {
    if weights.is_empty() || weights.iter().any(Zero::is_zero) {
        return Err(Error::InvalidParameter("weights must be positive".into()));
    }
    let max = weights.iter().max().expect("nonempty");
    ssp_density_bits(n, log2(max))
}

pub fn assp_density_bits(n: usize, lg_m: f64) -> Result<DensityReport> {
    if n == 0 || lg_m.is_nan() || lg_m <= 0.0 {
        return Err(Error::InvalidParameter("need n >= 1 and lg M > 0".into()));
    }
    let lg_fact = lg_factorial(n);
    let density = lg_fact / lg_m;
    Ok(DensityReport {
        n,
        lg_m,
        density,
        lower_bound: Some(lg_fact / (2 * n) as f64),
        class: DensityClass::of(density),
    })
}

/// `lg n! / lg M`, with the lower bound `lg n! / (2n)`.
pub fn assp_density(n: usize, modulus: &BigUint) -> Result<DensityReport> {
    if *modulus < BigUint::from(2u32) {
        return Err(Error::InvalidParameter("modulus must be at least 2".into()));
    }
    assp_density_bits(n, log2(modulus))
}
