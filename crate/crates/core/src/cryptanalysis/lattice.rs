//! Integer lattices and exact LLL reduction.
//!
//! [`lll_reduce`] is the fraction-free (integral) LLL: it keeps the Gram
//! determinants `d_i` and the scaled coefficients `λ_ij = d_{j+1}·μ_ij`, which
//! are integers, so no rationals appear during reduction. [`is_lll_reduced`]
//! rechecks the result with an independent rational Gram-Schmidt.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    rows: Vec<Vec<BigInt>>,
}

impl IntegerLattice {
    /// Rows must have equal length and be linearly independent.
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let width = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || width == 0 {
            return Err(Error::InvalidParameter("empty basis".into()));
        }
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidParameter("basis rows differ in length".into()));
        }
        let lattice = Self { rows };
        lattice.gram_determinants()?;
        Ok(lattice)
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.rows
    }

    /// `d_1 … d_n`, the Gram determinants of the leading sub-bases.
    pub fn gram_determinants(&self) -> Result<Vec<BigInt>> {
        let n = self.rows.len();
        let mut d = vec![BigInt::one(); n + 1];
        let mut lam = vec![vec![BigInt::zero(); n]; n];
        for k in 0..n {
            gram_row(&self.rows, &mut lam, &mut d, k)?;
        }
        d.remove(0);
        Ok(d)
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fills row `k` of `lam` and `d[k + 1]` from rows `0..=k`.
fn gram_row(b: &[Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize) -> Result<()> {
    for j in 0..=k {
        let mut u = dot(&b[k], &b[j]);
        for i in 0..j {
            u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
        }
        if j < k {
            lam[k][j] = u;
        } else {
            if u.is_zero() {
                return Err(Error::RankDeficient);
            }
            d[k + 1] = u;
        }
    }
    Ok(())
}

/// Output of [`lll_reduce_with_transform`]: `basis = transform · input`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub basis: IntegerLattice,
    pub transform: Vec<Vec<BigInt>>,
}

fn check_delta(delta: Rational64) -> Result<()> {
    let quarter = Rational64::new(1, 4);
    if delta <= quarter || delta >= Rational64::one() {
        return Err(Error::InvalidParameter(format!("LLL delta {delta} not in (1/4, 1)")));
    }
    Ok(())
}

/// Nearest integer to `num / den` for `den > 0`, ties rounded up.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (num * &two + den).div_floor(&(den * two))
}

struct Reducer {
    b: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    lam: Vec<Vec<BigInt>>,
    d: Vec<BigInt>,
}

impl Reducer {
    fn sub_row(rows: &mut [Vec<BigInt>], k: usize, l: usize, q: &BigInt) {
        let (head, tail) = rows.split_at_mut(k);
        for (x, y) in tail[0].iter_mut().zip(&head[l]) {
            if !y.is_zero() {
                *x -= q * y;
            }
        }
    }

    /// Size-reduces row `k` against row `l < k`.
    fn reduce(&mut self, k: usize, l: usize) {
        let dl = &self.d[l + 1];
        if (&self.lam[k][l] * 2u32).abs() <= *dl {
            return;
        }
        let q = round_div(&self.lam[k][l], dl);
        Self::sub_row(&mut self.b, k, l, &q);
        if let Some(u) = self.u.as_mut() {
            Self::sub_row(u, k, l, &q);
        }
        let qd = &q * dl;
        self.lam[k][l] -= qd;
        for i in 0..l {
            let t = &q * &self.lam[l][i];
            self.lam[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k, k - 1);
        if let Some(u) = self.u.as_mut() {
            u.swap(k, k - 1);
        }
        for j in 0..k - 1 {
            let t = std::mem::take(&mut self.lam[k][j]);
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], t);
        }
        let l = self.lam[k][k - 1].clone();
        let big_b = (&self.d[k - 1] * &self.d[k + 1] + &l * &l) / &self.d[k];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k + 1] * &self.lam[i][k - 1] - &l * &t) / &self.d[k];
            self.lam[i][k - 1] = (&big_b * &t + &l * &self.lam[i][k]) / &self.d[k + 1];
        }
        self.d[k] = big_b;
    }
}

/// Exact LLL with parameter `delta ∈ (1/4, 1)`.
pub fn lll_reduce(basis: &IntegerLattice, delta: Rational64) -> Result<IntegerLattice> {
    lll_run(basis, delta, false).map(|r| r.basis)
}

/// As [`lll_reduce`], also returning the unimodular transform.
pub fn lll_reduce_with_transform(basis: &IntegerLattice, delta: Rational64) -> Result<Reduction> {
    lll_run(basis, delta, true)
}

fn lll_run(basis: &IntegerLattice, delta: Rational64, track: bool) -> Result<Reduction> {
    check_delta(delta)?;
    let n = basis.dim();
    let p = BigInt::from(*delta.numer());
    let q = BigInt::from(*delta.denom());
    let identity = |n: usize| -> Vec<Vec<BigInt>> {
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
    };
    let mut r = Reducer {
        b: basis.rows.clone(),
        u: track.then(|| identity(n)),
        lam: vec![vec![BigInt::zero(); n]; n],
        d: vec![BigInt::one(); n + 1],
    };
    r.d[1] = dot(&r.b[0], &r.b[0]);
    if r.d[1].is_zero() {
        return Err(Error::RankDeficient);
    }
    let mut k = 1usize;
    let mut kmax = 0usize;
    while k < n {
        if k > kmax {
            kmax = k;
            gram_row(&r.b, &mut r.lam, &mut r.d, k)?;
        }
        r.reduce(k, k - 1);
        // Lovász: d_{k+1}·d_{k-1} ≥ δ·d_k² − λ²  (scaled by the denominator of δ).
        let lhs = &q * &r.d[k + 1] * &r.d[k - 1];
        let lam = &r.lam[k][k - 1];
        let rhs = &p * &r.d[k] * &r.d[k] - &q * lam * lam;
        if lhs < rhs {
            r.swap(k, kmax);
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                r.reduce(k, l);
            }
            k += 1;
        }
    }
    Ok(Reduction { basis: IntegerLattice { rows: r.b }, transform: r.u.unwrap_or_else(|| identity(n)) })
}

/// Rational Gram-Schmidt: `(μ, ‖b*_i‖²)`.
pub fn gram_schmidt(basis: &IntegerLattice) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = basis.dim();
    let rows: Vec<Vec<BigRational>> =
        basis.rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let rdot = |a: &[BigRational], b: &[BigRational]| -> BigRational {
        a.iter().zip(b).map(|(x, y)| x * y).fold(BigRational::zero(), |acc, v| acc + v)
    };
    for i in 0..n {
        let mut v = rows[i].clone();
        for j in 0..i {
            if norms[j].is_zero() {
                continue;
            }
            let m = rdot(&rows[i], &star[j]) / &norms[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= &m * s;
            }
            mu[i][j] = m;
        }
        norms.push(rdot(&v, &v));
        star.push(v);
        mu[i][i] = BigRational::one();
    }
    (mu, norms)
}

/// Size reduction `|μ_ij| ≤ 1/2` and the Lovász condition at `delta`.
pub fn is_lll_reduced(basis: &IntegerLattice, delta: Rational64) -> bool {
    let (mu, norms) = gram_schmidt(basis);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let delta = BigRational::new(BigInt::from(*delta.numer()), BigInt::from(*delta.denom()));
    let n = basis.dim();
    for i in 0..n {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 {
            let m = &mu[i][i - 1];
            if norms[i] < (&delta - m * m) * &norms[i - 1] {
                return false;
            }
        }
    }
    true
}

/// Squared Euclidean norm.
pub fn norm_sq(v: &[BigInt]) -> BigInt {
    dot(v, v)
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

pub fn is_zero_vector(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.sign() == Sign::NoSign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta() -> Rational64 {
        Rational64::new(3, 4)
    }

    fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        a.iter().map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum()).collect()).collect()
    }

    #[test]
    fn identity_is_fixed() {
        let id = IntegerLattice::from_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(lll_reduce(&id, delta()).unwrap(), id);
    }

    #[test]
    fn rank_deficiency_detected() {
        assert_eq!(IntegerLattice::from_i64(&[vec![1, 2], vec![2, 4]]), Err(Error::RankDeficient));
        assert!(IntegerLattice::from_i64(&[vec![1, 2], vec![3]]).is_err());
        let b = IntegerLattice::from_i64(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(lll_reduce(&b, Rational64::new(1, 4)).is_err());
        assert!(lll_reduce(&b, Rational64::new(1, 1)).is_err());
    }

    #[test]
    fn two_dimensional_shortest_vector() {
        let b = IntegerLattice::from_i64(&[vec![201, 37], vec![1648, 297]]).unwrap();
        let red = lll_reduce_with_transform(&b, delta()).unwrap();
        assert!(is_lll_reduced(&red.basis, delta()));
        // Brute-force shortest nonzero vector over small coefficients.
        let mut best = i128::MAX;
        for x in -100i128..=100 {
            for y in -100i128..=100 {
                if x == 0 && y == 0 {
                    continue;
                }
                let v0 = 201 * x + 1648 * y;
                let v1 = 37 * x + 297 * y;
                best = best.min(v0 * v0 + v1 * v1);
            }
        }
        let first: i128 = norm_sq(&red.basis.rows()[0]).try_into().unwrap();
        assert_eq!(first, best);
        assert_eq!(mat_mul(&red.transform, b.rows()), red.basis.rows());
        assert_eq!(determinant(&red.transform).abs(), BigInt::one());
    }

    #[test]
    fn determinant_examples() {
        let m: Vec<Vec<BigInt>> =
            [[2, 0, 1], [1, 3, 2], [1, 1, 2]].iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert_eq!(determinant(&m), BigInt::from(6));
        let m: Vec<Vec<BigInt>> =
            [[0, 1], [1, 0]].iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert_eq!(determinant(&m), BigInt::from(-1));
    }

    #[test]
    fn gram_determinants_match_rational_route() {
        let b = IntegerLattice::from_i64(&[vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]]).unwrap();
        let d = b.gram_determinants().unwrap();
        let (_, norms) = gram_schmidt(&b);
        let mut acc = BigRational::one();
        for (di, ni) in d.iter().zip(&norms) {
            acc *= ni;
            assert_eq!(BigRational::from_integer(di.clone()), acc);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn reduction_invariants(entries in proptest::collection::vec(-1000i64..1000, 16)) {
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(<[i64]>::to_vec).collect();
            let Ok(b) = IntegerLattice::from_i64(&rows) else { return Ok(()); };
            let red = lll_reduce_with_transform(&b, delta()).unwrap();
            proptest::prop_assert!(is_lll_reduced(&red.basis, delta()));
            proptest::prop_assert_eq!(mat_mul(&red.transform, b.rows()), red.basis.rows().to_vec());
            proptest::prop_assert_eq!(determinant(&red.transform).abs(), BigInt::one());
        }
    }
}
