//! The weight thresholds `W(k,q)` and `W(j,k,q)` and related closed forms.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::field::{is_prime, prime_power};
use crate::geometry::{gaussian_coeff, theta};

/// The five classes of prime powers used by the weight bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QClass {
    Q1,
    Q2,
    Q3,
    Q4,
    Q5,
}

impl fmt::Display for QClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as u8 + 1;
        write!(f, "Q{i}")
    }
}

/// The class of `q`. The first two classes overlap at `q = 16` and `q = 25`;
/// the first matching class is returned.
pub fn q_class(q: u64) -> Result<QClass> {
    if prime_power(q).is_none() {
        return Err(Error::params(format!("{q} is not a prime power")));
    }
    let class = if q <= 9 || [16, 25, 27, 49].contains(&q) {
        QClass::Q1
    } else if q <= 23 || [29, 31, 32, 121].contains(&q) {
        QClass::Q2
    } else if q > 32 && is_prime(q) {
        QClass::Q3
    } else if q > 32 && q.is_multiple_of(2) {
        QClass::Q4
    } else {
        QClass::Q5
    };
    Ok(class)
}

fn big(x: BigUint) -> BigInt {
    BigInt::from(x)
}

fn to_biguint(x: BigInt) -> BigUint {
    if x.is_negative() {
        BigUint::default()
    } else {
        x.to_biguint().unwrap()
    }
}

/// `W(k, q)`: weights up to this bound in `C_{0,k}(n,q)` come from at most
/// two `k`-spaces.
pub fn w_k(k: i64, q: u64) -> Result<BigUint> {
    if k < 1 {
        return Err(Error::params("W(k,q) needs k >= 1"));
    }
    let qb = BigInt::from(q);
    let qk = qb.pow(k as u32);
    let qk1 = qb.pow(k as u32 - 1);
    let t2 = big(theta(k - 2, q));
    let w = match q_class(q)? {
        QClass::Q1 => 2 * qk,
        QClass::Q2 => 2 * big(theta(k, q)),
        QClass::Q3 => 3 * qk - 3 * qk1 - 1,
        QClass::Q4 => 3 * qk - 3 * qk1 + t2 - 1,
        QClass::Q5 => 3 * qk - 2 * qk1 + t2 - 1,
    };
    Ok(to_biguint(w))
}

/// `W(j, k, q)` as an exact fraction `(numerator, denominator)`.
pub fn w_jk_exact(j: i64, k: i64, q: u64) -> Result<(BigUint, BigUint)> {
    if !(0 <= j && j < k) {
        return Err(Error::params("W(j,k,q) needs 0 <= j < k"));
    }
    let g = gaussian_coeff(k + 1, j + 1, q);
    let qb = BigUint::from(q);
    Ok(match q_class(q)? {
        QClass::Q1 => (2u32 * qb.pow(k as u32) * gaussian_coeff(k, j, q), theta(j, q)),
        QClass::Q2 => (2u32 * g, BigUint::from(1u32)),
        QClass::Q3 | QClass::Q4 => ((3u32 * &qb - 7u32) * g, qb),
        QClass::Q5 => ((3u32 * &qb - 6u32) * g, qb),
    })
}

/// `W(j, k, q)` rounded down; a weight is at most `W(j,k,q)` exactly when it
/// is at most this value.
pub fn w_jk(j: i64, k: i64, q: u64) -> Result<BigUint> {
    let (a, b) = w_jk_exact(j, k, q)?;
    Ok(a / b)
}

/// `W(k,q)` and `W(j,k,q)` together with the class of `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightBoundTable {
    pub q_class: QClass,
    pub w_k: BigUint,
    pub w_jk: BigUint,
}

pub fn weight_bounds(j: i64, k: i64, q: u64) -> Result<WeightBoundTable> {
    Ok(WeightBoundTable { q_class: q_class(q)?, w_k: w_k(k, q)?, w_jk: w_jk(j, k, q)? })
}

/// Weight of `a1*k1 + a2*k2` for distinct `k`-spaces meeting in an
/// `s`-space, where `epsilon = 1` iff `a1 = -a2`.
pub fn two_space_weight(k: i64, q: u64, s: i64, epsilon: u32) -> Result<u64> {
    if !(-1 <= s && s < k) {
        return Err(Error::params(format!("need -1 <= s < k, got s={s} k={k}")));
    }
    if epsilon > 1 {
        return Err(Error::params("epsilon is 0 or 1"));
    }
    let w = 2u32 * theta(k, q) - (1 + epsilon) * theta(s, q);
    w.to_u64().ok_or_else(|| Error::params("weight overflows u64"))
}

/// Weights below `2 theta_k` that the two-space formula predicts for
/// `C_{0,k}(n,q)` over `F_p`: `theta_k` plus `two_space_weight` over the
/// intersection dimensions that occur in `PG(n,q)` and the values of
/// `epsilon` realisable with coefficients in `F_p^*`.
pub fn predicted_low_spectrum(n: i64, k: i64, q: u64) -> Result<Vec<u64>> {
    let (p, _) = prime_power(q).ok_or_else(|| Error::params(format!("{q} is not a prime power")))?;
    let limit = 2 * theta(k, q).to_u64().unwrap();
    let mut out = vec![theta(k, q).to_u64().unwrap()];
    let eps: &[u32] = if p == 2 { &[1] } else { &[0, 1] };
    for s in (2 * k - n).max(-1)..k {
        for &e in eps {
            let w = two_space_weight(k, q, s, e)?;
            if w < limit {
                out.push(w);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `gauss(n+1, j+1, q) > q^(n+1) - 1`: there are more `j`-spaces than any
/// single collineation orbit length can reach cyclically.
pub fn cyclic_obstruction(n: i64, j: i64, q: u64) -> bool {
    gaussian_coeff(n + 1, j + 1, q) > BigUint::from(q).pow(n as u32 + 1) - 1u32
}

/// The minimum weight `2 q^(k-j) [k choose j]_q` of `H_{j,k}(n,q)` for
/// large `q`; equals `2q^k` for `j = 0`.
pub fn hull_min_weight(j: i64, k: i64, q: u64) -> BigUint {
    2u32 * BigUint::from(q).pow((k - j) as u32) * gaussian_coeff(k, j, q)
}

/// `(q+2) q^(n-k-1)` for even `q`, `2 p^(n-k)` for prime `q`, otherwise
/// unknown.
pub fn dual_min_weight(n: i64, k: i64, q: u64) -> Option<BigUint> {
    let qb = BigUint::from(q);
    if q.is_multiple_of(2) {
        Some((&qb + 2u32) * qb.pow((n - k - 1) as u32))
    } else if is_prime(q) {
        Some(2u32 * qb.pow((n - k) as u32))
    } else {
        None
    }
}
