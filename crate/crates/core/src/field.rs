//! Finite fields `F_q`, `q = p^h`, and extension towers over them.
//!
//! Elements are stored as packed integers in `[0, q)`. For a field built
//! directly over `F_p` the packing is the base-`p` digit vector of the
//! polynomial coefficients, little-endian in the generator `w`. A tower
//! `F_{Q^e}` over a subfield `F_Q` packs the coefficients (themselves packed
//! elements of `F_Q`) in base `Q`, which is again a base-`p` digit packing.
//! The packed integer is the serialized form used by every file format.
//!
//! The defining polynomial over the immediate base is the first monic
//! polynomial, in increasing packed order of its non-leading coefficients,
//! whose root generates the multiplicative group. Prime fields use the
//! modulus `x` and the smallest primitive root for their log tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default upper bound on `q` accepted by [`FieldSpec::new`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// Log/exp tables are only built up to this size.
pub const TABLE_CAP: u32 = 1 << 16;

struct Tables {
    /// `exp[i] = g^i`, doubled in length so `exp[log a + log b]` needs no reduction.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u32>,
}

/// A finite field together with the data that fixes its representation.
pub struct FieldSpec {
    p: u32,
    h: u32,
    q: u32,
    base: Option<Arc<FieldSpec>>,
    degree: u32,
    modulus: Vec<u32>,
    primitive: u32,
    tables: Option<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.p == other.p
                && self.h == other.h
                && self.degree == other.degree
                && self.modulus == other.modulus
                && self.base == other.base)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("h", &self.h)
            .field("q", &self.q)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .field("base_q", &self.base.as_ref().map(|b| b.q))
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, h)` with `q = p^h`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut h) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldSpec {
    /// `F_{p^h}` with the default size cap.
    pub fn new(p: u32, h: u32) -> Result<Arc<Self>> {
        Self::with_cap(p, h, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u32, h: u32, cap: u64) -> Result<Arc<Self>> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if h == 0 {
            return Err(Error::params("extension degree must be at least 1"));
        }
        let size = (p as u64).checked_pow(h).unwrap_or(u64::MAX);
        if size > cap {
            return Err(Error::FieldCapExceeded { size, cap });
        }
        let prime = Arc::new(Self::prime(p));
        if h == 1 {
            Ok(prime)
        } else {
            Self::extend_with_cap(&prime, h, cap)
        }
    }

    fn prime(p: u32) -> Self {
        let order = (p - 1) as u64;
        let factors = prime_factors(order);
        let pow_mod = |mut b: u64, mut e: u64| {
            let mut r = 1u64;
            b %= p as u64;
            while e > 0 {
                if e & 1 == 1 {
                    r = r * b % p as u64;
                }
                b = b * b % p as u64;
                e >>= 1;
            }
            r
        };
        let g = (1..p as u64)
            .find(|&g| p == 2 || factors.iter().all(|&r| pow_mod(g, order / r) != 1))
            .expect("prime fields have primitive roots") as u32;
        let mut field = FieldSpec {
            p,
            h: 1,
            q: p,
            base: None,
            degree: 1,
            modulus: vec![0, 1],
            primitive: g,
            tables: None,
        };
        if p <= TABLE_CAP {
            let mut exp = Vec::with_capacity(2 * (p as usize - 1));
            let mut x = 1u64;
            for _ in 0..p - 1 {
                exp.push(x as u32);
                x = x * g as u64 % p as u64;
            }
            field.install_tables(exp);
        }
        field
    }

    /// The degree-`e` extension of `base`, built with the polynomial basis
    /// `{1, w, ..., w^(e-1)}` over `base`.
    pub fn extend(base: &Arc<FieldSpec>, e: u32) -> Result<Arc<Self>> {
        Self::extend_with_cap(base, e, DEFAULT_FIELD_CAP)
    }

    pub fn extend_with_cap(base: &Arc<FieldSpec>, e: u32, cap: u64) -> Result<Arc<Self>> {
        if e < 2 {
            return Err(Error::params("tower extension degree must be at least 2"));
        }
        let bq = base.q as u64;
        let size = bq.checked_pow(e).unwrap_or(u64::MAX);
        if size > cap {
            return Err(Error::FieldCapExceeded { size, cap });
        }
        let order = size - 1;
        let factors = prime_factors(order);
        let e_us = e as usize;
        let mut modulus = None;
        for idx in 0..size {
            let mut coeffs: Vec<u32> = (0..e)
                .map(|i| ((idx / bq.pow(i)) % bq) as u32)
                .collect();
            if coeffs[0] == 0 {
                continue;
            }
            coeffs.push(1);
            let x = {
                let mut v = vec![0u32; e_us];
                v[1] = 1;
                v
            };
            let one = {
                let mut v = vec![0u32; e_us];
                v[0] = 1;
                v
            };
            if poly_pow_mod(base, &x, order, &coeffs) != one {
                continue;
            }
            if factors
                .iter()
                .all(|&r| poly_pow_mod(base, &x, order / r, &coeffs) != one)
            {
                modulus = Some(coeffs);
                break;
            }
        }
        let modulus = modulus.expect("a primitive polynomial exists for every degree");
        debug_assert!(is_irreducible(base, &modulus));
        let mut field = FieldSpec {
            p: base.p,
            h: base.h * e,
            q: size as u32,
            base: Some(Arc::clone(base)),
            degree: e,
            modulus,
            primitive: base.q,
            tables: None,
        };
        if field.q <= TABLE_CAP {
            let mut exp = Vec::with_capacity(order as usize);
            let mut cur = vec![0u32; e_us];
            cur[0] = 1;
            for _ in 0..order {
                exp.push(field.pack(&cur));
                cur = field.times_generator(&cur);
            }
            field.install_tables(exp);
        }
        Ok(Arc::new(field))
    }

    fn install_tables(&mut self, mut exp: Vec<u32>) {
        let mut log = vec![0u32; self.q as usize];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let copy = exp.clone();
        exp.extend(copy);
        self.tables = Some(Tables { exp, log });
    }

    fn times_generator(&self, coeffs: &[u32]) -> Vec<u32> {
        let base = self.base.as_ref().expect("towers have a base");
        let e = self.degree as usize;
        let top = coeffs[e - 1];
        let mut out = vec![0u32; e];
        out[1..e].copy_from_slice(&coeffs[..e - 1]);
        if top != 0 {
            for (o, &m) in out.iter_mut().zip(&self.modulus[..e]) {
                *o = base.sub(*o, base.mul(top, m));
            }
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Degree over the immediate base field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn base(&self) -> Option<&Arc<FieldSpec>> {
        self.base.as_ref()
    }

    /// Coefficients of the defining polynomial over the immediate base, low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive_element(&self) -> u32 {
        self.primitive
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn is_prime_field(&self) -> bool {
        self.h == 1
    }

    pub fn element(&self, value: u32) -> Result<FieldElement<'_>> {
        if value >= self.q {
            return Err(Error::params(format!("{value} is not an element of F_{}", self.q)));
        }
        Ok(FieldElement { field: self, value })
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement<'_>> {
        (0..self.q).map(move |value| FieldElement { field: self, value })
    }

    /// Coordinates over the immediate base (length `degree`).
    pub fn digits(&self, x: u32) -> Vec<u32> {
        let bq = self.base.as_ref().map_or(self.p, |b| b.q);
        let mut x = x;
        (0..self.degree)
            .map(|_| {
                let d = x % bq;
                x /= bq;
                d
            })
            .collect()
    }

    pub fn pack(&self, coeffs: &[u32]) -> u32 {
        let bq = self.base.as_ref().map_or(self.p, |b| b.q);
        coeffs.iter().rev().fold(0u32, |acc, &c| acc * bq + c)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.h == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut scale) = (0u32, 1u32);
        for _ in 0..self.h {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * scale;
            scale *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        if self.h == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut a = a;
        let (mut out, mut scale) = (0u32, 1u32);
        for _ in 0..self.h {
            let d = a % self.p;
            out += ((self.p - d) % self.p) * scale;
            scale *= self.p;
            a /= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            return t.exp[(t.log[a as usize] + t.log[b as usize]) as usize];
        }
        if self.h == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let base = self.base.as_ref().expect("towers have a base");
        let prod = poly_mul_mod(base, &self.digits(a), &self.digits(b), &self.modulus);
        self.pack(&prod)
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        if let Some(t) = &self.tables {
            let l = t.log[a as usize];
            return Ok(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize]);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let l = (t.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
            return t.exp[l as usize];
        }
        let (mut base, mut e, mut r) = (a, e, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    /// `x -> x^(p^e)`.
    pub fn frobenius(&self, x: u32, e: u32) -> u32 {
        self.pow(x, (self.p as u64).pow(e % self.h.max(1)))
    }
}

fn poly_mul_mod(base: &FieldSpec, a: &[u32], b: &[u32], modulus: &[u32]) -> Vec<u32> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * e - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = base.add(prod[i + j], base.mul(x, y));
        }
    }
    for d in (e..prod.len()).rev() {
        let t = prod[d];
        if t == 0 {
            continue;
        }
        for i in 0..e {
            prod[d - e + i] = base.sub(prod[d - e + i], base.mul(t, modulus[i]));
        }
        prod[d] = 0;
    }
    prod.truncate(e);
    prod
}

fn poly_pow_mod(base: &FieldSpec, x: &[u32], mut e: u64, modulus: &[u32]) -> Vec<u32> {
    let n = modulus.len() - 1;
    let mut r = vec![0u32; n];
    r[0] = 1;
    let mut b = x.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            r = poly_mul_mod(base, &r, &b, modulus);
        }
        b = poly_mul_mod(base, &b, &b, modulus);
        e >>= 1;
    }
    r
}

/// Remainder of `a` modulo the monic polynomial `m` (coefficients low to high).
fn poly_rem(base: &FieldSpec, a: &[u32], m: &[u32]) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let t = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if t != 0 {
            for i in 0..=dm {
                r[shift + i] = base.sub(r[shift + i], base.mul(t, m[i]));
            }
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree at most `deg/2`.
pub(crate) fn is_irreducible(base: &FieldSpec, f: &[u32]) -> bool {
    let deg = f.len() - 1;
    let bq = base.q as u64;
    for d in 1..=deg / 2 {
        for idx in 0..bq.pow(d as u32) {
            let mut m: Vec<u32> = (0..d).map(|i| ((idx / bq.pow(i as u32)) % bq) as u32).collect();
            m.push(1);
            if poly_rem(base, f, &m).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// An element of a particular field.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f FieldSpec,
    value: u32,
}

impl<'f> FieldElement<'f> {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &'f FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement<'_>) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(self, other: FieldElement<'_>) -> Result<Self> {
        arith(ArithOp::Add, self, Some(other))
    }

    pub fn mul(self, other: FieldElement<'_>) -> Result<Self> {
        arith(ArithOp::Mul, self, Some(other))
    }

    pub fn neg(self) -> Self {
        FieldElement { field: self.field, value: self.field.neg(self.value) }
    }

    pub fn inv(self) -> Result<Self> {
        arith(ArithOp::Inv, self, None)
    }

    pub fn pow(self, e: u64) -> Self {
        FieldElement { field: self.field, value: self.field.pow(self.value, e) }
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field == other.field
    }
}

impl Eq for FieldElement<'_> {}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@F{}", self.value, self.field.q)
    }
}

impl fmt::Display for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Neg,
    Mul,
    Inv,
    Pow(u64),
}

/// Checked field arithmetic on bound elements.
pub fn arith<'f>(
    op: ArithOp,
    a: FieldElement<'f>,
    b: Option<FieldElement<'_>>,
) -> Result<FieldElement<'f>> {
    let f = a.field;
    let value = match op {
        ArithOp::Add | ArithOp::Mul => {
            let b = b.ok_or(Error::MissingOperand)?;
            a.same_field(&b)?;
            if op == ArithOp::Add {
                f.add(a.value, b.value)
            } else {
                f.mul(a.value, b.value)
            }
        }
        ArithOp::Neg => f.neg(a.value),
        ArithOp::Inv => f.inv(a.value)?,
        ArithOp::Pow(e) => f.pow(a.value, e),
    };
    Ok(FieldElement { field: f, value })
}

/// Coordinates of `x` over `base` in the polynomial basis `{1, w, ..., w^(e-1)}`
/// of the tower containing `x`.
pub fn subfield_expand<'b>(x: FieldElement<'_>, base: &'b FieldSpec) -> Result<Vec<FieldElement<'b>>> {
    match x.field.base() {
        Some(b) if **b == *base => Ok(x
            .field
            .digits(x.value)
            .into_iter()
            .map(|value| FieldElement { field: base, value })
            .collect()),
        _ => Err(Error::NotInTower),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &FieldSpec) {
        let q = f.q();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_up_to_64() {
        for q in 2..=64u64 {
            if let Some((p, h)) = prime_power(q) {
                let f = FieldSpec::new(p as u32, h).unwrap();
                assert_eq!(f.q() as u64, q);
                check_axioms(&f);
            }
        }
    }

    #[test]
    fn tower_axioms() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        let f16 = FieldSpec::extend(&f4, 2).unwrap();
        check_axioms(&f16);
        let f9 = FieldSpec::extend(&FieldSpec::new(3, 1).unwrap(), 2).unwrap();
        check_axioms(&f9);
    }

    #[test]
    fn small_moduli() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        let f4 = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let f8 = FieldSpec::new(2, 3).unwrap();
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]);
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(f3.inv(1).unwrap(), 1);
        assert_eq!(f3.inv(2).unwrap(), 2);
    }

    #[test]
    fn deterministic_construction() {
        for (p, h) in [(2, 4), (3, 3), (5, 2), (7, 2)] {
            assert_eq!(*FieldSpec::new(p, h).unwrap(), *FieldSpec::new(p, h).unwrap());
        }
        assert_eq!(*FieldSpec::new(2, 2).unwrap(), *FieldSpec::extend(&FieldSpec::new(2, 1).unwrap(), 2).unwrap());
    }

    #[test]
    fn f4_generator_squared() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        let w = f4.element(2).unwrap();
        // w^2 = w + 1 under x^2 + x + 1.
        assert_eq!(w.mul(w).unwrap().value(), 3);
    }

    #[test]
    fn f5_inverse_and_fermat() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let two = f5.element(2).unwrap();
        assert_eq!(arith(ArithOp::Inv, two, None).unwrap().value(), 3);
        for f in [FieldSpec::new(5, 1).unwrap(), FieldSpec::new(3, 2).unwrap(), FieldSpec::new(2, 5).unwrap()] {
            for a in f.elements().skip(1) {
                assert_eq!(a.pow(f.q() as u64 - 1).value(), 1);
            }
        }
    }

    #[test]
    fn errors() {
        assert_eq!(FieldSpec::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(FieldSpec::new(2, 21).unwrap_err().is_cap());
        let f3 = FieldSpec::new(3, 1).unwrap();
        let f5 = FieldSpec::new(5, 1).unwrap();
        let a = f3.element(1).unwrap();
        let b = f5.element(1).unwrap();
        assert_eq!(a.add(b).unwrap_err(), Error::MixedFields);
        assert_eq!(f3.element(0).unwrap().inv().unwrap_err(), Error::ZeroInverse);
        assert!(f3.element(3).is_err());
    }

    #[test]
    fn polynomial_arithmetic_without_tables() {
        // 3^11 exceeds the table cap, so multiplication falls back to polynomials.
        let f = FieldSpec::new(3, 11).unwrap();
        assert!(!f.has_tables());
        let g = f.primitive_element();
        let order = f.q() as u64 - 1;
        assert_eq!(f.pow(g, order), 1);
        assert_ne!(f.pow(g, order / 2), 1);
        let a = 12345 % f.q();
        assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
    }

    #[test]
    fn frobenius_is_additive() {
        for f in [FieldSpec::new(2, 4).unwrap(), FieldSpec::new(3, 2).unwrap(), FieldSpec::new(5, 2).unwrap()] {
            for a in 0..f.q() {
                for b in 0..f.q() {
                    assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
                }
            }
        }
    }

    #[test]
    fn subfield_expansion() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        let f4 = FieldSpec::new(2, 2).unwrap();
        let zero = subfield_expand(f4.element(0).unwrap(), &f2).unwrap();
        assert!(zero.iter().all(|c| c.is_zero()));
        let one: Vec<u32> = subfield_expand(f4.element(1).unwrap(), &f2).unwrap().iter().map(|c| c.value()).collect();
        assert_eq!(one, vec![1, 0]);
        let w1: Vec<u32> = subfield_expand(f4.element(3).unwrap(), &f2).unwrap().iter().map(|c| c.value()).collect();
        assert_eq!(w1, vec![1, 1]);
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(subfield_expand(f4.element(1).unwrap(), &f3).unwrap_err(), Error::NotInTower);
    }

    #[test]
    fn subfield_expansion_is_linear() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        let f64 = FieldSpec::extend(&f4, 3).unwrap();
        let exp = |x: u32| -> Vec<u32> {
            subfield_expand(f64.element(x).unwrap(), &f4).unwrap().iter().map(|c| c.value()).collect()
        };
        for a in 0..4 {
            for b in 0..4 {
                for x in (0..64).step_by(5) {
                    for y in (0..64).step_by(7) {
                        // Scalars of F_4 sit in the tower as constant polynomials.
                        let lhs = exp(f64.add(f64.mul(a, x), f64.mul(b, y)));
                        let (ex, ey) = (exp(x), exp(y));
                        let rhs: Vec<u32> = (0..3)
                            .map(|i| f4.add(f4.mul(a, ex[i]), f4.mul(b, ey[i])))
                            .collect();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
