//! Row spaces over a prime field in reduced row-echelon form.
//!
//! Over `F_2` rows are packed 64 coordinates per word and combined with XOR.
//! For odd `p` every coordinate gets its own `u64` so that reductions can
//! accumulate several row operations before taking remainders.

use std::fmt;

/// Inverse of `a` modulo the prime `p`.
pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let (mut r, mut b, mut e) = (1u64, (a % p) as u64, (p - 2) as u64);
    let m = p as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u32
}

/// A subspace of `F_p^len` held as the rows of its reduced echelon basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Echelon {
    p: u32,
    len: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Echelon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Echelon(p={}, len={}, rank={})", self.p, self.len, self.rank())
    }
}

impl Echelon {
    pub fn new(p: u32, len: usize) -> Self {
        Echelon { p, len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows<'a>(p: u32, len: usize, rows: impl IntoIterator<Item = &'a [u32]>) -> Self {
        let mut e = Echelon::new(p, len);
        for r in rows {
            e.insert(r);
        }
        e
    }

    /// The whole space `F_p^len`.
    pub fn full(p: u32, len: usize) -> Self {
        let mut e = Echelon::new(p, len);
        for i in 0..len {
            let mut v = vec![0u32; len];
            v[i] = 1;
            e.insert(&v);
        }
        e
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn binary(&self) -> bool {
        self.p == 2
    }

    fn pack(&self, v: &[u32]) -> Vec<u64> {
        assert_eq!(v.len(), self.len, "vector length does not match the ambient space");
        if self.binary() {
            let mut w = vec![0u64; self.len.div_ceil(64)];
            for (i, &x) in v.iter().enumerate() {
                if x & 1 == 1 {
                    w[i / 64] |= 1 << (i % 64);
                }
            }
            w
        } else {
            v.iter().map(|&x| (x % self.p) as u64).collect()
        }
    }

    fn unpack(&self, r: &[u64]) -> Vec<u32> {
        if self.binary() {
            (0..self.len).map(|i| ((r[i / 64] >> (i % 64)) & 1) as u32).collect()
        } else {
            r.iter().map(|&x| x as u32).collect()
        }
    }

    fn entry(&self, r: &[u64], c: usize) -> u32 {
        if self.binary() {
            ((r[c / 64] >> (c % 64)) & 1) as u32
        } else {
            r[c] as u32
        }
    }

    /// Reduces a packed vector against every row; the result has zeros in
    /// all pivot columns.
    fn reduce_packed(&self, v: &mut [u64]) {
        if self.binary() {
            for (row, &c) in self.rows.iter().zip(&self.pivots) {
                if (v[c / 64] >> (c % 64)) & 1 == 1 {
                    for (x, &y) in v[c / 64..].iter_mut().zip(&row[c / 64..]) {
                        *x ^= y;
                    }
                }
            }
            return;
        }
        let p = self.p as u64;
        // each pass adds at most (p-1)^2 to an entry
        let limit = (u64::MAX - p) / ((p - 1) * (p - 1)).max(1);
        let mut pending = 0u64;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let t = v[c] % p;
            v[c] = t;
            if t == 0 {
                continue;
            }
            if pending == limit {
                for x in v[c..].iter_mut() {
                    *x %= p;
                }
                pending = 0;
            }
            let f = p - t;
            for (x, &y) in v[c..].iter_mut().zip(&row[c..]) {
                *x += f * y;
            }
            pending += 1;
        }
        for x in v.iter_mut() {
            *x %= p;
        }
    }

    fn lead(&self, v: &[u64]) -> Option<usize> {
        if self.binary() {
            v.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
        } else {
            v.iter().position(|&x| x != 0)
        }
    }

    /// Adds `v` to the space; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut w = self.pack(v);
        self.reduce_packed(&mut w);
        let Some(c) = self.lead(&w) else {
            return false;
        };
        if !self.binary() {
            let p = self.p as u64;
            let inv = inv_mod(w[c] as u32, self.p) as u64;
            if inv != 1 {
                for x in w[c..].iter_mut() {
                    *x = *x * inv % p;
                }
            }
            for row in self.rows.iter_mut() {
                let t = row[c];
                if t != 0 {
                    let f = p - t;
                    for (x, &y) in row[c..].iter_mut().zip(&w[c..]) {
                        *x = (*x + f * y) % p;
                    }
                }
            }
        } else {
            for row in self.rows.iter_mut() {
                if (row[c / 64] >> (c % 64)) & 1 == 1 {
                    for (x, &y) in row[c / 64..].iter_mut().zip(&w[c / 64..]) {
                        *x ^= y;
                    }
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, w);
        true
    }

    /// The remainder of `v` after reduction by the basis.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w = self.pack(v);
        self.reduce_packed(&mut w);
        self.unpack(&w)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = self.pack(v);
        self.reduce_packed(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Coordinates of a member vector with respect to the basis rows; these
    /// are simply its entries in the pivot columns.
    pub fn coordinates(&self, v: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&c| v[c] % self.p).collect()
    }

    pub fn row(&self, i: usize) -> Vec<u32> {
        self.unpack(&self.rows[i])
    }

    pub fn rows(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.rows.iter().map(|r| self.unpack(r))
    }

    /// Fixed-size bit rows; only meaningful for `p = 2`.
    pub(crate) fn packed_rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// The orthogonal complement under the standard dot product.
    pub fn kernel(&self) -> Echelon {
        let p = self.p;
        let mut is_pivot = vec![false; self.len];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let mut out = Echelon::new(p, self.len);
        for f in (0..self.len).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.len];
            v[f] = 1;
            for (row, &c) in self.rows.iter().zip(&self.pivots) {
                v[c] = (p - self.entry(row, f)) % p;
            }
            out.insert(&v);
        }
        out
    }

    pub fn sum(&self, other: &Echelon) -> Echelon {
        assert_eq!((self.p, self.len), (other.p, other.len));
        let mut out = self.clone();
        for r in other.rows() {
            out.insert(&r);
        }
        out
    }

    pub fn intersect(&self, other: &Echelon) -> Echelon {
        self.kernel().sum(&other.kernel()).kernel()
    }

    pub fn is_subspace_of(&self, other: &Echelon) -> bool {
        self.rows().all(|r| other.contains(&r))
    }
}

/// Dot product over `F_p`.
pub fn dot(p: u32, a: &[u32], b: &[u32]) -> u32 {
    let m = p as u64;
    (a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64 % m).sum::<u64>() % m) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rows(rng: &mut ChaCha8Rng, p: u32, m: usize, n: usize, density: f64) -> Vec<Vec<u32>> {
        (0..m)
            .map(|_| (0..n).map(|_| if rng.random_bool(density) { rng.random_range(1..p) } else { 0 }).collect())
            .collect()
    }

    /// Rank by plain Gaussian elimination on a copy, as an oracle.
    fn naive_rank(p: u32, rows: &[Vec<u32>]) -> usize {
        let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect();
        let n = m.first().map_or(0, |r| r.len());
        let pp = p as u64;
        let mut rank = 0;
        for c in 0..n {
            let Some(pr) = (rank..m.len()).find(|&i| !m[i][c].is_multiple_of(pp)) else { continue };
            m.swap(rank, pr);
            let inv = inv_mod(m[rank][c] as u32, p) as u64;
            for i in 0..m.len() {
                if i != rank && !m[i][c].is_multiple_of(pp) {
                    let f = m[i][c] * inv % pp;
                    for k in 0..n {
                        m[i][k] = (m[i][k] + (pp - f) * m[rank][k]) % pp;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_matches_naive_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2u32, 3, 5, 7, 31] {
            for (m, n) in [(5, 7), (20, 13), (40, 70), (70, 40), (130, 130)] {
                let rows = random_rows(&mut rng, p, m, n, 0.3);
                let e = Echelon::from_rows(p, n, rows.iter().map(|r| r.as_slice()));
                assert_eq!(e.rank(), naive_rank(p, &rows), "p={p} {m}x{n}");
                for r in &rows {
                    assert!(e.contains(r));
                }
                // reduced echelon shape
                for (i, r) in e.rows().enumerate() {
                    assert_eq!(r[e.pivots()[i]], 1);
                    for (k, &c) in e.pivots().iter().enumerate() {
                        if k != i {
                            assert_eq!(r[c], 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_is_orthogonal_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in [2u32, 3, 5] {
            for (m, n) in [(3, 9), (10, 10), (17, 80), (60, 65)] {
                let rows = random_rows(&mut rng, p, m, n, 0.4);
                let e = Echelon::from_rows(p, n, rows.iter().map(|r| r.as_slice()));
                let k = e.kernel();
                assert_eq!(e.rank() + k.rank(), n);
                for a in e.rows() {
                    for b in k.rows() {
                        assert_eq!(dot(p, &a, &b), 0);
                    }
                }
                assert_eq!(k.kernel(), e);
                let again = Echelon::from_rows(p, n, k.rows().collect::<Vec<_>>().iter().map(|r| r.as_slice()));
                assert_eq!(again, k);
            }
        }
    }

    #[test]
    fn intersection_and_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [2u32, 3] {
            let common = random_rows(&mut rng, p, 4, 30, 0.5);
            let mut a = common.clone();
            a.extend(random_rows(&mut rng, p, 6, 30, 0.5));
            let mut b = common.clone();
            b.extend(random_rows(&mut rng, p, 6, 30, 0.5));
            let ea = Echelon::from_rows(p, 30, a.iter().map(|r| r.as_slice()));
            let eb = Echelon::from_rows(p, 30, b.iter().map(|r| r.as_slice()));
            let i = ea.intersect(&eb);
            let s = ea.sum(&eb);
            assert_eq!(i.rank() + s.rank(), ea.rank() + eb.rank());
            for r in &common {
                assert!(i.contains(r));
            }
            assert!(i.is_subspace_of(&ea) && i.is_subspace_of(&eb));
        }
    }

    #[test]
    fn coordinates_rebuild_member() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = 5;
        let rows = random_rows(&mut rng, p, 8, 20, 0.5);
        let e = Echelon::from_rows(p, 20, rows.iter().map(|r| r.as_slice()));
        let v = &rows[3];
        let coords = e.coordinates(v);
        let mut w = vec![0u32; 20];
        for (c, r) in coords.iter().zip(e.rows()) {
            for (x, y) in w.iter_mut().zip(r) {
                *x = (*x + c * y) % p;
            }
        }
        assert_eq!(&w, v);
    }

    #[test]
    fn trivial_spaces() {
        let z = Echelon::new(3, 5);
        assert_eq!(z.kernel(), Echelon::full(3, 5));
        assert_eq!(Echelon::full(2, 70).kernel().rank(), 0);
        assert_eq!(inv_mod(2, 5), 3);
        assert_eq!(inv_mod(1, 2), 1);
    }
}
