use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::ToPrimitive;

use super::index::{for_each_rref, GeometryIndex, DEFAULT_SUBSPACE_CAP};
use super::gaussian_coeff;
use crate::error::{Error, Result};
use crate::field::{prime_power, FieldSpec};

static SUBSPACE_CAP: AtomicU64 = AtomicU64::new(DEFAULT_SUBSPACE_CAP as u64);

type Registry = Mutex<HashMap<(usize, u32, u64), Arc<ProjectiveSpace>>>;

fn registry() -> &'static Registry {
    static R: OnceLock<Registry> = OnceLock::new();
    R.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Sets the subspace cap used by [`ProjectiveSpace::shared`].
pub fn set_subspace_cap(cap: u64) {
    SUBSPACE_CAP.store(cap, Ordering::Relaxed);
}

pub fn subspace_cap() -> u64 {
    SUBSPACE_CAP.load(Ordering::Relaxed)
}

/// A projective subspace, stored as the reduced row-echelon basis of its
/// underlying vector space. `rank = dim + 1`; the empty space has rank 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    rank: usize,
    data: Vec<u32>,
}

impl Subspace {
    pub(crate) fn from_rref(n: usize, rank: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rank * (n + 1));
        Subspace { n, rank, data }
    }

    pub fn empty(n: usize) -> Self {
        Subspace { n, rank: 0, data: Vec::new() }
    }

    /// Ambient projective dimension.
    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Projective dimension, `-1` for the empty space.
    pub fn dim(&self) -> isize {
        self.rank as isize - 1
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn row(&self, i: usize) -> &[u32] {
        let w = self.n + 1;
        &self.data[i * w..(i + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.rank).map(move |i| self.row(i))
    }

    /// Flattened RREF basis; the canonical key of the subspace.
    pub fn key(&self) -> &[u32] {
        &self.data
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows()
            .map(|r| r.iter().position(|&x| x != 0).expect("RREF rows are nonzero"))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.rank == 0
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.rows().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(","))?;
        }
        write!(f, ">")
    }
}

/// Row-reduces `rows` over `field` in place and returns the pivot columns.
/// Zero rows are dropped.
pub(crate) fn rref(field: &FieldSpec, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        if inv != 1 {
            for x in rows[r][c..].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if y != 0 {
                    *x = field.sub(*x, field.mul(f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// The projective space `PG(n, q)` over a fixed field, with cached indexes
/// of its subspaces.
pub struct ProjectiveSpace {
    n: usize,
    field: Arc<FieldSpec>,
    subspace_cap: u128,
    indices: Mutex<HashMap<usize, Arc<GeometryIndex>>>,
}

impl fmt::Debug for ProjectiveSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PG({}, {})", self.n, self.field.q())
    }
}

impl ProjectiveSpace {
    pub fn new(n: usize, field: Arc<FieldSpec>) -> Arc<Self> {
        Self::with_cap(n, field, DEFAULT_SUBSPACE_CAP)
    }

    pub fn with_cap(n: usize, field: Arc<FieldSpec>, subspace_cap: u128) -> Arc<Self> {
        Arc::new(ProjectiveSpace { n, field, subspace_cap, indices: Mutex::new(HashMap::new()) })
    }

    /// The process-wide instance of `PG(n, q)`, so that subspace indexes are
    /// built once and shared.
    pub fn shared(n: usize, q: u32) -> Result<Arc<Self>> {
        let cap = subspace_cap();
        let mut reg = registry().lock().unwrap();
        if let Some(s) = reg.get(&(n, q, cap)) {
            return Ok(Arc::clone(s));
        }
        let (p, h) = prime_power(q as u64).ok_or_else(|| Error::params(format!("{q} is not a prime power")))?;
        let s = Self::with_cap(n, FieldSpec::new(p as u32, h)?, cap as u128);
        reg.insert((n, q, cap), Arc::clone(&s));
        Ok(s)
    }

    /// `PG(n, p^h)` built from scratch.
    pub fn over(n: usize, p: u32, h: u32) -> Result<Arc<Self>> {
        Ok(Self::new(n, FieldSpec::new(p, h)?))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn subspace_cap(&self) -> u128 {
        self.subspace_cap
    }

    /// A space of dimension `m` over the same field and with the same cap;
    /// reuses the shared instance when the field is the standard one.
    pub fn sibling(&self, m: usize) -> Arc<Self> {
        if let Ok(s) = Self::shared(m, self.q()) {
            if s.field == self.field && s.subspace_cap == self.subspace_cap {
                return s;
            }
        }
        Self::with_cap(m, Arc::clone(&self.field), self.subspace_cap)
    }

    /// Number of `j`-spaces.
    pub fn count(&self, j: isize) -> u128 {
        gaussian_coeff(self.n as i64 + 1, j as i64 + 1, self.q() as u64)
            .to_u128()
            .unwrap_or(u128::MAX)
    }

    fn check(&self, s: &Subspace) -> Result<()> {
        if s.n != self.n {
            return Err(Error::MixedAmbient);
        }
        Ok(())
    }

    /// Canonical form of the row space of `rows`.
    pub fn canonicalize<R: AsRef<[u32]>>(&self, rows: &[R]) -> Result<Subspace> {
        let w = self.n + 1;
        let mut m: Vec<Vec<u32>> = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_ref();
            if r.len() != w {
                return Err(Error::MixedAmbient);
            }
            if r.iter().any(|&x| x >= self.q()) {
                return Err(Error::params("coordinate outside the field"));
            }
            m.push(r.to_vec());
        }
        Ok(self.canonical_unchecked(m))
    }

    pub(crate) fn canonical_unchecked(&self, mut m: Vec<Vec<u32>>) -> Subspace {
        rref(&self.field, &mut m);
        let rank = m.len();
        Subspace { n: self.n, rank, data: m.concat() }
    }

    pub fn point(&self, v: &[u32]) -> Result<Subspace> {
        let p = self.canonicalize(&[v])?;
        if p.rank != 1 {
            return Err(Error::params("zero vector is not a point"));
        }
        Ok(p)
    }

    pub fn whole(&self) -> Subspace {
        let w = self.n + 1;
        let mut data = vec![0u32; w * w];
        for i in 0..w {
            data[i * w + i] = 1;
        }
        Subspace { n: self.n, rank: w, data }
    }

    pub fn empty(&self) -> Subspace {
        Subspace::empty(self.n)
    }

    /// Whether the vector `v` lies in the row space of `s`.
    pub fn contains_vector(&self, s: &Subspace, v: &[u32]) -> bool {
        let f = &self.field;
        let mut v = v.to_vec();
        for (r, c) in s.rows().zip(s.pivots()) {
            let t = v[c];
            if t != 0 {
                for (x, &y) in v.iter_mut().zip(r) {
                    if y != 0 {
                        *x = f.sub(*x, f.mul(t, y));
                    }
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// `lambda` is contained in `kappa`.
    pub fn incident(&self, lambda: &Subspace, kappa: &Subspace) -> Result<bool> {
        self.check(lambda)?;
        self.check(kappa)?;
        if lambda.rank > kappa.rank {
            return Ok(false);
        }
        Ok(lambda.rows().all(|r| self.contains_vector(kappa, r)))
    }

    pub fn span(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        self.check(a)?;
        self.check(b)?;
        let m: Vec<Vec<u32>> = a.rows().chain(b.rows()).map(|r| r.to_vec()).collect();
        Ok(self.canonical_unchecked(m))
    }

    pub fn span_all<'a>(&self, parts: impl IntoIterator<Item = &'a Subspace>) -> Result<Subspace> {
        let mut m = Vec::new();
        for s in parts {
            self.check(s)?;
            m.extend(s.rows().map(|r| r.to_vec()));
        }
        Ok(self.canonical_unchecked(m))
    }

    /// The orthogonal complement of the underlying vector space under the
    /// standard bilinear form (the dual subspace).
    pub fn annihilator(&self, s: &Subspace) -> Result<Subspace> {
        self.check(s)?;
        let w = self.n + 1;
        let pivots = s.pivots();
        let f = &self.field;
        let mut rows = Vec::with_capacity(w - s.rank);
        for free in (0..w).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u32; w];
            v[free] = 1;
            for (r, &pc) in s.rows().zip(&pivots) {
                v[pc] = f.neg(r[free]);
            }
            rows.push(v);
        }
        Ok(self.canonical_unchecked(rows))
    }

    pub fn intersect(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        let da = self.annihilator(a)?;
        let db = self.annihilator(b)?;
        let j = self.span(&da, &db)?;
        self.annihilator(&j)
    }

    pub fn skew(&self, a: &Subspace, b: &Subspace) -> Result<bool> {
        Ok(self.intersect(a, b)?.is_empty())
    }

    /// The hyperplane `{x : a . x = 0}`.
    pub fn hyperplane(&self, a: &[u32]) -> Result<Subspace> {
        let pt = self.point(a)?;
        self.annihilator(&pt)
    }

    /// The coordinate subspace spanned by the unit vectors outside the pivot
    /// columns of `s`; always skew to `s` with complementary dimension.
    pub fn complement(&self, s: &Subspace) -> Result<Subspace> {
        self.check(s)?;
        let w = self.n + 1;
        let pivots = s.pivots();
        let rows: Vec<Vec<u32>> = (0..w)
            .filter(|c| !pivots.contains(c))
            .map(|c| {
                let mut v = vec![0u32; w];
                v[c] = 1;
                v
            })
            .collect();
        Ok(self.canonical_unchecked(rows))
    }

    /// All `j`-spaces of the space, sorted canonically and indexed.
    pub fn index(&self, j: isize) -> Result<Arc<GeometryIndex>> {
        if j < -1 || j > self.n as isize {
            return Err(Error::params(format!("no {j}-spaces in PG({}, q)", self.n)));
        }
        let key = (j + 1) as usize;
        if let Some(ix) = self.indices.lock().unwrap().get(&key) {
            return Ok(Arc::clone(ix));
        }
        let ix = Arc::new(GeometryIndex::build(self, j)?);
        self.indices.lock().unwrap().insert(key, Arc::clone(&ix));
        Ok(ix)
    }

    /// All `j`-subspaces of `s`, in canonical order.
    pub fn subspaces_of(&self, s: &Subspace, j: isize) -> Result<Vec<Subspace>> {
        self.check(s)?;
        if j < -1 || j > s.dim() {
            return Ok(Vec::new());
        }
        let rank = (j + 1) as usize;
        let f = &self.field;
        let mut out = Vec::new();
        for_each_rref(f.q(), rank, s.rank, |coords| {
            let rows: Vec<Vec<u32>> = (0..rank)
                .map(|i| lift_vector(f, &coords[i * s.rank..(i + 1) * s.rank], s))
                .collect();
            out.push(self.canonical_unchecked(rows));
        });
        out.sort();
        Ok(out)
    }

    /// Points of `s`.
    pub fn points_of(&self, s: &Subspace) -> Result<Vec<Subspace>> {
        self.subspaces_of(s, 0)
    }

    /// A coordinate chart identifying `pi` with `target = PG(dim pi, q)`.
    pub fn chart(self: &Arc<Self>, pi: &Subspace, target: &Arc<ProjectiveSpace>) -> Result<Chart> {
        self.check(pi)?;
        if pi.is_empty() || target.n as isize != pi.dim() || target.field != self.field {
            return Err(Error::params("chart target must be PG(dim pi, q) over the same field"));
        }
        Ok(Chart {
            ambient: Arc::clone(self),
            target: Arc::clone(target),
            pivots: pi.pivots(),
            pi: pi.clone(),
        })
    }
}

/// `y . B` for the basis rows `B` of `s`.
fn lift_vector(f: &FieldSpec, y: &[u32], s: &Subspace) -> Vec<u32> {
    let mut v = vec![0u32; s.n + 1];
    for (&c, r) in y.iter().zip(s.rows()) {
        if c == 0 {
            continue;
        }
        for (x, &b) in v.iter_mut().zip(r) {
            if b != 0 {
                *x = f.add(*x, f.mul(c, b));
            }
        }
    }
    v
}

/// A fixed linear identification of a subspace `pi` of the ambient space
/// with a standalone `PG(dim pi, q)`. A vector of `pi` maps to its entries in
/// the pivot columns of `pi`'s canonical basis; the inverse is `y -> y . B`.
#[derive(Clone)]
pub struct Chart {
    ambient: Arc<ProjectiveSpace>,
    target: Arc<ProjectiveSpace>,
    pi: Subspace,
    pivots: Vec<usize>,
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({:?} in {:?} -> {:?})", self.pi, self.ambient, self.target)
    }
}

impl Chart {
    pub fn subspace(&self) -> &Subspace {
        &self.pi
    }

    pub fn ambient(&self) -> &Arc<ProjectiveSpace> {
        &self.ambient
    }

    pub fn target(&self) -> &Arc<ProjectiveSpace> {
        &self.target
    }

    /// Pivot columns of `pi` retained by the chart.
    pub fn columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of an ambient subspace contained in `pi`.
    pub fn to_chart(&self, s: &Subspace) -> Result<Subspace> {
        if !self.ambient.incident(s, &self.pi)? {
            return Err(Error::params("subspace is not contained in the chart domain"));
        }
        let rows: Vec<Vec<u32>> = s.rows().map(|r| self.pivots.iter().map(|&c| r[c]).collect()).collect();
        Ok(self.target.canonical_unchecked(rows))
    }

    /// The ambient subspace with the given chart coordinates.
    pub fn lift(&self, s: &Subspace) -> Result<Subspace> {
        if s.n != self.target.n {
            return Err(Error::MixedAmbient);
        }
        let f = &self.ambient.field;
        let rows: Vec<Vec<u32>> = s.rows().map(|y| lift_vector(f, y, &self.pi)).collect();
        Ok(self.ambient.canonical_unchecked(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pg(n: usize, p: u32, h: u32) -> Arc<ProjectiveSpace> {
        ProjectiveSpace::over(n, p, h).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let s = pg(2, 2, 1);
        let e = s.canonicalize::<Vec<u32>>(&[]).unwrap();
        assert_eq!(e.dim(), -1);
        let a = s.canonicalize(&[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(a.key(), &[1, 0, 0, 0, 1, 0]);
        let b = s.canonicalize(&[vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        assert_eq!(b.key(), &[1, 0, 1, 0, 1, 1]);
        let again = s.canonicalize(&b.rows().collect::<Vec<_>>()).unwrap();
        assert_eq!(again, b);
        let z = s.canonicalize(&[vec![0, 0, 0]]).unwrap();
        assert!(z.is_empty());
    }

    #[test]
    fn incidence_basics() {
        let s = pg(2, 2, 1);
        let p1 = s.point(&[1, 0, 0]).unwrap();
        let p2 = s.point(&[0, 1, 0]).unwrap();
        let l = s.span(&p1, &p2).unwrap();
        assert!(s.incident(&l, &l).unwrap());
        assert!(s.incident(&p1, &l).unwrap());
        assert!(!s.incident(&p1, &p2).unwrap());
        assert_eq!(s.span(&p1, &p1).unwrap(), p1);
        assert_eq!(l.dim(), 1);
        let other = pg(3, 2, 1).point(&[1, 0, 0, 0]).unwrap();
        assert_eq!(s.incident(&other, &l).unwrap_err(), Error::MixedAmbient);
    }

    #[test]
    fn planes_of_pg32_meet_in_lines() {
        let s = pg(3, 2, 1);
        let planes = s.index(2).unwrap();
        for a in planes.iter() {
            for b in planes.iter() {
                let m = s.intersect(a, b).unwrap();
                if a == b {
                    assert_eq!(m, *a);
                } else {
                    assert_eq!(m.dim(), 1);
                }
            }
        }
    }

    #[test]
    fn grassmann_identity_lines_of_pg32() {
        let s = pg(3, 2, 1);
        let lines = s.index(1).unwrap();
        for a in lines.iter() {
            for b in lines.iter() {
                let sp = s.span(a, b).unwrap();
                let it = s.intersect(a, b).unwrap();
                assert_eq!(sp.dim() + it.dim(), a.dim() + b.dim());
                assert!(s.incident(&it, a).unwrap() && s.incident(&it, b).unwrap());
                assert!(s.incident(a, &sp).unwrap() && s.incident(b, &sp).unwrap());
            }
        }
    }

    #[test]
    fn annihilator_is_an_involution() {
        let s = pg(3, 3, 1);
        for j in -1..=3 {
            for x in s.index(j).unwrap().iter().take(50) {
                let d = s.annihilator(x).unwrap();
                assert_eq!(d.dim(), 3 - 1 - x.dim());
                assert_eq!(&s.annihilator(&d).unwrap(), x);
            }
        }
    }

    #[test]
    fn subspaces_of_counts() {
        let s = pg(3, 2, 1);
        let plane = s.index(2).unwrap().get(5).clone();
        assert_eq!(s.subspaces_of(&plane, 1).unwrap().len(), 7);
        assert_eq!(s.subspaces_of(&plane, 0).unwrap().len(), 7);
        assert_eq!(s.subspaces_of(&plane, 2).unwrap(), vec![plane.clone()]);
        assert!(s.subspaces_of(&plane, 3).unwrap().is_empty());
        for l in s.subspaces_of(&plane, 1).unwrap() {
            assert!(s.incident(&l, &plane).unwrap());
        }
    }

    #[test]
    fn complement_is_skew_and_spanning() {
        let s = pg(4, 3, 1);
        for j in 0..4 {
            for x in s.index(j).unwrap().iter().step_by(17) {
                let c = s.complement(x).unwrap();
                assert!(s.skew(x, &c).unwrap());
                assert_eq!(s.span(x, &c).unwrap(), s.whole());
            }
        }
    }

    #[test]
    fn chart_round_trip() {
        let s = pg(3, 3, 1);
        let target = s.sibling(2);
        for pi in s.index(2).unwrap().iter().step_by(3) {
            let chart = s.chart(pi, &target).unwrap();
            for l in s.subspaces_of(pi, 1).unwrap() {
                let c = chart.to_chart(&l).unwrap();
                assert_eq!(c.dim(), 1);
                assert_eq!(chart.lift(&c).unwrap(), l);
            }
            let outside = s.index(0).unwrap().iter().find(|p| !s.incident(p, pi).unwrap()).unwrap().clone();
            assert!(chart.to_chart(&outside).is_err());
        }
    }
}
