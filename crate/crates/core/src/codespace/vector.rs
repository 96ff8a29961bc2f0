use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{GeometryIndex, ProjectiveSpace, Subspace};

/// A function from the `j`-spaces of `PG(n, q)` to `F_p`, stored sparsely.
#[derive(Clone)]
pub struct CodeVector {
    space: Arc<ProjectiveSpace>,
    geom: Arc<GeometryIndex>,
    entries: BTreeMap<usize, u32>,
}

impl fmt::Debug for CodeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CodeVector(G_{}({},{}); {})", self.j(), self.n(), self.q(), self.to_line())
    }
}

impl PartialEq for CodeVector {
    fn eq(&self, other: &Self) -> bool {
        self.same_geometry(other) && self.entries == other.entries
    }
}

impl Eq for CodeVector {}

impl CodeVector {
    pub fn zero(space: &Arc<ProjectiveSpace>, j: isize) -> Result<Self> {
        Ok(CodeVector { space: Arc::clone(space), geom: space.index(j)?, entries: BTreeMap::new() })
    }

    /// The all-one vector.
    pub fn ones(space: &Arc<ProjectiveSpace>, j: isize) -> Result<Self> {
        let mut v = Self::zero(space, j)?;
        v.entries = (0..v.len()).map(|i| (i, 1)).collect();
        Ok(v)
    }

    pub fn from_dense(space: &Arc<ProjectiveSpace>, j: isize, values: &[u32]) -> Result<Self> {
        let mut v = Self::zero(space, j)?;
        if values.len() != v.len() {
            return Err(Error::MixedGeometry);
        }
        let p = v.p();
        v.entries = values.iter().enumerate().filter(|(_, &x)| x % p != 0).map(|(i, &x)| (i, x % p)).collect();
        Ok(v)
    }

    pub fn from_entries(
        space: &Arc<ProjectiveSpace>,
        j: isize,
        entries: impl IntoIterator<Item = (usize, u32)>,
    ) -> Result<Self> {
        let mut v = Self::zero(space, j)?;
        let p = v.p();
        for (i, x) in entries {
            if i >= v.len() {
                return Err(Error::params(format!("index {i} out of range for {} coordinates", v.len())));
            }
            v.add_at(i, x % p);
        }
        Ok(v)
    }

    /// The characteristic vector of a single `j`-space.
    pub fn unit(space: &Arc<ProjectiveSpace>, lambda: &Subspace) -> Result<Self> {
        let j = lambda.dim();
        let mut v = Self::zero(space, j)?;
        let i = v.geom.position(lambda).ok_or(Error::MixedAmbient)?;
        v.entries.insert(i, 1);
        Ok(v)
    }

    pub(crate) fn add_at(&mut self, i: usize, x: u32) {
        if x == 0 {
            return;
        }
        let p = self.p();
        let e = self.entries.entry(i).or_insert(0);
        *e = (*e + x) % p;
        if *e == 0 {
            self.entries.remove(&i);
        }
    }

    pub fn set(&mut self, i: usize, x: u32) {
        let x = x % self.p();
        if x == 0 {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, x);
        }
    }

    pub fn space(&self) -> &Arc<ProjectiveSpace> {
        &self.space
    }

    pub fn geometry(&self) -> &Arc<GeometryIndex> {
        &self.geom
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn q(&self) -> u32 {
        self.space.q()
    }

    pub fn p(&self) -> u32 {
        self.space.p()
    }

    pub fn j(&self) -> isize {
        self.geom.j()
    }

    /// Number of coordinates, `|G_j|`.
    pub fn len(&self) -> usize {
        self.geom.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries.get(&i).copied().unwrap_or(0)
    }

    pub fn value_at(&self, lambda: &Subspace) -> u32 {
        self.geom.position(lambda).map_or(0, |i| self.get(i))
    }

    pub fn entries(&self) -> &BTreeMap<usize, u32> {
        &self.entries
    }

    pub fn to_dense(&self) -> Vec<u32> {
        let mut v = vec![0u32; self.len()];
        for (&i, &x) in &self.entries {
            v[i] = x;
        }
        v
    }

    pub fn weight(&self) -> usize {
        self.entries.len()
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries.keys().copied().collect()
    }

    pub fn support_spaces(&self) -> Vec<&Subspace> {
        self.entries.keys().map(|&i| self.geom.get(i)).collect()
    }

    /// All `i`-spaces contained in some element of the support, sorted.
    pub fn support_i(&self, i: isize) -> Result<Vec<Subspace>> {
        if i < 0 || i >= self.j() {
            return Err(Error::params(format!("support_i needs 0 <= i < j = {}", self.j())));
        }
        let mut out = BTreeSet::new();
        for lambda in self.support_spaces() {
            out.extend(self.space.subspaces_of(lambda, i)?);
        }
        Ok(out.into_iter().collect())
    }

    pub fn same_geometry(&self, other: &CodeVector) -> bool {
        self.n() == other.n() && self.j() == other.j() && self.space.field() == other.space.field()
    }

    fn check(&self, other: &CodeVector) -> Result<()> {
        if self.same_geometry(other) {
            Ok(())
        } else {
            Err(Error::MixedGeometry)
        }
    }

    pub fn dot(&self, other: &CodeVector) -> Result<u32> {
        self.check(other)?;
        let p = self.p() as u64;
        let (small, big) = if self.weight() <= other.weight() { (self, other) } else { (other, self) };
        let s: u64 = small.entries.iter().map(|(i, &x)| x as u64 * big.get(*i) as u64 % p).sum();
        Ok((s % p) as u32)
    }

    /// `self + a * other`.
    pub fn add_scaled(&self, a: u32, other: &CodeVector) -> Result<CodeVector> {
        self.check(other)?;
        let p = self.p();
        let a = a % p;
        let mut out = self.clone();
        if a != 0 {
            for (&i, &x) in &other.entries {
                out.add_at(i, (a as u64 * x as u64 % p as u64) as u32);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &CodeVector) -> Result<CodeVector> {
        self.add_scaled(1, other)
    }

    pub fn sub(&self, other: &CodeVector) -> Result<CodeVector> {
        self.add_scaled(self.p() - 1, other)
    }

    pub fn scale(&self, a: u32) -> CodeVector {
        let p = self.p() as u64;
        let a = a as u64 % p;
        let mut out = self.clone();
        if a == 0 {
            out.entries.clear();
        } else {
            for x in out.entries.values_mut() {
                *x = (*x as u64 * a % p) as u32;
            }
        }
        out
    }

    /// Space-separated `index:value` pairs in increasing index order.
    pub fn to_line(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(|(i, x)| format!("{i}:{x}")).collect();
        parts.join(" ")
    }

    pub fn from_line(space: &Arc<ProjectiveSpace>, j: isize, line: &str) -> Result<Self> {
        let mut v = Self::zero(space, j)?;
        let p = v.p();
        let mut last = None;
        for tok in line.split_whitespace() {
            let (i, x) = tok.split_once(':').ok_or_else(|| Error::parse(0, format!("expected index:value, got {tok}")))?;
            let i: usize = i.parse().map_err(|_| Error::parse(0, format!("bad index in {tok}")))?;
            let x: u32 = x.parse().map_err(|_| Error::parse(0, format!("bad value in {tok}")))?;
            if i >= v.len() || x == 0 || x >= p {
                return Err(Error::parse(0, format!("entry {tok} out of range")));
            }
            if last.is_some_and(|l| l >= i) {
                return Err(Error::parse(0, "indices must be strictly increasing"));
            }
            last = Some(i);
            v.entries.insert(i, x);
        }
        Ok(v)
    }
}

/// The characteristic vector of the `j`-spaces contained in `kappa`.
pub fn kspace_word(space: &Arc<ProjectiveSpace>, kappa: &Subspace, j: isize) -> Result<CodeVector> {
    if kappa.dim() < j {
        return Err(Error::params(format!("a {}-space contains no {j}-spaces", kappa.dim())));
    }
    let geom = space.index(j)?;
    let mut entries = BTreeMap::new();
    for l in space.subspaces_of(kappa, j)? {
        entries.insert(geom.position(&l).ok_or(Error::MixedAmbient)?, 1);
    }
    Ok(CodeVector { space: Arc::clone(space), geom, entries })
}

/// Sparse positions of the `j`-spaces inside `kappa`, sorted.
pub(crate) fn kspace_positions(space: &ProjectiveSpace, geom: &GeometryIndex, kappa: &Subspace, j: isize) -> Vec<usize> {
    let mut v: Vec<usize> = space
        .subspaces_of(kappa, j)
        .expect("same ambient")
        .iter()
        .map(|l| geom.position(l).expect("indexed"))
        .collect();
    v.sort_unstable();
    v
}
