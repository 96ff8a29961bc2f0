//! Explicit code words: standard words, pull-backs, embedded words,
//! truncated cones and field reduction.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::codespace::{shared_code, CodeKind, CodeVector};
use crate::error::{Error, Result};
use crate::field::{subfield_expand, FieldSpec};
use crate::geometry::{Chart, ProjectiveSpace, Subspace};
use crate::maps::pa_with_chart;

fn spaces_through(space: &ProjectiveSpace, iota: &Subspace, s: &Subspace, j: isize) -> Result<Vec<Subspace>> {
    Ok(space
        .subspaces_of(s, j)?
        .into_iter()
        .filter(|l| space.incident(iota, l).unwrap_or(false))
        .collect())
}

/// The standard word: the `j`-spaces through `iota` in `pi` minus those in
/// `rho`. Here `pi` and `rho` are distinct spaces of equal dimension meeting
/// in a hyperplane of both, and `iota` lies in that intersection.
pub fn standard_word(space: &Arc<ProjectiveSpace>, iota: &Subspace, pi: &Subspace, rho: &Subspace) -> Result<CodeVector> {
    let j = iota.dim() + 1;
    if pi == rho || pi.dim() != rho.dim() {
        return Err(Error::params("standard words need two distinct spaces of equal dimension"));
    }
    let meet = space.intersect(pi, rho)?;
    if meet.dim() != pi.dim() - 1 {
        return Err(Error::params("the two spaces must meet in a hyperplane of both"));
    }
    if !space.incident(iota, &meet)? {
        return Err(Error::params("iota must lie in the intersection"));
    }
    if pi.dim() < j {
        return Err(Error::params("the spaces are too small to hold a j-space"));
    }
    let geom = space.index(j)?;
    let mut v = CodeVector::zero(space, j)?;
    let p = space.p();
    for l in spaces_through(space, iota, pi, j)? {
        v.add_at(geom.position(&l).expect("indexed"), 1);
    }
    for l in spaces_through(space, iota, rho, j)? {
        v.add_at(geom.position(&l).expect("indexed"), p - 1);
    }
    Ok(v)
}

/// Every standard word of `C_{j,k}(n,q)^perp`, without repetition, sorted.
pub fn standard_words(space: &Arc<ProjectiveSpace>, j: isize, k: isize) -> Result<Vec<CodeVector>> {
    let n = space.n() as isize;
    let d = n - k + j;
    let spaces = space.index(d)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (a, pi) in spaces.iter().enumerate() {
        for rho in spaces.iter().skip(a + 1) {
            let meet = space.intersect(pi, rho)?;
            if meet.dim() != d - 1 {
                continue;
            }
            for iota in space.subspaces_of(&meet, j - 1)? {
                let w = standard_word(space, &iota, pi, rho)?;
                if seen.insert(w.entries().clone()) {
                    out.push(w);
                }
            }
        }
    }
    out.sort_by(|a, b| a.entries().iter().cmp(b.entries().iter()));
    Ok(out)
}

fn require_dual_member(c: &CodeVector, j: isize, k: isize) -> Result<()> {
    let dual = shared_code(c.space(), j, k, CodeKind::Dual)?;
    if !dual.contains(c)? {
        return Err(Error::NotInCode(dual.params().label()));
    }
    Ok(())
}

/// The pull-back `c^+`: a `j`-space through `iota` takes the value of `c` at
/// its intersection point with `pi`. The word `c` lives on the points of
/// `pi`, identified with `PG(n-j, q)` through `chart`, and must lie in
/// `C_{0,k-j}(n-j,q)^perp`.
pub fn pull_back(chart: &Chart, iota: &Subspace, k: isize, c: &CodeVector) -> Result<CodeVector> {
    let space = chart.ambient();
    let pi = chart.subspace();
    let j = iota.dim() + 1;
    if pi.dim() != space.n() as isize - j {
        return Err(Error::params(format!("pull-backs need an (n-j)-space, got dim {}", pi.dim())));
    }
    if !space.skew(iota, pi)? {
        return Err(Error::NotSkew);
    }
    if c.j() != 0 || c.n() as isize != pi.dim() || c.space().field() != space.field() {
        return Err(Error::MixedGeometry);
    }
    require_dual_member(c, 0, k - j)?;
    pull_back_unchecked(chart, iota, c)
}

fn pull_back_unchecked(chart: &Chart, iota: &Subspace, c: &CodeVector) -> Result<CodeVector> {
    let space = chart.ambient();
    let j = iota.dim() + 1;
    let geom = space.index(j)?;
    let mut out = CodeVector::zero(space, j)?;
    for (pt, &x) in c.support_spaces().into_iter().zip(c.entries().values()) {
        let lifted = chart.lift(pt)?;
        let lambda = space.span(iota, &lifted)?;
        out.set(geom.position(&lambda).expect("indexed"), x);
    }
    Ok(out)
}

/// A detected pull-back structure of a word.
#[derive(Debug, Clone)]
pub struct PullBack {
    pub iota: Subspace,
    pub chart: Chart,
    pub base: CodeVector,
}

/// If every `j`-space of the support contains a common `(j-1)`-space `iota`,
/// returns `iota`, the complement `pi` of `iota` used as the base geometry,
/// and `p_iota(c)`. When `iota` is not unique (a single support space, or
/// the zero word) the first candidate in canonical order is used.
pub fn detect_pull_back(c: &CodeVector) -> Result<Option<PullBack>> {
    let j = c.j();
    if j < 1 {
        return Err(Error::params("pull-back detection needs j >= 1"));
    }
    let space = c.space();
    let support = c.support_spaces();
    let common = match support.split_first() {
        None => space.whole(),
        Some((first, rest)) => {
            let mut acc = (*first).clone();
            for l in rest {
                acc = space.intersect(&acc, l)?;
                if acc.dim() < j - 1 {
                    return Ok(None);
                }
            }
            acc
        }
    };
    let iota = space.subspaces_of(&common, j - 1)?.into_iter().next().expect("common space has dim >= j-1");
    let pi = space.complement(&iota)?;
    let (base, chart) = pa_with_chart(&iota, &pi, c)?;
    debug_assert_eq!(pull_back_unchecked(&chart, &iota, &base)?, *c);
    Ok(Some(PullBack { iota, chart, base }))
}

/// Extends a word of `C_{j,k}(pi)^perp` by zero to the ambient space of the
/// chart, giving a word of `C_{j,k+m}(n+m,q)^perp`.
pub fn embed(chart: &Chart, k: isize, c: &CodeVector) -> Result<CodeVector> {
    let space = chart.ambient();
    let j = c.j();
    if c.n() as isize != chart.subspace().dim() || c.space().field() != space.field() {
        return Err(Error::MixedGeometry);
    }
    require_dual_member(c, j, k)?;
    let geom = space.index(j)?;
    let mut out = CodeVector::zero(space, j)?;
    for (l, &x) in c.support_spaces().into_iter().zip(c.entries().values()) {
        out.set(geom.position(&chart.lift(l)?).expect("indexed"), x);
    }
    Ok(out)
}

/// The truncated cone over a word of `C_{0,1}(2,q)^perp` living on the
/// plane of `chart`, with vertex `tau`, an `(n-3)`-space skew to the plane.
pub fn truncated_cone(chart: &Chart, tau: &Subspace, c: &CodeVector) -> Result<CodeVector> {
    let space = chart.ambient();
    let n = space.n() as isize;
    let pi = chart.subspace();
    if n < 3 || pi.dim() != 2 || tau.dim() != n - 3 {
        return Err(Error::params("truncated cones need a plane and an (n-3)-space with n >= 3"));
    }
    if !space.skew(pi, tau)? {
        return Err(Error::NotSkew);
    }
    if c.j() != 0 || c.n() != 2 || c.space().field() != space.field() {
        return Err(Error::MixedGeometry);
    }
    require_dual_member(c, 0, 1)?;
    let geom = space.index(0)?;
    let mut out = CodeVector::zero(space, 0)?;
    for (pt, &x) in c.support_spaces().into_iter().zip(c.entries().values()) {
        let base = chart.lift(pt)?;
        let cone = space.span(&base, tau)?;
        for p in space.points_of(&cone)? {
            if !space.incident(&p, tau)? {
                out.set(geom.position(&p).expect("indexed"), x);
            }
        }
    }
    Ok(out)
}

/// Field reduction from `PG(n, q^e)` into `PG((n+1)e - 1, q)`.
#[derive(Debug, Clone)]
pub struct FieldReduction {
    e: usize,
    big: Arc<ProjectiveSpace>,
    small: Arc<ProjectiveSpace>,
}

impl FieldReduction {
    pub fn new(n: usize, q: u32, e: u32) -> Result<Self> {
        if e < 2 {
            return Err(Error::params("field reduction needs e >= 2"));
        }
        let small = ProjectiveSpace::shared((n + 1) * e as usize - 1, q)?;
        let big_field = FieldSpec::extend(small.field(), e)?;
        let candidate = q.checked_pow(e).map(|qe| ProjectiveSpace::shared(n, qe));
        let big = match candidate {
            Some(Ok(s)) if **s.field() == *big_field => s,
            _ => ProjectiveSpace::new(n, big_field),
        };
        Ok(FieldReduction { e: e as usize, big, small })
    }

    pub fn big(&self) -> &Arc<ProjectiveSpace> {
        &self.big
    }

    pub fn small(&self) -> &Arc<ProjectiveSpace> {
        &self.small
    }

    pub fn e(&self) -> usize {
        self.e
    }

    fn expand(&self, v: &[u32]) -> Result<Vec<u32>> {
        let big = self.big.field();
        let base = self.small.field();
        let mut out = Vec::with_capacity(v.len() * self.e);
        for &x in v {
            out.extend(subfield_expand(big.element(x)?, base)?.into_iter().map(|y| y.value()));
        }
        Ok(out)
    }

    /// `B(s)`: the `F_q`-span of the coordinate expansions of `w^a * x` for
    /// every basis vector `x` of `s` and `0 <= a < e`.
    pub fn blowup(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient() != self.big.n() {
            return Err(Error::MixedAmbient);
        }
        let big = self.big.field();
        let omega = big.pack(&[0, 1]);
        let mut rows = Vec::new();
        for r in s.rows() {
            let mut cur = r.to_vec();
            for _ in 0..self.e {
                rows.push(self.expand(&cur)?);
                cur = cur.iter().map(|&x| big.mul(x, omega)).collect();
            }
        }
        self.small.canonicalize(&rows)
    }

    /// The point of `PG(n, q^e)` whose blow-up contains the point `x`.
    pub fn spread_element(&self, x: &Subspace) -> Result<Subspace> {
        let big = self.big.field();
        let v: Vec<u32> = x.row(0).chunks(self.e).map(|c| big.pack(c)).collect();
        self.big.point(&v)
    }

    /// `c'(P) = c . B(P)` for a word `c` of `C_{0,2e-1}(N,q)^perp`; the result
    /// lies in `C_{0,1}(n,q^e)^perp`.
    pub fn reduce_word(&self, c: &CodeVector) -> Result<CodeVector> {
        if c.j() != 0 || c.n() != self.small.n() || c.space().field() != self.small.field() {
            return Err(Error::MixedGeometry);
        }
        require_dual_member(c, 0, 2 * self.e as isize - 1)?;
        let geom = self.big.index(0)?;
        let mut out = CodeVector::zero(&self.big, 0)?;
        for (pt, &x) in c.support_spaces().into_iter().zip(c.entries().values()) {
            let p = self.spread_element(pt)?;
            out.add_at(geom.position(&p).expect("indexed"), x);
        }
        Ok(out)
    }
}
