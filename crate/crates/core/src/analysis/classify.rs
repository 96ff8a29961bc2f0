//! Decomposing small-weight codewords into multiples of at most two
//! `k`-spaces, and secant statistics of point sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::codespace::{kspace_word, Code, CodeVector};
use crate::error::{Error, Result};
use crate::geometry::{ProjectiveSpace, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Zero,
    OneSpace,
    TwoSpaces,
    Other,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassKind::Zero => "zero",
            ClassKind::OneSpace => "one_space",
            ClassKind::TwoSpaces => "two_spaces",
            ClassKind::Other => "other",
        })
    }
}

/// A word written as `sum coefficient * kappa` over at most two `k`-spaces.
pub type Decomposition = Vec<(Subspace, u32)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub kind: ClassKind,
    /// The first decomposition in canonical order; empty for `Zero` and `Other`.
    pub spaces: Decomposition,
    /// Every decomposition of the minimal kind found.
    pub alternatives: Vec<Decomposition>,
    pub exhaustive_search: bool,
}

impl Classification {
    /// The combination the decomposition describes.
    pub fn reconstruct(&self, space: &std::sync::Arc<ProjectiveSpace>, j: isize) -> Result<CodeVector> {
        let mut v = CodeVector::zero(space, j)?;
        for (kappa, a) in &self.spaces {
            v = v.add_scaled(*a, &kspace_word(space, kappa, j)?)?;
        }
        Ok(v)
    }
}

/// If `v` is `a * kappa` for a `k`-space `kappa`, returns it.
fn single_space(v: &CodeVector, k: isize) -> Result<Option<(Subspace, u32)>> {
    let space = v.space();
    let support = v.support_spaces();
    let Some(first) = support.first() else { return Ok(None) };
    let span = space.span_all(support.iter().copied())?;
    if span.dim() != k {
        return Ok(None);
    }
    let a = v.value_at(first);
    let w = kspace_word(space, &span, v.j())?.scale(a);
    Ok((w == *v).then_some((span, a)))
}

/// Classifies `c`, a member of a code whose generators are the `k`-spaces
/// of `code`. One-space decompositions are tried before pairs.
pub fn classify_small_weight(c: &CodeVector, code: &Code) -> Result<Classification> {
    if !code.contains(c)? {
        return Err(Error::NotInCode(code.params().label()));
    }
    classify_vector(c, code.params().k)
}

/// [`classify_small_weight`] without the membership check.
pub fn classify_vector(c: &CodeVector, k: isize) -> Result<Classification> {
    let done = |kind, alternatives: Vec<Decomposition>| Classification {
        kind,
        spaces: alternatives.first().cloned().unwrap_or_default(),
        alternatives,
        exhaustive_search: true,
    };
    if c.is_zero() {
        return Ok(done(ClassKind::Zero, Vec::new()));
    }
    if let Some(one) = single_space(c, k)? {
        return Ok(done(ClassKind::OneSpace, vec![vec![one]]));
    }
    let space = c.space();
    let p = c.p();
    let j = c.j();
    let first = c.support_spaces()[0].clone();
    let gk = space.index(k)?;
    let mut found: BTreeSet<Vec<(usize, u32)>> = BTreeSet::new();
    // one of the two spaces holds the first support element
    for (i1, kappa) in gk.iter().enumerate() {
        if !space.incident(&first, kappa)? {
            continue;
        }
        let word = kspace_word(space, kappa, j)?;
        for a in 1..p {
            let rest = c.add_scaled(p - a, &word)?;
            if let Some((kappa2, b)) = single_space(&rest, k)? {
                let i2 = gk.position(&kappa2).expect("indexed");
                if i2 != i1 {
                    let mut pair = vec![(i1, a), (i2, b)];
                    pair.sort_unstable();
                    found.insert(pair);
                }
            }
        }
    }
    if found.is_empty() {
        return Ok(done(ClassKind::Other, Vec::new()));
    }
    let alts = found.into_iter().map(|d| d.into_iter().map(|(i, a)| (gk.get(i).clone(), a)).collect()).collect();
    Ok(done(ClassKind::TwoSpaces, alts))
}

/// Number of lines of `PG(n,q)` meeting a point set in each possible number
/// of points; sizes with no lines are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecantProfile {
    pub histogram: BTreeMap<usize, u128>,
}

impl SecantProfile {
    pub fn total(&self) -> u128 {
        self.histogram.values().sum()
    }

    /// Every line meets the set in at most 2 or at least `q` points.
    pub fn short_or_long(&self, q: u32) -> bool {
        self.histogram.keys().all(|&s| s <= 2 || s >= q as usize)
    }

    /// Every line meets the set in `0`, `1`, `q` or `q+1` points.
    pub fn is_01qq1(&self, q: u32) -> bool {
        let q = q as usize;
        self.histogram.keys().all(|&s| s <= 1 || s == q || s == q + 1)
    }
}

/// Histogram of line intersection sizes with `points`.
pub fn secant_profile(space: &ProjectiveSpace, points: &[Subspace]) -> Result<SecantProfile> {
    let set: BTreeSet<&Subspace> = points.iter().collect();
    let mut histogram = BTreeMap::new();
    for line in space.index(1)?.iter() {
        let mut s = 0;
        for pt in space.points_of(line)? {
            s += set.contains(&pt) as usize;
        }
        *histogram.entry(s).or_insert(0u128) += 1;
    }
    Ok(SecantProfile { histogram })
}

/// The lines meeting `points` in exactly `size` points.
pub fn secants_of_size(space: &ProjectiveSpace, points: &[Subspace], size: usize) -> Result<Vec<Subspace>> {
    let set: BTreeSet<&Subspace> = points.iter().collect();
    let mut out = Vec::new();
    for line in space.index(1)?.iter() {
        let s = space.points_of(line)?.iter().filter(|p| set.contains(p)).count();
        if s == size {
            out.push(line.clone());
        }
    }
    Ok(out)
}

/// A hyperplane containing `points`, or failing that one containing their
/// complement; the first in canonical order.
pub fn hyperplane_containment(space: &ProjectiveSpace, points: &[Subspace]) -> Result<Option<Subspace>> {
    let hyperplanes = space.index(space.n() as isize - 1)?;
    for h in hyperplanes.iter() {
        if points.iter().all(|p| space.incident(p, h).unwrap_or(false)) {
            return Ok(Some(h.clone()));
        }
    }
    let set: BTreeSet<&Subspace> = points.iter().collect();
    let all = space.index(0)?;
    for h in hyperplanes.iter() {
        if all.iter().filter(|p| !set.contains(p)).all(|p| space.incident(p, h).unwrap_or(false)) {
            return Ok(Some(h.clone()));
        }
    }
    Ok(None)
}
