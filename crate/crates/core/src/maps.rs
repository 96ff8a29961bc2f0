//! Projection from a point onto a hyperplane, the quotient map through a
//! subspace, and the map lowering `j`-space functions to `i`-space functions.
//!
//! Outputs over a subspace `pi` live in a standalone `PG(dim pi, q)`
//! reached through [`Chart`], which keeps the pivot columns of `pi`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::codespace::CodeVector;
use crate::error::{Error, Result};
use crate::geometry::{Chart, ProjectiveSpace, Subspace};

fn chart_for(space: &Arc<ProjectiveSpace>, pi: &Subspace) -> Result<Chart> {
    let target = space.sibling(pi.dim() as usize);
    space.chart(pi, &target)
}

fn sum_over(space: &ProjectiveSpace, v: &CodeVector, s: &Subspace, j: isize) -> u32 {
    let p = v.p();
    let mut acc = 0u32;
    for l in space.subspaces_of(s, j).expect("same ambient") {
        acc = (acc + v.value_at(&l)) % p;
    }
    acc
}

/// `proj_{R,pi}`: each `j`-space `lambda` of `pi` receives the sum of `v`
/// over the `j`-spaces of `<R, lambda>`.
pub fn proj(r: &Subspace, pi: &Subspace, v: &CodeVector) -> Result<CodeVector> {
    Ok(proj_with_chart(r, pi, v)?.0)
}

pub fn proj_with_chart(r: &Subspace, pi: &Subspace, v: &CodeVector) -> Result<(CodeVector, Chart)> {
    let space = v.space();
    let n = space.n() as isize;
    if r.dim() != 0 || pi.dim() != n - 1 {
        return Err(Error::params("proj needs a point and a hyperplane"));
    }
    if space.incident(r, pi)? {
        return Err(Error::params("the centre of projection lies in the hyperplane"));
    }
    let j = v.j();
    if j > n - 1 {
        return Err(Error::params("proj needs j < n"));
    }
    let chart = chart_for(space, pi)?;
    let target = Arc::clone(chart.target());
    let tj = target.index(j)?;
    let entries: Vec<(usize, u32)> = tj
        .as_slice()
        .par_iter()
        .enumerate()
        .filter_map(|(idx, mu)| {
            let lambda = chart.lift(mu).expect("chart");
            let cone = space.span(r, &lambda).expect("same ambient");
            let x = sum_over(space, v, &cone, j);
            (x != 0).then_some((idx, x))
        })
        .collect();
    Ok((CodeVector::from_entries(&target, j, entries)?, chart))
}

/// `p_iota`: each `(j-i-1)`-space `mu` of `pi` receives `v(<mu, iota>)`.
pub fn pa(iota: &Subspace, pi: &Subspace, v: &CodeVector) -> Result<CodeVector> {
    Ok(pa_with_chart(iota, pi, v)?.0)
}

pub fn pa_with_chart(iota: &Subspace, pi: &Subspace, v: &CodeVector) -> Result<(CodeVector, Chart)> {
    let space = v.space();
    let n = space.n() as isize;
    let i = iota.dim();
    let j = v.j();
    if i < -1 || i >= j {
        return Err(Error::params(format!("pa needs -1 <= dim iota < j, got {i} with j = {j}")));
    }
    if pi.dim() != n - i - 1 {
        return Err(Error::params(format!("pa needs dim pi = {}, got {}", n - i - 1, pi.dim())));
    }
    if !space.skew(iota, pi)? {
        return Err(Error::NotSkew);
    }
    let chart = chart_for(space, pi)?;
    let target = Arc::clone(chart.target());
    let tj = j - i - 1;
    // walk the support: every j-space through iota meets pi in a (j-i-1)-space
    let mut entries = BTreeMap::new();
    let tix = target.index(tj)?;
    for (&idx, &x) in v.entries() {
        let lambda = v.geometry().get(idx);
        if !space.incident(iota, lambda)? {
            continue;
        }
        let mu = space.intersect(lambda, pi)?;
        let m = chart.to_chart(&mu)?;
        entries.insert(tix.position(&m).expect("indexed"), x);
    }
    Ok((CodeVector::from_entries(&target, tj, entries)?, chart))
}

/// `l_i`: each `i`-space receives the sum of `v` over the `j`-spaces through it.
pub fn la(i: isize, v: &CodeVector) -> Result<CodeVector> {
    let j = v.j();
    if i < 0 || i >= j {
        return Err(Error::params(format!("la needs 0 <= i < j = {j}")));
    }
    let space = v.space();
    let gi = space.index(i)?;
    let mut out = CodeVector::zero(space, i)?;
    for (&idx, &x) in v.entries() {
        for sub in space.subspaces_of(v.geometry().get(idx), i)? {
            out.add_at(gi.position(&sub).expect("indexed"), x);
        }
    }
    Ok(out)
}
