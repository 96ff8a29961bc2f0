use std::collections::HashMap;

use rayon::prelude::*;

use super::subspace::{ProjectiveSpace, Subspace};
use crate::error::{Error, Result};

/// Default cap on the number of subspaces an index may hold.
pub const DEFAULT_SUBSPACE_CAP: u128 = 10_000_000;

/// All `rank`-subsets of `0..width`, in lexicographic order.
fn pivot_patterns(rank: usize, width: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(rank);
    fn rec(start: usize, rank: usize, width: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == rank {
            out.push(cur.clone());
            return;
        }
        for c in start..=width - (rank - cur.len()) {
            cur.push(c);
            rec(c + 1, rank, width, cur, out);
            cur.pop();
        }
    }
    if rank <= width {
        rec(0, rank, width, &mut cur, &mut out);
    }
    out
}

/// Visits every RREF matrix with the given pivot columns, as a flattened
/// `rank x width` array of field values.
fn for_each_with_pivots(q: u32, pivots: &[usize], width: usize, f: &mut impl FnMut(&[u32])) {
    let rank = pivots.len();
    let mut m = vec![0u32; rank * width];
    let mut free = Vec::new();
    for (i, &c) in pivots.iter().enumerate() {
        m[i * width + c] = 1;
        for col in c + 1..width {
            if !pivots.contains(&col) {
                free.push(i * width + col);
            }
        }
    }
    loop {
        f(&m);
        // odometer over the free positions, last position fastest
        let mut t = free.len();
        loop {
            if t == 0 {
                return;
            }
            t -= 1;
            let pos = free[t];
            m[pos] += 1;
            if m[pos] < q {
                break;
            }
            m[pos] = 0;
        }
    }
}

/// Visits every `rank x width` matrix over `F_q` in reduced row-echelon form.
pub(crate) fn for_each_rref(q: u32, rank: usize, width: usize, mut f: impl FnMut(&[u32])) {
    for pivots in pivot_patterns(rank, width) {
        for_each_with_pivots(q, &pivots, width, &mut f);
    }
}

/// The sorted list of all `j`-spaces of a projective space with a reverse
/// lookup table.
#[derive(Debug)]
pub struct GeometryIndex {
    n: usize,
    q: u32,
    j: isize,
    subspaces: Vec<Subspace>,
    lookup: HashMap<Subspace, usize>,
}

impl GeometryIndex {
    pub(crate) fn build(space: &ProjectiveSpace, j: isize) -> Result<Self> {
        let count = space.count(j);
        if count > space.subspace_cap() {
            return Err(Error::CapExceeded { what: "subspace", count, cap: space.subspace_cap() });
        }
        let n = space.n();
        let q = space.q();
        let rank = (j + 1) as usize;
        let mut subspaces: Vec<Subspace> = pivot_patterns(rank, n + 1)
            .into_par_iter()
            .flat_map_iter(|piv| {
                let mut part = Vec::new();
                for_each_with_pivots(q, &piv, n + 1, &mut |m| {
                    part.push(Subspace::from_rref(n, rank, m.to_vec()));
                });
                part
            })
            .collect();
        subspaces.par_sort_unstable();
        debug_assert_eq!(subspaces.len() as u128, count);
        let lookup = subspaces.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(GeometryIndex { n, q, j, subspaces, lookup })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn j(&self) -> isize {
        self.j
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.subspaces[i]
    }

    pub fn position(&self, s: &Subspace) -> Option<usize> {
        self.lookup.get(s).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Subspace> {
        self.subspaces.iter()
    }

    pub fn as_slice(&self) -> &[Subspace] {
        &self.subspaces
    }
}

impl std::ops::Index<usize> for GeometryIndex {
    type Output = Subspace;
    fn index(&self, i: usize) -> &Subspace {
        &self.subspaces[i]
    }
}

impl<'a> IntoIterator for &'a GeometryIndex {
    type Item = &'a Subspace;
    type IntoIter = std::slice::Iter<'a, Subspace>;
    fn into_iter(self) -> Self::IntoIter {
        self.subspaces.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::gauss;

    #[test]
    fn counts_match_gaussian_coefficients() {
        for (n, p, h) in [(1, 2, 1), (2, 2, 1), (3, 2, 1), (4, 2, 1), (2, 3, 1), (3, 3, 1), (2, 2, 2), (2, 5, 1), (3, 2, 2)] {
            let s = ProjectiveSpace::over(n, p, h).unwrap();
            let q = s.q() as u64;
            for j in -1..=n as isize {
                let ix = s.index(j).unwrap();
                assert_eq!(ix.len() as u64, gauss(n as i64 + 1, j as i64 + 1, q), "PG({n},{q}) j={j}");
                for (i, x) in ix.iter().enumerate() {
                    assert_eq!(ix.position(x), Some(i));
                    assert_eq!(x.dim(), j);
                }
                assert!(ix.as_slice().windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn fano_points_in_order() {
        let s = ProjectiveSpace::over(2, 2, 1).unwrap();
        let pts: Vec<Vec<u32>> = s.index(0).unwrap().iter().map(|p| p.key().to_vec()).collect();
        assert_eq!(
            pts,
            vec![
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![1, 0, 0],
                vec![1, 0, 1],
                vec![1, 1, 0],
                vec![1, 1, 1]
            ]
        );
    }

    #[test]
    fn cap_is_enforced() {
        let f = crate::field::FieldSpec::new(2, 1).unwrap();
        let s = ProjectiveSpace::with_cap(3, f, 20);
        assert!(s.index(0).is_ok());
        assert!(s.index(1).unwrap_err().is_cap());
    }
}
