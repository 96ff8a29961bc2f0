use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use super::subspace::ProjectiveSpace;
use crate::error::{Error, Result};

/// A 0/1 incidence matrix over `F_p` in coordinate form; rows follow the
/// order of `G_k`, columns the order of `G_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    /// Sorted `(row, col)` positions of the ones.
    pub entries: Vec<(usize, usize)>,
}

/// Incidences between the `k`-spaces and the `j`-spaces of `space`.
pub fn incidence_matrix(space: &Arc<ProjectiveSpace>, k: isize, j: isize) -> Result<IncidenceMatrix> {
    let n = space.n() as isize;
    if !(0 <= j && j < k && k < n) {
        return Err(Error::params(format!("need 0 <= j < k < n, got j={j} k={k} n={n}")));
    }
    let gk = space.index(k)?;
    let gj = space.index(j)?;
    let per_row: Vec<Vec<(usize, usize)>> = gk
        .as_slice()
        .par_iter()
        .enumerate()
        .map(|(r, kappa)| {
            let mut cols: Vec<usize> = space
                .subspaces_of(kappa, j)
                .expect("same ambient")
                .iter()
                .map(|l| gj.position(l).expect("indexed"))
                .collect();
            cols.sort_unstable();
            cols.into_iter().map(|c| (r, c)).collect()
        })
        .collect();
    Ok(IncidenceMatrix { p: space.p(), rows: gk.len(), cols: gj.len(), entries: per_row.concat() })
}

impl IncidenceMatrix {
    pub fn row_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.rows];
        for &(r, _) in &self.entries {
            w[r] += 1;
        }
        w
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for &(_, c) in &self.entries {
            w[c] += 1;
        }
        w
    }

    /// Rows as column-index lists.
    pub fn row_lists(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.rows];
        for &(r, c) in &self.entries {
            out[r].push(c);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("%%pgcodes coord p={} rows={} cols={}\n", self.p, self.rows, self.cols);
        for &(r, c) in &self.entries {
            writeln!(s, "{r} {c} 1").unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let rest = header
            .strip_prefix("%%pgcodes coord ")
            .ok_or_else(|| Error::parse(1, "missing %%pgcodes coord header"))?;
        let mut p = None;
        let mut rows = None;
        let mut cols = None;
        for tok in rest.split_whitespace() {
            let (key, val) = tok.split_once('=').ok_or_else(|| Error::parse(1, format!("bad header token {tok}")))?;
            let val: usize = val.parse().map_err(|_| Error::parse(1, format!("bad number in {tok}")))?;
            match key {
                "p" => p = Some(val as u32),
                "rows" => rows = Some(val),
                "cols" => cols = Some(val),
                _ => return Err(Error::parse(1, format!("unknown header key {key}"))),
            }
        }
        let (Some(p), Some(rows), Some(cols)) = (p, rows, cols) else {
            return Err(Error::parse(1, "header needs p, rows and cols"));
        };
        let mut entries = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::parse(i + 1, format!("bad number {t}"))))
                .collect::<Result<_>>()?;
            let [r, c, v] = nums[..] else {
                return Err(Error::parse(i + 1, "expected `r c v`"));
            };
            if r >= rows || c >= cols || v != 1 {
                return Err(Error::parse(i + 1, "entry out of range"));
            }
            if entries.last().is_some_and(|&last| last >= (r, c)) {
                return Err(Error::parse(i + 1, "entries must be sorted by (r, c)"));
            }
            entries.push((r, c));
        }
        Ok(IncidenceMatrix { p, rows, cols, entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        for (n, q, k, j, rows, cols, rw, cw) in [
            (2, 2, 1, 0, 7, 7, 3, 3),
            (3, 2, 2, 1, 15, 35, 7, 3),
            (3, 2, 1, 0, 35, 15, 3, 7),
            (2, 3, 1, 0, 13, 13, 4, 4),
        ] {
            let s = ProjectiveSpace::over(n, q, 1).unwrap();
            let m = incidence_matrix(&s, k, j).unwrap();
            assert_eq!((m.rows, m.cols), (rows, cols));
            assert!(m.row_weights().iter().all(|&w| w == rw));
            assert!(m.col_weights().iter().all(|&w| w == cw));
        }
    }

    #[test]
    fn text_round_trip() {
        let s = ProjectiveSpace::over(2, 2, 1).unwrap();
        let m = incidence_matrix(&s, 1, 0).unwrap();
        let t = m.to_text();
        assert!(t.starts_with("%%pgcodes coord p=2 rows=7 cols=7\n"));
        let back = IncidenceMatrix::from_text(&t).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_text(), t);
    }

    #[test]
    fn bad_parameters() {
        let s = ProjectiveSpace::over(2, 2, 1).unwrap();
        assert!(incidence_matrix(&s, 2, 0).is_err());
        assert!(incidence_matrix(&s, 0, 0).is_err());
    }
}
