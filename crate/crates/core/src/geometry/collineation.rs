use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::subspace::{rref, ProjectiveSpace, Subspace};
use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// A collineation `x -> x^(p^e) M` of `PG(n, q)`, acting on row vectors.
#[derive(Clone)]
pub struct Collineation {
    space: Arc<ProjectiveSpace>,
    matrix: Vec<Vec<u32>>,
    frobenius: u32,
}

impl fmt::Debug for Collineation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Collineation")
            .field("matrix", &self.matrix)
            .field("frobenius", &self.frobenius)
            .finish()
    }
}

fn inverse_matrix(field: &FieldSpec, m: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let w = m.len();
    let mut aug: Vec<Vec<u32>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..w).map(|c| u32::from(c == i)));
            row
        })
        .collect();
    let pivots = rref(field, &mut aug);
    if pivots.len() < w || pivots[w - 1] != w - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[w..].to_vec()).collect())
}

fn mat_mul(field: &FieldSpec, a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    a.iter().map(|r| vec_mat(field, r, b)).collect()
}

fn vec_mat(field: &FieldSpec, v: &[u32], m: &[Vec<u32>]) -> Vec<u32> {
    let mut out = vec![0u32; m[0].len()];
    for (&c, row) in v.iter().zip(m) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            if x != 0 {
                *o = field.add(*o, field.mul(c, x));
            }
        }
    }
    out
}

impl Collineation {
    pub fn new(space: &Arc<ProjectiveSpace>, matrix: Vec<Vec<u32>>, frobenius: u32) -> Result<Self> {
        let w = space.n() + 1;
        let field = space.field();
        if matrix.len() != w || matrix.iter().any(|r| r.len() != w || r.iter().any(|&x| x >= field.q())) {
            return Err(Error::params(format!("collineation matrix must be {w}x{w} over F_{}", field.q())));
        }
        if frobenius >= field.h() {
            return Err(Error::params("automorphism exponent must lie in [0, h)"));
        }
        if inverse_matrix(field, &matrix).is_none() {
            return Err(Error::params("collineation matrix is singular"));
        }
        Ok(Collineation { space: Arc::clone(space), matrix, frobenius })
    }

    pub fn identity(space: &Arc<ProjectiveSpace>) -> Self {
        let w = space.n() + 1;
        let matrix = (0..w).map(|i| (0..w).map(|c| u32::from(c == i)).collect()).collect();
        Collineation { space: Arc::clone(space), matrix, frobenius: 0 }
    }

    /// A uniformly random invertible matrix, with a random automorphism when
    /// `semilinear` is set.
    pub fn random<R: Rng + ?Sized>(space: &Arc<ProjectiveSpace>, rng: &mut R, semilinear: bool) -> Self {
        let w = space.n() + 1;
        let field = space.field();
        let q = field.q();
        loop {
            let matrix: Vec<Vec<u32>> = (0..w).map(|_| (0..w).map(|_| rng.random_range(0..q)).collect()).collect();
            if inverse_matrix(field, &matrix).is_some() {
                let frobenius = if semilinear { rng.random_range(0..field.h()) } else { 0 };
                return Collineation { space: Arc::clone(space), matrix, frobenius };
            }
        }
    }

    pub fn space(&self) -> &Arc<ProjectiveSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn frobenius(&self) -> u32 {
        self.frobenius
    }

    pub fn apply_vector(&self, v: &[u32]) -> Vec<u32> {
        let field = self.space.field();
        if self.frobenius == 0 {
            vec_mat(field, v, &self.matrix)
        } else {
            let s: Vec<u32> = v.iter().map(|&x| field.frobenius(x, self.frobenius)).collect();
            vec_mat(field, &s, &self.matrix)
        }
    }

    pub fn apply(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient() != self.space.n() {
            return Err(Error::MixedAmbient);
        }
        let rows = s.rows().map(|r| self.apply_vector(r)).collect();
        Ok(self.space.canonical_unchecked(rows))
    }

    pub fn inverse(&self) -> Self {
        let field = self.space.field();
        let inv = inverse_matrix(field, &self.matrix).expect("collineation matrices are invertible");
        if self.frobenius == 0 {
            return Collineation { space: Arc::clone(&self.space), matrix: inv, frobenius: 0 };
        }
        let e = field.h() - self.frobenius;
        let matrix = inv.iter().map(|r| r.iter().map(|&x| field.frobenius(x, e)).collect()).collect();
        Collineation { space: Arc::clone(&self.space), matrix, frobenius: e }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Collineation) -> Self {
        let field = self.space.field();
        let twisted: Vec<Vec<u32>> = if other.frobenius == 0 {
            self.matrix.clone()
        } else {
            self.matrix.iter().map(|r| r.iter().map(|&x| field.frobenius(x, other.frobenius)).collect()).collect()
        };
        Collineation {
            space: Arc::clone(&self.space),
            matrix: mat_mul(field, &twisted, &other.matrix),
            frobenius: (self.frobenius + other.frobenius) % field.h(),
        }
    }

    /// The collineation applied `e` times.
    pub fn power(&self, mut e: u64) -> Self {
        let mut acc = Collineation::identity(&self.space);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }
}

/// Orbit checks on points are skipped above this many points.
const SINGER_CHECK_CAP: u64 = 10_000_000;

fn proportional(field: &FieldSpec, a: &[u32], b: &[u32]) -> bool {
    let Some(i) = a.iter().position(|&x| x != 0) else {
        return false;
    };
    if b[i] == 0 {
        return false;
    }
    let t = field.mul(b[i], field.inv(a[i]).expect("nonzero"));
    a.iter().zip(b).all(|(&x, &y)| field.mul(x, t) == y)
}

/// Length of the orbit of the point `v` under `f`, or `None` if it exceeds `limit`.
pub(crate) fn point_orbit_length(f: &Collineation, v: &[u32], limit: u64) -> Option<u64> {
    let field = f.space.field();
    let mut cur = f.apply_vector(v);
    let mut len = 1;
    while !proportional(field, v, &cur) {
        len += 1;
        if len > limit {
            return None;
        }
        cur = f.apply_vector(&cur);
    }
    Some(len)
}

/// The Singer cycle of `PG(n, q)`: the companion matrix of the primitive
/// modulus of the degree-`(n+1)` extension of `F_q`, which represents
/// multiplication by a primitive element.
pub fn singer_cycle(space: &Arc<ProjectiveSpace>) -> Result<Collineation> {
    let n = space.n();
    if n == 0 {
        return Ok(Collineation::identity(space));
    }
    let field = space.field();
    let ext = FieldSpec::extend_with_cap(field, n as u32 + 1, u32::MAX as u64)?;
    let f = ext.modulus();
    let w = n + 1;
    let mut matrix = vec![vec![0u32; w]; w];
    for (i, row) in matrix.iter_mut().enumerate().take(n) {
        row[i + 1] = 1;
    }
    for (c, x) in matrix[n].iter_mut().enumerate() {
        *x = field.neg(f[c]);
    }
    let g = Collineation { space: Arc::clone(space), matrix, frobenius: 0 };
    let points = super::theta_u64(n as i64, field.q() as u64);
    if points <= SINGER_CHECK_CAP {
        let mut e0 = vec![0u32; w];
        e0[0] = 1;
        let len = point_orbit_length(&g, &e0, points);
        assert_eq!(len, Some(points), "companion matrix of a primitive polynomial acts as a Singer cycle");
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn singer_orbits() {
        for (n, p, h, len) in [(1, 2, 1, 3), (2, 2, 1, 7), (3, 2, 1, 15), (2, 3, 1, 13), (2, 2, 2, 21), (3, 3, 1, 40)] {
            let s = ProjectiveSpace::over(n, p, h).unwrap();
            let g = singer_cycle(&s).unwrap();
            let mut e0 = vec![0u32; n + 1];
            e0[0] = 1;
            assert_eq!(point_orbit_length(&g, &e0, 1000), Some(len));
            // every point lies in the single orbit
            for pt in s.index(0).unwrap().iter() {
                assert_eq!(point_orbit_length(&g, pt.row(0), 1000), Some(len));
            }
        }
    }

    #[test]
    fn fano_singer_uses_x3_x_1() {
        let s = ProjectiveSpace::over(2, 2, 1).unwrap();
        let g = singer_cycle(&s).unwrap();
        assert_eq!(g.matrix(), &[vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn inverse_and_incidence() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, p, h) in [(2, 2, 2), (3, 2, 1), (2, 3, 2), (2, 2, 3)] {
            let s = ProjectiveSpace::over(n, p, h).unwrap();
            let lines = s.index(1).unwrap();
            let pts = s.index(0).unwrap();
            for _ in 0..20 {
                let f = Collineation::random(&s, &mut rng, true);
                let g = f.inverse();
                let id = f.then(&g);
                let l = &lines[rng.random_range(0..lines.len())];
                assert_eq!(g.apply(&f.apply(l).unwrap()).unwrap(), *l);
                assert_eq!(id.apply(l).unwrap(), *l);
                let fl = f.apply(l).unwrap();
                assert_eq!(fl.dim(), 1);
                for pt in pts.iter().take(30) {
                    assert_eq!(s.incident(pt, l).unwrap(), s.incident(&f.apply(pt).unwrap(), &fl).unwrap());
                }
            }
        }
    }

    #[test]
    fn singer_power_is_identity_on_points() {
        let s = ProjectiveSpace::over(2, 3, 1).unwrap();
        let g = singer_cycle(&s).unwrap();
        let g13 = g.power(13);
        for pt in s.index(0).unwrap().iter() {
            assert_eq!(g13.apply(pt).unwrap(), *pt);
        }
    }

    #[test]
    fn bad_matrices_rejected() {
        let s = ProjectiveSpace::over(1, 2, 1).unwrap();
        assert!(Collineation::new(&s, vec![vec![1, 1], vec![1, 1]], 0).is_err());
        assert!(Collineation::new(&s, vec![vec![1, 0], vec![0, 1]], 1).is_err());
        assert!(Collineation::new(&s, vec![vec![0, 1], vec![1, 0]], 0).is_ok());
    }
}
