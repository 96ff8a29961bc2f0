//! The subspace lattice of `PG(n, q)`.

mod collineation;
mod incidence;
mod index;
mod subspace;

pub use collineation::{singer_cycle, Collineation};
pub use incidence::{incidence_matrix, IncidenceMatrix};
pub use index::{GeometryIndex, DEFAULT_SUBSPACE_CAP};
pub use subspace::{set_subspace_cap, subspace_cap, Chart, ProjectiveSpace, Subspace};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// The q-binomial coefficient `[m choose i]_q`, the number of `(i-1)`-spaces of `PG(m-1, q)`.
pub fn gaussian_coeff(m: i64, i: i64, q: u64) -> BigUint {
    if i < 0 || i > m {
        return BigUint::zero();
    }
    if i == 0 {
        return BigUint::one();
    }
    let q = BigUint::from(q);
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for t in 0..i {
        num *= q.pow((m - t) as u32) - &one;
        den *= q.pow((t + 1) as u32) - &one;
    }
    num / den
}

/// Number of points of `PG(m, q)`; zero for negative `m`.
pub fn theta(m: i64, q: u64) -> BigUint {
    if m < 0 {
        return BigUint::zero();
    }
    gaussian_coeff(m + 1, 1, q)
}

/// [`gaussian_coeff`] narrowed to `u64`; panics on overflow, so only use it for counts
/// that index memory.
pub fn gauss(m: i64, i: i64, q: u64) -> u64 {
    gaussian_coeff(m, i, q).to_u64().expect("gaussian coefficient fits in u64")
}

pub fn theta_u64(m: i64, q: u64) -> u64 {
    theta(m, q).to_u64().expect("theta fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_values() {
        assert_eq!(gauss(3, 2, 2), 7);
        assert_eq!(gauss(4, 2, 2), 35);
        assert_eq!(gauss(3, 2, 3), 13);
        assert_eq!(gauss(7, 0, 5), 1);
        assert_eq!(gauss(3, 4, 2), 0);
        assert_eq!(gauss(3, -1, 2), 0);
        assert_eq!(theta_u64(2, 2), 7);
        assert_eq!(theta_u64(1, 3), 4);
        assert_eq!(theta_u64(-1, 9), 0);
    }

    #[test]
    fn gaussian_symmetry_and_pascal() {
        for q in [2u64, 3, 4, 5, 7] {
            for m in 0..8i64 {
                for i in 0..=m {
                    assert_eq!(gaussian_coeff(m, i, q), gaussian_coeff(m, m - i, q));
                    if m > 0 && i > 0 {
                        // [m, i] = [m-1, i-1] + q^i [m-1, i]
                        let rhs = gaussian_coeff(m - 1, i - 1, q)
                            + BigUint::from(q).pow(i as u32) * gaussian_coeff(m - 1, i, q);
                        assert_eq!(gaussian_coeff(m, i, q), rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn big_values_do_not_overflow() {
        let g = gaussian_coeff(40, 20, 5);
        assert!(g > BigUint::from(u64::MAX));
    }
}
