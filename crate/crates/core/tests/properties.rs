//! Algebraic invariants checked on random inputs.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pgcodes::analysis::{random_codeword, random_vector};
use pgcodes::codespace::{shared_code, CodeKind, CodeVector};
use pgcodes::field::FieldSpec;
use pgcodes::geometry::ProjectiveSpace;
use pgcodes::io;
use pgcodes::maps;

const QS: [u32; 9] = [2, 3, 4, 5, 7, 8, 9, 16, 25];

fn field_for(i: usize) -> std::sync::Arc<FieldSpec> {
    let q = QS[i % QS.len()];
    let (p, h) = pgcodes::field::prime_power(q as u64).unwrap();
    FieldSpec::new(p as u32, h).unwrap()
}

proptest! {
    #[test]
    fn field_axioms(fi in 0usize..9, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field_for(fi);
        let q = f.q();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        } else {
            prop_assert!(f.inv(a).is_err());
        }
        // Frobenius is additive and multiplicative
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.pow(a, q as u64), a);
    }

    #[test]
    fn canonical_form_is_basis_independent(
        qi in 0usize..4,
        rows in prop::collection::vec(prop::collection::vec(any::<u32>(), 4), 1..4),
        mix in prop::collection::vec(any::<u32>(), 16),
    ) {
        let q = [2u32, 3, 4, 5][qi];
        let s = ProjectiveSpace::shared(3, q).unwrap();
        let f = s.field().clone();
        let rows: Vec<Vec<u32>> = rows.into_iter().map(|r| r.into_iter().map(|x| x % q).collect()).collect();
        let a = s.canonicalize(&rows).unwrap();
        // add random multiples of the other rows to each row
        let mut mixed = rows.clone();
        for i in 0..mixed.len() {
            for t in 0..rows.len() {
                if t != i {
                    let c = mix[(i * 4 + t) % mix.len()] % q;
                    for x in 0..4 {
                        mixed[i][x] = f.add(mixed[i][x], f.mul(c, rows[t][x]));
                    }
                }
            }
        }
        let b = s.canonicalize(&mixed).unwrap();
        // row mixing can lower the rank only when rows were dependent
        if b.rank() == a.rank() {
            prop_assert_eq!(&a, &b);
        }
        prop_assert!(s.incident(&b, &a).unwrap());
        prop_assert_eq!(s.canonicalize(&a.rows().collect::<Vec<_>>()).unwrap(), a.clone());
        prop_assert_eq!(s.annihilator(&s.annihilator(&a).unwrap()).unwrap(), a);
    }

    #[test]
    fn dimension_formula(qi in 0usize..3, ia in any::<usize>(), ib in any::<usize>(), da in 0isize..3, db in 0isize..3) {
        let q = [2u32, 3, 4][qi];
        let s = ProjectiveSpace::shared(3, q).unwrap();
        let ga = s.index(da).unwrap();
        let gb = s.index(db).unwrap();
        let a = &ga[ia % ga.len()];
        let b = &gb[ib % gb.len()];
        let span = s.span(a, b).unwrap();
        let meet = s.intersect(a, b).unwrap();
        prop_assert_eq!(span.dim() + meet.dim(), a.dim() + b.dim());
        prop_assert!(s.incident(&meet, a).unwrap() && s.incident(&meet, b).unwrap());
        prop_assert!(s.incident(a, &span).unwrap() && s.incident(b, &span).unwrap());
        let c = s.complement(a).unwrap();
        prop_assert!(s.skew(a, &c).unwrap());
        prop_assert_eq!(s.span(a, &c).unwrap(), s.whole());
    }

    #[test]
    fn primal_and_dual_are_orthogonal(case in 0usize..5, seed in any::<u64>()) {
        let (n, q, j, k) = [(2, 2, 0, 1), (2, 3, 0, 1), (3, 2, 0, 2), (3, 2, 1, 2), (2, 5, 0, 1)][case];
        let s = ProjectiveSpace::shared(n, q).unwrap();
        let c = shared_code(&s, j, k, CodeKind::Primal).unwrap();
        let d = shared_code(&s, j, k, CodeKind::Dual).unwrap();
        prop_assert_eq!(c.dim() + d.dim(), c.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_codeword(&c, &mut rng);
        let y = random_codeword(&d, &mut rng);
        prop_assert_eq!(x.dot(&y).unwrap(), 0);
        prop_assert!(c.contains(&x.add(&random_codeword(&c, &mut rng)).unwrap()).unwrap());
        let h = shared_code(&s, j, k, CodeKind::Hull).unwrap();
        let z = random_codeword(&h, &mut rng);
        prop_assert!(c.contains(&z).unwrap());
        prop_assert_eq!(z.dot(&CodeVector::ones(&s, j).unwrap()).unwrap(), 0);
    }

    #[test]
    fn maps_are_linear(seed in any::<u64>(), a in 0u32..3, b in 0u32..3) {
        let s = ProjectiveSpace::shared(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_vector(&s, 1, &mut rng);
        let v = random_vector(&s, 1, &mut rng);
        let combo = u.scale(a).add(&v.scale(b)).unwrap();
        let lin = |f: &dyn Fn(&CodeVector) -> CodeVector| -> bool {
            f(&combo) == f(&u).scale(a).add(&f(&v).scale(b)).unwrap()
        };
        let pts = s.index(0).unwrap();
        let r = pts[(seed % pts.len() as u64) as usize].clone();
        let pi = s.complement(&r).unwrap();
        prop_assert!(lin(&|x| maps::la(0, x).unwrap()));
        prop_assert!(lin(&|x| maps::pa(&r, &pi, x).unwrap()));
        prop_assert!(lin(&|x| maps::proj(&r, &pi, x).unwrap()));
        let ones = |x: &CodeVector| x.dot(&CodeVector::ones(x.space(), x.j()).unwrap()).unwrap();
        let image = maps::proj(&r, &pi, &u).unwrap();
        prop_assert_eq!(ones(&image), ones(&u));
    }

    #[test]
    fn word_files_round_trip(seed in any::<u64>(), qi in 0usize..3) {
        let q = [2u32, 4, 5][qi];
        let s = ProjectiveSpace::shared(2, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = io::WordFile::new(random_vector(&s, 0, &mut rng)).with("seed", seed);
        let text = io::write_word(&w);
        let back = io::read_word(&text).unwrap();
        prop_assert_eq!(io::write_word(&back), text);
        prop_assert_eq!(back, w);
    }
}
