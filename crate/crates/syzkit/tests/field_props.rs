//! Field axioms, subfield embeddings and element encoding.

use proptest::prelude::*;
use rayon::prelude::*;
use syzkit::gf::{Field, SubfieldEmbedding};

fn prime_powers(limit: u64) -> Vec<u64> {
    let is_prime = |p: u64| p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
    (2..=limit)
        .filter(|&q| {
            (2..=q).find(|&p| q % p == 0).is_some_and(|p| {
                is_prime(p) && {
                    let mut x = q;
                    while x % p == 0 {
                        x /= p;
                    }
                    x == 1
                }
            })
        })
        .collect()
}

#[test]
fn every_field_up_to_256_satisfies_the_axioms() {
    let orders = prime_powers(256);
    assert_eq!(orders.len(), 70);
    orders.par_iter().for_each(|&q| {
        let f = Field::with_order(q).unwrap();
        let q32 = q as u32;
        for a in 0..q32 {
            assert_eq!(f.pow(a, q), a, "a^q = a in GF({q})");
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q32 {
                let ab = f.mul(a, b);
                let a_plus_b = f.add(a, b);
                assert_eq!(ab, f.mul(b, a));
                for c in 0..q32 {
                    assert_eq!(f.mul(ab, c), f.mul(a, f.mul(b, c)), "GF({q}) associativity");
                    assert_eq!(
                        f.mul(a_plus_b, c),
                        f.add(f.mul(a, c), f.mul(b, c)),
                        "GF({q}) distributivity"
                    );
                    assert_eq!(f.add(a_plus_b, c), f.add(a, f.add(b, c)));
                }
            }
        }
        // Frobenius generates a cyclic group of order `degree`.
        let p = f.p() as u64;
        let d = f.degree();
        for a in 0..q32 {
            let mut x = a;
            for _ in 0..d {
                x = f.pow(x, p);
            }
            assert_eq!(x, a);
        }
    });
}

#[test]
fn subfield_embeddings_are_homomorphisms() {
    for (small, big) in [
        (2, 4),
        (2, 8),
        (2, 16),
        (2, 32),
        (2, 64),
        (4, 16),
        (4, 64),
        (8, 64),
        (3, 9),
        (3, 27),
        (5, 25),
        (7, 49),
    ] {
        let s = Field::with_order(small).unwrap();
        let b = Field::with_order(big).unwrap();
        let e = SubfieldEmbedding::new(&s, &b).unwrap();
        assert_eq!(e.m() as u64, (big as f64).log(small as f64).round() as u64);
        for x in 0..small as u32 {
            for y in 0..small as u32 {
                assert_eq!(e.inject(s.add(x, y)), b.add(e.inject(x), e.inject(y)));
                assert_eq!(e.inject(s.mul(x, y)), b.mul(e.inject(x), e.inject(y)));
            }
        }
        for z in 0..big as u32 {
            assert_eq!(e.recombine(&e.expand(z)), z);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn element_encoding_round_trips(exp in 1u32..=12, v in any::<u32>()) {
        let f = Field::with_order(1u64 << exp).unwrap();
        let x = v % f.q();
        let e = f.element(x as u64).unwrap();
        prop_assert_eq!(e.to_string().parse::<u32>().unwrap(), x);
        prop_assert_eq!(f.element(e.value() as u64).unwrap(), e);
        let g = Field::from_descriptor(&f.descriptor()).unwrap();
        prop_assert_eq!(g.modulus(), f.modulus());
    }
}
