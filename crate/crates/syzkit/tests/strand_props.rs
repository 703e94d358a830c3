//! Structural invariants of the linear strand.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use syzkit::codes::LinearCode;
use syzkit::gf::Field;
use syzkit::linalg::Matrix;
use syzkit::syzygy::{compute_b2, linear_strand, naive_next_basis, BettiStrand, StrandOptions};

fn strand(code: &LinearCode) -> BettiStrand {
    linear_strand(code, code.k(), &StrandOptions::default())
}

fn small_code(q: u64, seed: u64) -> LinearCode {
    let f = Field::with_order(q).unwrap();
    let mut rng = common::rng(seed);
    let k = rng.random_range(3..=7);
    let n = rng.random_range(k + 1..=2 * k + 3);
    common::random_code(&f, n, k, &mut rng)
}

fn q_strategy() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 8])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn grossier_bounds(q in q_strategy(), seed in any::<u64>()) {
        let c = small_code(q, seed);
        let s = strand(&c);
        let k = c.k() as u64;
        prop_assert!(s.betas[0] <= k * (k - 1) / 2);
        for w in s.betas.windows(2) {
            prop_assert!(w[1] <= (k - 1) * w[0]);
        }
    }

    #[test]
    fn monomial_invariance(q in q_strategy(), seed in any::<u64>()) {
        let c = small_code(q, seed);
        let mut rng = common::rng(seed ^ 1);
        let mut perm: Vec<usize> = (0..c.n()).collect();
        perm.shuffle(&mut rng);
        let scale: Vec<u32> = (0..c.n()).map(|_| c.field().random_nonzero(&mut rng)).collect();
        let d = c.monomial_transform(&perm, &scale);
        prop_assert_eq!(strand(&c).betas, strand(&d).betas);
    }

    #[test]
    fn puncturing_never_lowers_the_strand(q in q_strategy(), seed in any::<u64>()) {
        let c = small_code(q, seed);
        let mut rng = common::rng(seed ^ 2);
        let pos: BTreeSet<usize> = [rng.random_range(0..c.n())].into();
        let p = c.puncture(&pos);
        prop_assume!(p.k() == c.k());
        let (a, b) = (strand(&c), strand(&p));
        for r in 2..=c.k() {
            prop_assert!(b.beta(r).unwrap() >= a.beta(r).unwrap(), "r={}", r);
        }
    }

    /// A random change of basis relabels the variables and the quadrics of
    /// `I₂`; the naive kernel iteration on that generator sees the same strand.
    #[test]
    fn strand_depends_only_on_the_ideal(q in q_strategy(), seed in any::<u64>()) {
        let c = small_code(q, seed);
        let mut rng = common::rng(seed ^ 3);
        let f = c.field().clone();
        let k = c.k();
        let s = loop {
            let s = Matrix::random(&f, k, k, &mut rng);
            if s.rank() == k {
                break s;
            }
        };
        let g = s.mul(c.generator()).unwrap();
        let mut bases = vec![compute_b2(&g)];
        for r in 3..=k {
            let prev2 = (r > 3).then(|| &bases[bases.len() - 2]);
            let next = naive_next_basis(bases.last().unwrap(), prev2).unwrap();
            let done = next.beta() == 0;
            bases.push(next);
            if done {
                break;
            }
        }
        let betas: Vec<u64> = bases.iter().map(|b| b.beta() as u64).collect();
        let expect = strand(&c);
        prop_assert_eq!(&betas[..], &expect.betas[..betas.len()]);
    }
}

#[test]
fn step_shapes_follow_the_macaulay_dimensions() {
    for seed in 0..20 {
        let c = small_code(2, seed);
        let s = strand(&c);
        let k = c.k() as u64;
        for step in &s.steps {
            let r = step.degree;
            let (rows, cols) = match r {
                2 => (k * (k + 1) / 2, c.n() as u64),
                3 => (k * s.betas[0], k * (k + 1) * (k + 2) / 6),
                _ => (k * s.betas[r - 3], k * (k + 1) / 2 * s.betas[r - 4]),
            };
            assert_eq!((step.rows, step.cols), (rows, cols), "r={r}");
        }
    }
}
