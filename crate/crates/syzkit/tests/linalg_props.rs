//! Rank–nullity, RREF idempotence and packed/generic agreement.

mod common;

use proptest::prelude::*;
use rand::Rng;
use syzkit::gf::Field;
use syzkit::linalg::Matrix;

fn field_strategy() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 16, 256, 1 << 12])
        .prop_map(|q| Field::with_order(q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rank_plus_left_kernel_is_rows(f in field_strategy(), rows in 1usize..40, cols in 1usize..40, seed in any::<u64>(), low_rank in any::<bool>()) {
        let mut rng = common::rng(seed);
        let mut m = Matrix::random(&f, rows, cols, &mut rng);
        if low_rank && rows > 2 {
            // Force dependencies: a product through a thin middle.
            let mid = rng.random_range(1..rows);
            let a = Matrix::random(&f, rows, mid, &mut rng);
            let b = Matrix::random(&f, mid, cols, &mut rng);
            m = a.mul(&b).unwrap();
        }
        let kernel = m.left_kernel();
        prop_assert_eq!(m.rank() + kernel.rows(), rows);
        prop_assert!(kernel.mul(&m).unwrap().is_zero());
        prop_assert_eq!(m.rank(), common::rank(&f, m.to_rows()));
        let right = m.right_kernel();
        prop_assert_eq!(m.rank() + right.rows(), cols);
        prop_assert!(m.mul(&right.transpose()).unwrap().is_zero());
    }

    #[test]
    fn rref_is_idempotent(f in field_strategy(), rows in 1usize..30, cols in 1usize..30, seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = Matrix::random(&f, rows, cols, &mut rng);
        let r = m.rref();
        let again = r.matrix.rref();
        prop_assert_eq!(&again.matrix, &r.matrix);
        prop_assert_eq!(again.rank, r.rank);
        prop_assert_eq!(again.pivots, r.pivots);
    }
}

/// 200 matrices up to 512×512 over GF(2), GF(4) and GF(256).
#[test]
fn packed_and_generic_paths_agree() {
    let mut rng = common::rng(42);
    for i in 0..200 {
        let q = [2u64, 4, 256][i % 3];
        let f = Field::with_order(q).unwrap();
        let (rows, cols) = if i % 20 == 0 {
            (512, 512)
        } else {
            (rng.random_range(1..160), rng.random_range(1..160))
        };
        let mut packed = Matrix::random(&f, rows, cols, &mut rng);
        if i % 4 == 1 && rows > 3 {
            let dup = packed.row(0);
            for (c, &v) in dup.iter().enumerate() {
                packed.set(rows - 1, c, v);
            }
        }
        assert!(packed.is_sliced());
        let dense = packed.to_dense();
        assert!(!dense.is_sliced());
        let (a, b) = (packed.rref(), dense.rref());
        assert_eq!(a.rank, b.rank);
        assert_eq!(a.pivots, b.pivots);
        assert_eq!(
            a.matrix.to_rows(),
            b.matrix.to_rows(),
            "{rows}x{cols} over GF({q})"
        );
        if rows <= 160 {
            assert_eq!(
                packed.left_kernel().to_rows(),
                dense.left_kernel().to_rows()
            );
            let other = Matrix::random(&f, cols, 17, &mut rng);
            assert_eq!(
                packed.mul(&other).unwrap().to_rows(),
                dense.mul(&other.to_dense()).unwrap().to_rows()
            );
        }
    }
}

#[test]
fn text_format_round_trips() {
    let mut rng = common::rng(7);
    for q in [2u64, 3, 16, 49] {
        let f = Field::with_order(q).unwrap();
        let m = Matrix::random(&f, 5, 9, &mut rng);
        let text = m.to_text();
        assert_eq!(text.lines().next().unwrap(), format!("{q} 5 9"));
        assert_eq!(
            Matrix::from_text(&text, Some(&f)).unwrap().to_rows(),
            m.to_rows()
        );
    }
}
