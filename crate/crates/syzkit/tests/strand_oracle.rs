//! Strands and diagrams against Koszul homology and evaluation ranks.

mod common;

use common::{hilbert_numerator_from_dims, koszul_strand, power_dims, random_code, rng, rows};
use rand::Rng;
use syzkit::codes::{golay_11, hamming_7_4, LinearCode};
use syzkit::gf::Field;
use syzkit::syzygy::{
    betti_diagram_reg2, hilbert_numerator, linear_strand, square_dim, StrandOptions,
};

fn strand_upto(code: &LinearCode, max_r: usize) -> Vec<u64> {
    let s = linear_strand(code, max_r, &StrandOptions::default());
    (2..=max_r).map(|r| s.beta(r).unwrap()).collect()
}

/// 30 codes: binary up to k = 10, ternary, GF(4) and GF(5) up to k = 7.
fn corpus() -> Vec<LinearCode> {
    let mut r = rng(0x5eed);
    let mut out = vec![hamming_7_4(), golay_11()];
    let fields = [(2, 10), (3, 7), (4, 6), (5, 6)];
    while out.len() < 30 {
        let (q, kmax) = fields[out.len() % fields.len()];
        let f = Field::with_order(q).unwrap();
        let k = r.random_range(3..=kmax);
        let n = r.random_range(k + 2..=2 * k + 2);
        out.push(random_code(&f, n, k, &mut r));
    }
    out
}

#[test]
fn strand_matches_koszul_homology() {
    let mut deep = 0;
    for code in corpus() {
        let k = code.k();
        // Binary codes with k ≥ 9 stop at degree 6 to keep the oracle small.
        let top = if k >= 9 { 6 } else { k };
        let expect = koszul_strand(code.field(), &rows(&code), top);
        assert_eq!(
            strand_upto(&code, top),
            expect,
            "[{},{}]_{}",
            code.n(),
            k,
            code.q()
        );
        deep += usize::from(expect.get(2).is_some_and(|&b| b > 0));
    }
    assert!(deep >= 10, "only {deep} codes reach degree 4");
}

#[test]
fn diagram_matches_hilbert_series() {
    let mut checked = 0;
    for code in corpus() {
        let (n, k) = (code.n(), code.k());
        let g = rows(&code);
        let dims = power_dims(code.field(), &g, 3);
        assert_eq!(dims[1], square_dim(&code));
        if dims[1] != n {
            continue;
        }
        let strand = linear_strand(&code, k, &StrandOptions::default());
        let d = betti_diagram_reg2(&code, &strand).unwrap();
        let oracle = hilbert_numerator_from_dims(k, &dims, k + 2);
        assert_eq!(d.alternating_sums(), oracle, "[{n},{k}]_{}", code.q());
        assert_eq!(hilbert_numerator(n, k), oracle);
        checked += 1;
    }
    assert!(checked >= 15, "only {checked} regularity-2 codes");
}

#[test]
fn square_dimension_and_first_entry() {
    for code in corpus() {
        let k = code.k();
        let dims = power_dims(code.field(), &rows(&code), 2);
        let b12 = strand_upto(&code, 2)[0];
        assert_eq!(b12 as usize, k * (k + 1) / 2 - dims[1]);
    }
}
