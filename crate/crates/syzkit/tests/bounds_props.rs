//! Eagon–Northcott machinery, closed forms, GV distances and entropy.

mod common;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::seq::index;
use rand::Rng;
use syzkit::bounds::{
    alternant_en_params, build_phi, closed_form_diagram, en_explicit_syzygies, en_strand_bound,
    entropy, entropy_threshold_rates, goppa_en_params, gv_distance, verify_en_syzygies,
    verify_minors_vanish, ClosedForm, PhiMatrix,
};
use syzkit::codes::{
    dual_alternant_code, grs_code, parity_code, Family, FamilySpec, SupportMultiplier,
};
use syzkit::gf::{Field, PolyMode, SubfieldEmbedding};
use syzkit::syzygy::{betti_diagram_reg2, linear_strand, StrandOptions};

/// `(q, m, t)` with `m > e`, small enough for exhaustive strands.
const ALT_PARAMS: [(u64, u32, u64); 7] = [
    (2, 4, 3),
    (3, 2, 4),
    (4, 2, 5),
    (3, 3, 3),
    (5, 2, 5),
    (4, 2, 4),
    (2, 5, 2),
];

fn embedding(q: u64, m: u32) -> SubfieldEmbedding {
    SubfieldEmbedding::new(
        &Field::with_order(q).unwrap(),
        &Field::with_order(q.pow(m)).unwrap(),
    )
    .unwrap()
}

#[test]
fn phi_minors_vanish_on_dual_alternant_codes() {
    let mut rng = common::rng(11);
    let mut instances = 0;
    for round in 0..4 {
        for &(q, m, t) in ALT_PARAMS
            .iter()
            .chain(&[(2, 8, 5), (2, 6, 5), (4, 4, 4), (2, 10, 5)])
        {
            let big = Field::with_order(q.pow(m)).unwrap();
            let n = (big.q() as usize).min(60 + round);
            let sm = SupportMultiplier::random(&big, n, &mut rng).unwrap();
            let (phi, eval) = build_phi(&sm, q, t, m).unwrap();
            assert_eq!(phi.f() as u64, alternant_en_params(q, t).unwrap().f);
            assert!(phi.columns_independent());
            assert!(verify_minors_vanish(&big, &eval), "q={q} m={m} t={t}");
            // A single evaluated entry off the variety breaks a minor.
            if phi.f() >= 2 {
                let p = (0..n).find(|&i| sm.x()[i] != 0).unwrap();
                let mut bad = eval.clone();
                bad[0][0][p] = big.add(bad[0][0][p], 1);
                assert!(!verify_minors_vanish(&big, &bad));
            }
            instances += 1;
        }
    }
    assert!(instances >= 20);
}

#[test]
fn explicit_en_syzygies_compose_to_zero() {
    let mut rng = common::rng(12);
    let mut instances = 0;
    for field in [
        Field::with_order(1 << 16).unwrap(),
        Field::prime(65537).unwrap(),
    ] {
        for f in 3..=8 {
            for r in 3..=f.min(6) {
                assert_eq!(
                    en_explicit_syzygies(f, r).unwrap().len(),
                    (r - 1) * common::binom(f, r)
                );
                assert!(
                    verify_en_syzygies(&field, f, r, 20, &mut rng).unwrap(),
                    "f={f} r={r}"
                );
                instances += 1;
            }
        }
    }
    assert!(instances >= 20);
}

fn strand_values(code: &syzkit::codes::LinearCode, top: usize) -> Vec<(usize, u64)> {
    let s = linear_strand(code, top, &StrandOptions::default());
    assert!(s.refusal.is_none());
    (2..=top.min(code.k()))
        .map(|r| (r, s.beta(r).unwrap()))
        .collect()
}

#[test]
fn en_bound_is_sound_on_shortened_dual_alternant_codes() {
    let mut rng = common::rng(13);
    let mut checked = 0;
    for &(q, m, t) in &ALT_PARAMS {
        let emb = embedding(q, m);
        let f = alternant_en_params(q, t).unwrap().f;
        for _ in 0..3 {
            let k = (m as u64 * t) as usize;
            let order = emb.big().q() as usize;
            let n = rng.random_range((k + 1).min(order)..=order);
            let sm = SupportMultiplier::random(emb.big(), n, &mut rng).unwrap();
            let (code, proper) = dual_alternant_code(&sm, t as usize, &emb).unwrap();
            if !proper {
                continue;
            }
            for s in 0..=f.min(k as u64 - 2) {
                let pos: BTreeSet<usize> =
                    index::sample(&mut rng, n, s as usize).into_iter().collect();
                let cs = code.shorten(&pos).code;
                for (r, beta) in strand_values(&cs, (f - s).max(2) as usize) {
                    let bound = en_strand_bound(f, s, r as u64, 1);
                    assert!(
                        BigUint::from(beta) >= bound,
                        "q={q} m={m} t={t} s={s} r={r}: {beta} < {bound}"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= 20, "{checked}");
}

#[test]
fn goppa_bound_is_sound_on_binary_goppa_codes() {
    let mut checked = 0;
    for (m, t, n) in [
        (5usize, 2usize, 32usize),
        (4, 3, 16),
        (5, 2, 24),
        (6, 3, 64),
    ] {
        let spec = FamilySpec::new(Family::GoppaDual, 2, m, t, Some(n), PolyMode::Sqfr).unwrap();
        let emb = spec.embedding().unwrap();
        let f_hat = goppa_en_params(t as u64).unwrap().f_hat;
        for i in 0..3 {
            let mut rng = common::rng(100 + i);
            let code = spec.sample(&emb, &mut rng).unwrap().code;
            for s in [0u64, 1, 2] {
                let pos: BTreeSet<usize> =
                    index::sample(&mut rng, n, s as usize).into_iter().collect();
                let cs = code.shorten(&pos).code;
                let top = (f_hat - s).clamp(2, 4) as usize;
                for (r, beta) in strand_values(&cs, top) {
                    let bound = en_strand_bound(f_hat, s, r as u64, 1);
                    assert!(
                        BigUint::from(beta) >= bound,
                        "m={m} t={t} s={s} r={r}: {beta} < {bound}"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= 20);
}

#[test]
fn parity_closed_form_matches_computation() {
    for q in [2u64, 3] {
        let f = Field::with_order(q).unwrap();
        for k in 3..=8 {
            let code = parity_code(&f, k);
            let strand = linear_strand(&code, k, &StrandOptions::default());
            let d = betti_diagram_reg2(&code, &strand).unwrap();
            let p = closed_form_diagram(ClosedForm::Parity, k).unwrap();
            assert_eq!((d.n, d.k), (p.n, p.k));
            assert_eq!(
                (d.row1, d.row2, d.defects),
                (p.row1, p.row2, p.defects),
                "q={q} k={k}"
            );
        }
    }
}

#[test]
fn grs_closed_form_matches_computation() {
    let f = Field::with_order(16).unwrap();
    let mut rng = common::rng(14);
    for k in 3..=7 {
        let sm = SupportMultiplier::random(&f, 2 * k - 1, &mut rng).unwrap();
        let code = grs_code(&sm, k).unwrap();
        let strand = linear_strand(&code, k, &StrandOptions::default());
        let d = betti_diagram_reg2(&code, &strand).unwrap();
        let p = closed_form_diagram(ClosedForm::GrsCritical, k).unwrap();
        assert_eq!(
            (d.row1, d.row2, d.defects),
            (p.row1, p.row2, p.defects),
            "k={k}"
        );
    }
}

/// MDS codes with `n ≤ 2k−1` have `β_{r−2,r} = 0` for `r ≤ 2k+1−n`.
#[test]
fn grelaz_gate_on_mds_codes() {
    let f = Field::with_order(32).unwrap();
    let mut rng = common::rng(15);
    let mut checked = 0;
    for k in 3..=7 {
        for n in k + 2..=2 * k - 1 {
            let sm = SupportMultiplier::random(&f, n, &mut rng).unwrap();
            let code = grs_code(&sm, k).unwrap();
            let strand = linear_strand(&code, k, &StrandOptions::default());
            let d = betti_diagram_reg2(&code, &strand).unwrap();
            for r in 3..=(2 * k + 1 - n).min(k + 1) {
                assert_eq!(d.row2[r - 3], 0, "[{n},{k}] r={r}");
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

/// Brute-force Varshamov count with big integers.
fn gv_oracle(q: u64, n: u64, k: u64) -> u64 {
    let target = BigUint::from(q).pow((n - k) as u32);
    let mut ball = BigUint::from(0u32);
    let mut d = 0;
    while d < n {
        let term = num_bigint::BigUint::from(q - 1).pow(d as u32) * big_binom(n - 1, d);
        if &ball + &term >= target {
            break;
        }
        ball += term;
        d += 1;
    }
    d
}

fn big_binom(n: u64, r: u64) -> BigUint {
    (0..r).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn gv_distance_matches_counting_oracle() {
    let mut rng = common::rng(16);
    for _ in 0..200 {
        let q = [2u64, 3, 4, 16][rng.random_range(0..4)];
        let n = rng.random_range(2..300);
        let k = rng.random_range(0..=n);
        assert_eq!(
            gv_distance(q, n, k),
            gv_oracle(q, n, k),
            "q={q} n={n} k={k}"
        );
    }
    // Nonincreasing in k at fixed n.
    for n in [50u64, 400] {
        let d: Vec<u64> = (0..=n).map(|k| gv_distance(2, n, k)).collect();
        assert!(d.windows(2).all(|w| w[0] >= w[1]));
    }
}

/// `H_q^{-1}` on `[0, 1−1/q]` by bisection on the forward entropy.
fn inverse(q: f64, y: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0 - 1.0 / q);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if entropy(q, mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[test]
fn entropy_thresholds_are_sign_changes() {
    for q in [2u64, 3, 4] {
        let qf = q as f64;
        let (r1, r2) = entropy_threshold_rates(q);
        let g1 = |r: f64| inverse(qf, 1.0 - r) - r * (1.0 - r);
        let g2 = |r: f64| inverse(qf, r) - r * r;
        assert!(g1(r1 - 1e-4) > 0.0 && g1(r1 + 1e-4) < 0.0, "q={q} R1={r1}");
        assert!(g2(r2 - 1e-4) > 0.0 && g2(r2 + 1e-4) < 0.0, "q={q} R2={r2}");
    }
    let (r1, r2) = entropy_threshold_rates(2);
    assert!((0.276..=0.278).contains(&r1) && (0.140..=0.142).contains(&r2));
    let h = entropy(2.0, 0.11);
    assert!((h - (-(0.11f64).log2() * 0.11 - 0.89f64.log2() * 0.89)).abs() < 1e-12);
}

#[test]
fn phi_needs_m_above_e() {
    assert!(PhiMatrix::new(2, 5, 2).is_err());
    assert!(PhiMatrix::new(2, 5, 3).is_ok());
}
