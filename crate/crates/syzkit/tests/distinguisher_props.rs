//! Contingent bound, thresholds, κ and the verdict contracts.

mod common;

use rand::Rng;
use syzkit::codes::{Family, FamilySpec, LinearCode};
use syzkit::distinguisher::{
    basic_threshold, calibrate, classify, distance_distinguisher, kappa_estimate, sample_rng,
    Decision, DistinguisherConfig, OMEGA,
};
use syzkit::gf::{Field, PolyMode};
use syzkit::syzygy::{linear_strand, phi_index, square_dim, StrandOptions};

#[test]
fn strand_dominates_the_phi_index_on_regularity_two_codes() {
    let mut rng = common::rng(21);
    let mut checked = 0;
    while checked < 40 {
        let q = [2u64, 3, 4][checked % 3];
        let f = Field::with_order(q).unwrap();
        let k = rng.random_range(3..=8);
        let n = rng.random_range(k + 2..=k * (k + 1) / 2);
        let code = common::random_code(&f, n, k, &mut rng);
        if square_dim(&code) != n {
            continue;
        }
        let s = linear_strand(&code, k, &StrandOptions::default());
        for r in 2..=k {
            let ind = phi_index(n as u64, k as u64, r as u64);
            assert!(
                num_bigint::BigInt::from(s.beta(r).unwrap()) >= ind,
                "[{n},{k}]_{q} r={r}"
            );
        }
        checked += 1;
    }
}

fn goppa_444(n: usize) -> FamilySpec {
    FamilySpec::new(Family::GoppaDual, 4, 4, 4, Some(n), PolyMode::Irr).unwrap()
}

fn config(seed: u64) -> DistinguisherConfig {
    DistinguisherConfig {
        r_star: 3,
        s: 0,
        beta_star: Some(80),
        seed,
        strand: StrandOptions::default(),
    }
}

/// With `β* = 80` at degree 3 the threshold is `n = 86`: both classes are
/// told apart there, and one position lower random codes look special too.
#[test]
fn threshold_separates_the_444_family() {
    let n = basic_threshold(16, 3, 80) as usize;
    assert_eq!(n, 86);
    let f4 = Field::with_order(4).unwrap();
    let mut right = 0;
    for i in 0..20u64 {
        let spec = goppa_444(n);
        let emb = spec.embedding().unwrap();
        let c = spec.sample(&emb, &mut sample_rng(31, i)).unwrap().code;
        right += usize::from(classify(&c, &config(i)).unwrap().decision == Decision::Special);
        let r = LinearCode::random(&f4, n, 16, &mut sample_rng(32, i)).unwrap();
        let v = classify(&r, &config(i)).unwrap();
        right += usize::from(v.decision == Decision::Random);
        assert!(v.warnings.is_empty(), "{:?}", v.warnings);
    }
    assert!(right >= 38, "{right}/40 correct at n = {n}");
    let mut special = 0;
    for i in 0..10u64 {
        let r = LinearCode::random(&f4, n - 1, 16, &mut sample_rng(33, i)).unwrap();
        let v = classify(&r, &config(i)).unwrap();
        special += usize::from(v.decision == Decision::Special);
        assert!(v.warnings.iter().any(|w| w.contains("indistinguishable")));
    }
    assert!(
        special >= 9,
        "random codes below the threshold: {special}/10 special"
    );
}

#[test]
fn verdict_does_not_depend_on_shortened_positions() {
    for (family, q, m, t, n, r_star, s) in [
        (
            Family::GoppaDual,
            2u64,
            6usize,
            3usize,
            64usize,
            7usize,
            3usize,
        ),
        (Family::AltDual, 2, 5, 3, 32, 5, 1),
    ] {
        let spec = FamilySpec::new(family, q, m, t, Some(n), PolyMode::Irr).unwrap();
        let emb = spec.embedding().unwrap();
        for i in 0..3 {
            let c = spec.sample(&emb, &mut sample_rng(41, i)).unwrap().code;
            let verdicts: Vec<(Decision, u64)> = (0..5)
                .map(|seed| {
                    let cfg = DistinguisherConfig {
                        r_star,
                        s,
                        beta_star: None,
                        seed,
                        strand: StrandOptions::default(),
                    };
                    let v = classify(&c, &cfg).unwrap();
                    (v.decision, v.statistic)
                })
                .collect();
            assert!(
                verdicts.iter().all(|v| v.0 == Decision::Special),
                "{verdicts:?}"
            );
        }
    }
}

#[test]
fn kappa_is_monotone_in_dimension() {
    for n_s in [200u64, 600] {
        let mut last = f64::NEG_INFINITY;
        for k_s in 2..n_s / 2 {
            let l = kappa_estimate(2, n_s, k_s, OMEGA).log2_kappa;
            assert!(l >= last, "n_s={n_s} k_s={k_s}: {l} < {last}");
            last = l;
        }
        assert!(last.is_finite());
    }
}

#[test]
fn distance_baseline_on_binary_goppa_codes() {
    let spec = FamilySpec::new(Family::GoppaDual, 2, 5, 2, Some(32), PolyMode::Irr).unwrap();
    let emb = spec.embedding().unwrap();
    let f2 = Field::prime(2).unwrap();
    let (mut goppa, mut random) = (0, 0);
    for i in 0..20 {
        let c = spec
            .sample(&emb, &mut sample_rng(51, i))
            .unwrap()
            .code
            .dual();
        goppa += usize::from(distance_distinguisher(&c, 2).unwrap().decision == Decision::Special);
        let r = LinearCode::random(&f2, 32, c.k(), &mut sample_rng(52, i)).unwrap();
        random += usize::from(distance_distinguisher(&r, 2).unwrap().decision == Decision::Special);
    }
    assert_eq!(goppa, 20);
    assert!(random <= 10, "{random}/20 random codes reach d ≥ 5");
}

#[test]
fn calibration_is_reproducible_and_consistent() {
    let spec = FamilySpec::new(Family::GoppaDual, 4, 4, 4, Some(256), PolyMode::Irr).unwrap();
    let a = calibrate(&spec, 5, 4, 0, 61, &StrandOptions::default()).unwrap();
    let b = calibrate(&spec, 5, 4, 0, 61, &StrandOptions::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        (a.beta_star(2), a.beta_star(3), a.beta_star(4)),
        (Some(40), Some(80), Some(12))
    );
}

/// Full strand of one `Gop⊥_{2,6,3}` sample; about two minutes.
#[test]
#[ignore]
fn goppa_2_6_3_full_strand() {
    let spec = FamilySpec::new(Family::GoppaDual, 2, 6, 3, None, PolyMode::Irr).unwrap();
    let cal = calibrate(&spec, 1, 18, 0, 1, &StrandOptions::default()).unwrap();
    assert_eq!(
        cal.strands[0][..8],
        [109, 886, 3230, 4624, 1020, 288, 42, 0]
    );
    assert_eq!(cal.r_max[0], Some(8));
}
