//! Decision procedures built on the linear strand: the β-threshold test,
//! the shortened test, calibration of reference values on sampled families,
//! the complexity estimate `κ`, the Classic McEliece audit and a
//! minimum-distance baseline.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{goppa_en_params, gv_distance};
use crate::codes::{CodeError, Distance, FamilySpec, LinearCode};
use crate::syzygy::{binomial, linear_strand, phi_index, Refusal, StrandOptions};

/// Linear-algebra exponent used by [`kappa_estimate`] unless overridden.
pub const OMEGA: f64 = 2.372;

/// The five Classic McEliece parameter sets `(n, m, t)`.
pub const CLASSIC_MCELIECE: [(u64, u64, u64); 5] = [
    (3488, 12, 64),
    (4608, 13, 96),
    (6688, 13, 128),
    (6960, 13, 119),
    (8192, 13, 128),
];

#[derive(Debug, Error)]
pub enum DistinguisherError {
    #[error("budget refusal: {0}")]
    Budget(Refusal),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

pub type Result<T> = std::result::Result<T, DistinguisherError>;

/// Per-sample generator: stream `index` of the ChaCha8 generator seeded by
/// `seed`, so sampled values do not depend on scheduling.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `⌈k(k+1)/r − (β*−1)/C(k−1,r−2)⌉`: from this length on, random codes are
/// expected below `β*` in degree `r`.
pub fn basic_threshold(k: u64, r: u64, beta_star: u64) -> i64 {
    assert!(
        r >= 2 && beta_star >= 1 && k >= 1,
        "basic_threshold needs r ≥ 2, β* ≥ 1"
    );
    let c = binomial(k - 1, r - 2);
    let num = BigInt::from(k * (k + 1)) * &c - BigInt::from(r) * (beta_star - 1);
    let den = BigInt::from(r) * c;
    ceil_div(&num, &den).to_i64().expect("threshold fits i64")
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, rem) = (a / b, a % b);
    if !rem.is_zero() && (rem.is_positive() == b.is_positive()) {
        q + 1
    } else {
        q
    }
}

/// Largest `s` with `(k−s)(k−s+1)/(n−s) < r*−s`, if any.
pub fn max_admissible_shortening(n: u64, k: u64, r_star: u64) -> Option<u64> {
    let top = k.min(r_star.saturating_sub(1));
    (0..=top)
        .rev()
        .find(|&s| ((k - s) * (k - s + 1)) < (r_star - s) * (n - s))
}

/// The two heuristic gates at `(n_s, k_s)` with GV estimates of `d_s`, `d_s⊥`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Conditions {
    pub ratio: f64,
    pub d_gv: u64,
    pub d_dual_gv: u64,
    /// `d_s > k_s + 1 − ratio`.
    pub cond1: bool,
    pub margin1: f64,
    /// `d_s⊥ > ratio`.
    pub cond2: bool,
    pub margin2: f64,
}

pub fn heuristic_conditions(q: u64, n_s: u64, k_s: u64) -> Conditions {
    let ratio = (k_s * (k_s + 1)) as f64 / n_s as f64;
    let d_gv = gv_distance(q, n_s, k_s);
    let d_dual_gv = gv_distance(q, n_s, n_s - k_s);
    let margin1 = d_gv as f64 - (k_s as f64 + 1.0 - ratio);
    let margin2 = d_dual_gv as f64 - ratio;
    Conditions {
        ratio,
        d_gv,
        d_dual_gv,
        cond1: margin1 > 0.0,
        margin1,
        cond2: margin2 > 0.0,
        margin2,
    }
}

/// `log₂` of a positive integer, accurate to double precision.
fn log2_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().expect("small").log2();
    }
    let shift = bits - 60;
    let top: BigInt = x >> shift;
    top.to_f64().expect("60 bits").log2() + shift as f64
}

/// `ind(φ_i)` clamped at 0; zero for `i < 2`.
fn ind_plus(n: u64, k: u64, i: u64) -> BigInt {
    if i < 2 {
        return BigInt::zero();
    }
    phi_index(n, k, i).max(BigInt::zero())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KappaTerm {
    pub i: u64,
    /// `log₂` of the term; `None` when it is 0.
    pub log2: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexityEstimate {
    pub n_s: u64,
    pub k_s: u64,
    pub omega: f64,
    pub terms: Vec<KappaTerm>,
    pub dominating: Option<u64>,
    pub log2_kappa: f64,
    /// Set when `d_s⊥ > ratio` fails, i.e. the estimate lacks heuristic support.
    pub unsupported: bool,
}

/// `κ = Σ_{2 ≤ i ≤ ⌊ratio⌋+1} max(k_s·ind⁺(φ_{i−1}), C(k_s+1,2)·ind⁺(φ_{i−2}))^ω`,
/// summed in `log₂` space.
pub fn kappa_estimate(q: u64, n_s: u64, k_s: u64, omega: f64) -> ComplexityEstimate {
    let top = (k_s * (k_s + 1)) / n_s + 1;
    let quad = BigInt::from(k_s * (k_s + 1) / 2);
    let mut terms = Vec::new();
    for i in 2..=top {
        let a = BigInt::from(k_s) * ind_plus(n_s, k_s, i - 1);
        let b = &quad * ind_plus(n_s, k_s, i.saturating_sub(2));
        let m = a.max(b);
        let log2 = (!m.is_zero()).then(|| omega * log2_big(&m));
        terms.push(KappaTerm { i, log2 });
    }
    let max = terms
        .iter()
        .filter_map(|t| t.log2)
        .fold(f64::NEG_INFINITY, f64::max);
    let dominating = terms.iter().find(|t| t.log2 == Some(max)).map(|t| t.i);
    let log2_kappa = if max.is_finite() {
        max + terms
            .iter()
            .filter_map(|t| t.log2)
            .map(|l| (l - max).exp2())
            .sum::<f64>()
            .log2()
    } else {
        f64::NEG_INFINITY
    };
    ComplexityEstimate {
        n_s,
        k_s,
        omega,
        terms,
        dominating,
        log2_kappa,
        unsupported: !heuristic_conditions(q, n_s, k_s).cond2,
    }
}

/// Leading exponent `ω R²/(1−R) · (log_q log_q n)³/(log_q n)² · n` of
/// `log_q κ`, without the `o(1)` term.
pub fn asymptotic_exponent(q: f64, rate: f64, n: f64, omega: f64) -> f64 {
    assert!(rate > 0.0 && rate < 1.0, "rate must lie in (0, 1)");
    let lq = n.log(q);
    omega * rate * rate / (1.0 - rate) * lq.log(q).powi(3) / (lq * lq) * n
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McElieceParamSet {
    pub n: u64,
    pub m: u64,
    pub t: u64,
    pub k: u64,
    pub r_star: u64,
    pub s: u64,
    pub n_s: u64,
    pub k_s: u64,
    pub conditions: Conditions,
    pub log2_kappa: f64,
    /// Printed in parentheses: `cond2` fails.
    pub parenthesized: bool,
}

/// `r* = f̂`, maximal admissible `s` and the resulting estimates.
pub fn mceliece_audit(params: &[(u64, u64, u64)]) -> Result<Vec<McElieceParamSet>> {
    params
        .iter()
        .map(|&(n, m, t)| {
            let k = m * t;
            let r_star = goppa_en_params(t)
                .map_err(|e| DistinguisherError::Config(e.to_string()))?
                .f_hat;
            let s = max_admissible_shortening(n, k, r_star).ok_or_else(|| {
                DistinguisherError::Config(format!("({n},{m},{t}): no admissible shortening"))
            })?;
            let (n_s, k_s) = (n - s, k - s);
            let conditions = heuristic_conditions(2, n_s, k_s);
            let kappa = kappa_estimate(2, n_s, k_s, OMEGA);
            Ok(McElieceParamSet {
                n,
                m,
                t,
                k,
                r_star,
                s,
                n_s,
                k_s,
                parenthesized: !conditions.cond2,
                conditions,
                log2_kappa: kappa.log2_kappa,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Special,
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub decision: Decision,
    /// `β_{r−1,r}` for strand tests, `d` for the distance baseline.
    pub statistic: u64,
    pub statistic_name: String,
    /// Human-readable rule, e.g. `β ≥ 80` or `β > 0`.
    pub rule: String,
    pub degree: Option<usize>,
    pub shortened_positions: Vec<usize>,
    /// `β > 0`, reported separately when a `β*` rule decided.
    pub positive: Option<bool>,
    pub cond1: Option<bool>,
    pub cond2: Option<bool>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct DistinguisherConfig {
    pub r_star: usize,
    pub s: usize,
    /// `β*_{r−1,r}` at `r = r* − s`, when calibrated.
    pub beta_star: Option<u64>,
    pub seed: u64,
    pub strand: StrandOptions,
}

/// Shortens at `cfg.s` seeded uniform positions and tests degree
/// `r = r* − s`: special iff `β ≥ β*` when `β*` is known, else iff `β > 0`.
pub fn classify(code: &LinearCode, cfg: &DistinguisherConfig) -> Result<Verdict> {
    let (n, k) = (code.n(), code.k());
    if cfg.s > k || cfg.r_star < cfg.s + 2 || cfg.r_star - cfg.s > k - cfg.s {
        return Err(DistinguisherError::Config(format!(
            "need 2 ≤ r*−s ≤ k−s, got r*={}, s={}, k={k}",
            cfg.r_star, cfg.s
        )));
    }
    let r = cfg.r_star - cfg.s;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let positions: BTreeSet<usize> = index::sample(&mut rng, n, cfg.s).into_iter().collect();
    let shortened = code.shorten(&positions);
    let cs = shortened.code;
    let strand = linear_strand(&cs, r, &cfg.strand);
    let beta = match strand.beta(r) {
        Some(b) => b,
        None => {
            let refusal = strand
                .refusal
                .expect("an unfinished strand carries its refusal");
            return Err(DistinguisherError::Budget(refusal));
        }
    };
    let mut warnings = Vec::new();
    if shortened.excess {
        warnings.push(format!(
            "shortened dimension {} exceeds k − s = {}",
            cs.k(),
            shortened.expected_k
        ));
    }
    let (n_s, k_s) = (cs.n() as u64, cs.k() as u64);
    let conds = (k_s > 0).then(|| heuristic_conditions(code.q() as u64, n_s, k_s));
    let (decision, rule) = match cfg.beta_star {
        Some(bs) => {
            if bs >= 1 && (n_s as i64) < basic_threshold(k_s, r as u64, bs) {
                warnings.push(format!(
                    "indistinguishable at this degree: n = {n_s} is below the threshold {}",
                    basic_threshold(k_s, r as u64, bs)
                ));
            }
            (beta >= bs, format!("β ≥ {bs}"))
        }
        None => (beta > 0, "β > 0".to_string()),
    };
    Ok(Verdict {
        decision: if decision {
            Decision::Special
        } else {
            Decision::Random
        },
        statistic: beta,
        statistic_name: format!("beta_{{{},{}}}", r - 1, r),
        rule,
        degree: Some(r),
        shortened_positions: positions.into_iter().collect(),
        positive: cfg.beta_star.map(|_| beta > 0),
        cond1: conds.as_ref().map(|c| c.cond1),
        cond2: conds.as_ref().map(|c| c.cond2),
        warnings,
    })
}

/// Binary Goppa codes have designed distance `2t+1`: special iff `d ≥ 2t+1`.
pub fn distance_distinguisher(code: &LinearCode, t: usize) -> Result<Verdict> {
    if code.q() != 2 {
        return Err(DistinguisherError::Config(
            "the distance baseline is binary only".into(),
        ));
    }
    let cap = 2 * t + 1;
    let d = code.min_distance(Some(cap))?;
    let (special, value) = match d {
        Distance::AtLeast(c) => (true, c as u64),
        Distance::Exact(v) => (v >= cap, v as u64),
    };
    Ok(Verdict {
        decision: if special {
            Decision::Special
        } else {
            Decision::Random
        },
        statistic: value,
        statistic_name: "min_distance".into(),
        rule: format!("d ≥ {cap}"),
        degree: None,
        shortened_positions: Vec::new(),
        positive: None,
        cond1: None,
        cond2: None,
        warnings: Vec::new(),
    })
}

/// Consensus of one strand entry over all samples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Consensus {
    pub r: usize,
    /// Most frequent value (smallest among ties).
    pub value: u64,
    pub min: u64,
    pub max: u64,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub spec: FamilySpec,
    pub s: usize,
    pub seed: u64,
    pub strands: Vec<Vec<u64>>,
    pub r_max: Vec<Option<usize>>,
    pub consensus: Vec<Consensus>,
    pub all_agree: bool,
}

impl Calibration {
    /// `β*_{r−1,r}`.
    pub fn beta_star(&self, r: usize) -> Option<u64> {
        self.consensus.iter().find(|c| c.r == r).map(|c| c.value)
    }
}

/// Strands up to `max_degree` of `samples` family members, each shortened
/// at `s` uniform positions; sample `i` uses [`sample_rng`]`(seed, i)`.
pub fn calibrate(
    spec: &FamilySpec,
    samples: usize,
    max_degree: usize,
    s: usize,
    seed: u64,
    opts: &StrandOptions,
) -> Result<Calibration> {
    if samples == 0 {
        return Err(DistinguisherError::Config(
            "need at least one sample".into(),
        ));
    }
    if s > spec.k() {
        return Err(DistinguisherError::Config(format!(
            "s={s} exceeds k={}",
            spec.k()
        )));
    }
    let emb = spec.embedding()?;
    let runs: Vec<Result<(Vec<u64>, Option<usize>)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let sample = spec.sample(&emb, &mut rng)?;
            let positions: BTreeSet<usize> =
                index::sample(&mut rng, spec.n, s).into_iter().collect();
            let cs = sample.code.shorten(&positions).code;
            let strand = linear_strand(&cs, max_degree, opts);
            if let Some(refusal) = strand.refusal {
                return Err(DistinguisherError::Budget(refusal));
            }
            let r_max = strand.r_max();
            Ok((strand.betas, r_max))
        })
        .collect();
    let mut strands = Vec::with_capacity(samples);
    let mut r_max = Vec::with_capacity(samples);
    for run in runs {
        let (b, r) = run?;
        strands.push(b);
        r_max.push(r);
    }
    let len = strands.iter().map(Vec::len).max().unwrap_or(0);
    let consensus: Vec<Consensus> = (0..len)
        .map(|i| {
            let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
            for st in &strands {
                // Short strands vanished earlier.
                *counts.entry(st.get(i).copied().unwrap_or(0)).or_default() += 1;
            }
            let value = counts
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                .map(|(&v, _)| v)
                .expect("samples");
            let min = *counts.keys().next().expect("samples");
            let max = *counts.keys().next_back().expect("samples");
            Consensus {
                r: i + 2,
                value,
                min,
                max,
                agree: min == max,
            }
        })
        .collect();
    let all_agree = consensus.iter().all(|c| c.agree);
    Ok(Calibration {
        spec: spec.clone(),
        s,
        seed,
        strands,
        r_max,
        consensus,
        all_agree,
    })
}
