//! Closed forms: Eagon–Northcott parameters and strand lower bounds for dual
//! alternant and binary Goppa codes, the matrix `Φ` whose 2×2 minors lie in
//! `I₂`, explicit Eagon–Northcott syzygies, Gilbert–Varshamov distances,
//! entropy thresholds and closed-form Betti diagrams.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::codes::SupportMultiplier;
use crate::gf::Field;
use crate::linalg::Matrix;
use crate::syzygy::{binomial, phi_index, BettiDiagram};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("invalid parameters: {0}")]
    Parameters(String),
}

pub type Result<T> = std::result::Result<T, BoundsError>;

fn ubinom(n: u64, r: u64) -> BigUint {
    binomial(n, r)
        .to_biguint()
        .expect("binomials are non-negative")
}

/// `⌊log_b(x)⌋` for `x ≥ 1`, exact.
fn ilog(b: u64, x: u64) -> u32 {
    x.ilog(b)
}

/// `e = ⌊log_q(t−1)⌋`, `f = (e+1)t − (q^{e+1}−1)/(q−1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnParams {
    pub q: u64,
    pub t: u64,
    pub e: u32,
    pub f: u64,
}

pub fn alternant_en_params(q: u64, t: u64) -> Result<EnParams> {
    if t < 2 || q < 2 {
        return Err(BoundsError::Parameters(format!(
            "need q ≥ 2 and t ≥ 2, got q={q}, t={t}"
        )));
    }
    let e = ilog(q, t - 1);
    let geometric = (q.pow(e + 1) - 1) / (q - 1);
    let f = (e as u64 + 1) * t - geometric;
    Ok(EnParams { q, t, e, f })
}

/// `ê = ⌊log₄(2t−1)⌋`, `f̂ = (2ê+2)t − (4^{ê+1}−1)/3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GoppaEnParams {
    pub t: u64,
    pub e_hat: u32,
    pub f_hat: u64,
}

pub fn goppa_en_params(t: u64) -> Result<GoppaEnParams> {
    if t < 1 {
        return Err(BoundsError::Parameters("need t ≥ 1".into()));
    }
    let e_hat = ilog(4, 2 * t - 1);
    let f_hat = (2 * e_hat as u64 + 2) * t - (4u64.pow(e_hat + 1) - 1) / 3;
    Ok(GoppaEnParams { t, e_hat, f_hat })
}

/// `m·(r−1)·C(f−s, r)`; zero when `s > f` or `r < 1`.
pub fn en_strand_bound(f: u64, s: u64, r: u64, m: u64) -> BigUint {
    if s > f || r < 1 {
        return BigUint::zero();
    }
    BigUint::from(m) * (r - 1) * ubinom(f - s, r)
}

/// `m(r−1)(C(f,r) − C(f−(t−1),r))` for the unshortened code.
pub fn improved_alternant_bound(m: u64, q: u64, t: u64, r: u64) -> Result<BigUint> {
    let p = alternant_en_params(q, t)?;
    if r < 1 {
        return Ok(BigUint::zero());
    }
    let low = if p.f >= t - 1 {
        ubinom(p.f - (t - 1), r)
    } else {
        BigUint::zero()
    };
    Ok(BigUint::from(m) * (r - 1) * (ubinom(p.f, r) - low))
}

/// Variable `X^{(u)}_a`, evaluated at position `i` as `(y_i x_i^a)^{q^u}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PhiVar {
    pub u: u32,
    pub a: u64,
}

/// The 2×f matrix `Φ` of linear forms. Block `w = 0..=e` uses Frobenius
/// level `u = e−w` and has columns `(X^{(u)}_a, X^{(u)}_{a+q^w})` for
/// `0 ≤ a < t − q^w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiMatrix {
    pub q: u64,
    pub t: u64,
    pub m: u32,
    pub e: u32,
    pub block_widths: Vec<u64>,
    pub columns: Vec<[PhiVar; 2]>,
}

impl PhiMatrix {
    pub fn new(q: u64, t: u64, m: u32) -> Result<PhiMatrix> {
        let p = alternant_en_params(q, t)?;
        if p.e >= m {
            return Err(BoundsError::Parameters(format!(
                "e={} needs m > e, got m={m}",
                p.e
            )));
        }
        let mut block_widths = Vec::new();
        let mut columns = Vec::new();
        for w in 0..=p.e {
            let u = p.e - w;
            let shift = q.pow(w);
            block_widths.push(t - shift);
            for a in 0..t - shift {
                columns.push([PhiVar { u, a }, PhiVar { u, a: a + shift }]);
            }
        }
        debug_assert_eq!(columns.len() as u64, p.f);
        Ok(PhiMatrix {
            q,
            t,
            m,
            e: p.e,
            block_widths,
            columns,
        })
    }

    pub fn f(&self) -> usize {
        self.columns.len()
    }

    /// Columns are independent as pairs of linear forms in the `m·t`
    /// variables. The incidence matrix has 0/1 entries, so full rank over
    /// GF(2) implies full rank over every field.
    pub fn columns_independent(&self) -> bool {
        let nvars = (self.m as u64 * self.t) as usize;
        let index = |v: PhiVar| (v.u as u64 * self.t + v.a) as usize;
        let gf2 = Field::prime(2).expect("GF(2)");
        let mut inc = Matrix::zeros(&gf2, self.f(), 2 * nvars);
        for (c, [top, bottom]) in self.columns.iter().enumerate() {
            inc.set(c, index(*top), 1);
            inc.set(c, nvars + index(*bottom), 1);
        }
        inc.rank() == self.f()
    }

    /// Evaluation vectors over GF(q^m) of every column, as `[top, bottom]`.
    pub fn evaluate(&self, sm: &SupportMultiplier) -> Result<Vec<[Vec<u32>; 2]>> {
        let field = sm.field();
        if (field.q() as u64) != self.q.pow(self.m) {
            return Err(BoundsError::Parameters(format!(
                "support field has order {}, expected {}^{}",
                field.q(),
                self.q,
                self.m
            )));
        }
        let eval = |v: PhiVar| -> Vec<u32> {
            let frob = self.q.pow(v.u);
            sm.x()
                .iter()
                .zip(sm.y())
                .map(|(&x, &y)| field.pow(field.mul(y, field.pow(x, v.a)), frob))
                .collect()
        };
        Ok(self
            .columns
            .iter()
            .map(|&[a, b]| [eval(a), eval(b)])
            .collect())
    }
}

/// `Φ` for the dual alternant code of `sm` with its evaluation vectors.
pub fn build_phi(
    sm: &SupportMultiplier,
    q: u64,
    t: u64,
    m: u32,
) -> Result<(PhiMatrix, Vec<[Vec<u32>; 2]>)> {
    let phi = PhiMatrix::new(q, t, m)?;
    let eval = phi.evaluate(sm)?;
    Ok((phi, eval))
}

/// True iff every evaluated 2×2 minor is the zero vector.
pub fn verify_minors_vanish(field: &Field, eval: &[[Vec<u32>; 2]]) -> bool {
    for i in 0..eval.len() {
        for j in i + 1..eval.len() {
            let ([ti, bi], [tj, bj]) = (&eval[i], &eval[j]);
            for pos in 0..ti.len() {
                let minor = field.sub(field.mul(ti[pos], bj[pos]), field.mul(tj[pos], bi[pos]));
                if minor != 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// One term `±x_i·Z^{(j)}_J` or `±x'_i·Z^{(j)}_J` of an explicit syzygy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnTerm {
    pub negative: bool,
    /// Bottom row `x'` of `Φ` instead of the top row `x`.
    pub bottom: bool,
    pub column: usize,
    pub z_j: usize,
    pub z_indices: Vec<usize>,
}

/// `s^{(j)}_{r;I}`: the minor of columns `I` for `r = 2`, otherwise a
/// linear form in the degree-`(r−1)` generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnSyzygy {
    pub r: usize,
    pub j: usize,
    pub indices: Vec<usize>,
    pub terms: Vec<EnTerm>,
}

/// All `(r−1)·C(f,r)` explicit syzygies of degree `r`, ordered by `j`
/// then lexicographically by `I` (0-based columns).
pub fn en_explicit_syzygies(f: usize, r: usize) -> Result<Vec<EnSyzygy>> {
    if r < 2 || r > f {
        return Err(BoundsError::Parameters(format!(
            "need 2 ≤ r ≤ f, got r={r}, f={f}"
        )));
    }
    let sets = combinations(f, r);
    let mut out = Vec::with_capacity((r - 1) * sets.len());
    for j in 1..r {
        for set in &sets {
            let mut terms = Vec::new();
            if r >= 3 {
                for (u, &col) in set.iter().enumerate() {
                    let rest: Vec<usize> = set.iter().copied().filter(|&c| c != col).collect();
                    // Z^{(j)}_{r−1} exists for 1 ≤ j ≤ r−2.
                    for (bottom, zj) in [(false, j), (true, j - 1)] {
                        if zj >= 1 && zj <= r - 2 {
                            terms.push(EnTerm {
                                negative: u % 2 == 1,
                                bottom,
                                column: col,
                                z_j: zj,
                                z_indices: rest.clone(),
                            });
                        }
                    }
                }
            }
            out.push(EnSyzygy {
                r,
                j,
                indices: set.clone(),
                terms,
            });
        }
    }
    Ok(out)
}

fn combinations(f: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    if r > f {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r).rev().find(|&i| cur[i] < f - r + i) else {
            return out;
        };
        cur[i] += 1;
        for l in i + 1..r {
            cur[l] = cur[l - 1] + 1;
        }
    }
}

/// Checks `s_r(s_{r−1}) = 0` at `trials` uniformly random points
/// `(x, x') ∈ F^{2f}`: the composite is a matrix of polynomials in `x, x'`,
/// so a nonzero entry survives a random point with probability
/// `≥ 1 − 2/|F|`.
pub fn verify_en_syzygies<R: Rng + ?Sized>(
    field: &Field,
    f: usize,
    r: usize,
    trials: usize,
    rng: &mut R,
) -> Result<bool> {
    if r < 3 || r > f {
        return Err(BoundsError::Parameters(format!(
            "need 3 ≤ r ≤ f, got r={r}, f={f}"
        )));
    }
    let upper = en_explicit_syzygies(f, r)?;
    let lower = en_explicit_syzygies(f, r - 1)?;
    let lower_index: HashMap<(usize, &[usize]), usize> = lower
        .iter()
        .enumerate()
        .map(|(i, s)| ((s.j, s.indices.as_slice()), i))
        .collect();
    let lower_lower = (r >= 4)
        .then(|| en_explicit_syzygies(f, r - 2))
        .transpose()?;
    for _ in 0..trials {
        let x: Vec<u32> = (0..f).map(|_| field.random(rng)).collect();
        let xp: Vec<u32> = (0..f).map(|_| field.random(rng)).collect();
        let su = level_matrix(field, &upper, &lower_index, lower.len(), &x, &xp);
        let sl = match &lower_lower {
            None => Matrix::from_fn(field, lower.len(), 1, |i, _| {
                let [a, b] = [lower[i].indices[0], lower[i].indices[1]];
                field.sub(field.mul(x[a], xp[b]), field.mul(xp[a], x[b]))
            }),
            Some(ll) => {
                let idx: HashMap<(usize, &[usize]), usize> = ll
                    .iter()
                    .enumerate()
                    .map(|(i, s)| ((s.j, s.indices.as_slice()), i))
                    .collect();
                level_matrix(field, &lower, &idx, ll.len(), &x, &xp)
            }
        };
        if !su.mul(&sl).expect("compatible levels").is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn level_matrix(
    field: &Field,
    rows: &[EnSyzygy],
    col_index: &HashMap<(usize, &[usize]), usize>,
    cols: usize,
    x: &[u32],
    xp: &[u32],
) -> Matrix {
    let mut m = Matrix::zeros(field, rows.len(), cols);
    for (i, s) in rows.iter().enumerate() {
        for term in &s.terms {
            let c = col_index[&(term.z_j, term.z_indices.as_slice())];
            let v = if term.bottom {
                xp[term.column]
            } else {
                x[term.column]
            };
            let v = if term.negative { field.neg(v) } else { v };
            m.set(i, c, field.add(m.get(i, c), v));
        }
    }
    m
}

/// Gilbert–Varshamov distance: the largest `d` with
/// `Σ_{i=0}^{d−1} C(n−1,i)(q−1)^i < q^{n−k}`, the variant that fits the
/// published audit table.
pub fn gv_distance(q: u64, n: u64, k: u64) -> u64 {
    assert!(
        q >= 2 && n >= 1 && k <= n,
        "gv_distance needs q ≥ 2, n ≥ 1, k ≤ n"
    );
    let target = BigUint::from(q).pow((n - k) as u32);
    let mut sum = BigUint::zero();
    // term = C(n−1, i)(q−1)^i
    let mut term = BigUint::one();
    let mut d = 0;
    for i in 0..n {
        sum += &term;
        if sum >= target {
            break;
        }
        d = i + 1;
        term = term * (n - 1 - i) * (q - 1) / (i + 1);
    }
    d
}

/// `q`-ary entropy on `[0, 1−1/q]`.
pub fn entropy(q: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return (q - 1.0).log(q);
    }
    x * (q - 1.0).log(q) - x * x.log(q) - (1.0 - x) * (1.0 - x).log(q)
}

/// `H_q^{-1}(y)` on `[0, 1−1/q]` by bisection.
pub fn entropy_inverse(q: f64, y: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0 - 1.0 / q);
    if y >= 1.0 {
        return hi;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if entropy(q, mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest rates below which `H_q^{-1}(1−R) > R(1−R)` and
/// `H_q^{-1}(R) > R²` hold, each to `10⁻⁶`.
pub fn entropy_threshold_rates(q: u64) -> (f64, f64) {
    let q = q as f64;
    let r1 = first_crossing(|r| entropy_inverse(q, 1.0 - r) - r * (1.0 - r));
    let r2 = first_crossing(|r| entropy_inverse(q, r) - r * r);
    (r1, r2)
}

/// First sign change of `g` on `(0, 1)`, positive near 0.
fn first_crossing(g: impl Fn(f64) -> f64) -> f64 {
    let steps = 1000;
    let mut lo = 1e-9;
    let mut hi = 1.0;
    for i in 1..steps {
        let r = i as f64 / steps as f64;
        if g(r) <= 0.0 {
            hi = r;
            break;
        }
        lo = r;
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    /// The `[k+1, k]` MDS code.
    Parity,
    /// A `[2k−1, k]` GRS code.
    GrsCritical,
}

/// Predicted diagram of a parity or critical GRS code. Field-independent,
/// so `q` is recorded as 0.
pub fn closed_form_diagram(kind: ClosedForm, k: usize) -> Result<BettiDiagram> {
    if k < 3 {
        return Err(BoundsError::Parameters(format!("need k ≥ 3, got {k}")));
    }
    let ku = k as u64;
    let val = |b: BigInt| b.to_u64().expect("diagram entries fit u64");
    let (n, row1, row2): (usize, Vec<u64>, Vec<u64>) = match kind {
        ClosedForm::Parity => {
            let row1 = (2..=ku)
                .map(|r| {
                    val(BigInt::from((r - 1) * (ku - r)) * binomial(ku + 1, r) / BigInt::from(ku))
                })
                .collect();
            let mut row2 = vec![0; k - 1];
            row2[k - 2] = 1;
            (k + 1, row1, row2)
        }
        ClosedForm::GrsCritical => {
            let row1 = (2..=ku)
                .map(|r| val(BigInt::from(r - 1) * binomial(ku - 1, r)))
                .collect();
            let row2 = (3..=ku + 1)
                .map(|r| val(BigInt::from(r - 2) * binomial(ku - 1, r - 2)))
                .collect();
            (2 * k - 1, row1, row2)
        }
    };
    let defects = (2..=k)
        .map(|r| {
            let ind = phi_index(n as u64, ku, r as u64).max(BigInt::zero());
            val(BigInt::from(row1[r - 2]) - ind)
        })
        .collect();
    Ok(BettiDiagram {
        n,
        k,
        q: 0,
        row1,
        row2,
        defects,
    })
}
