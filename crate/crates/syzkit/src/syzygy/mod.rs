//! The linear strand `β_{r−1,r}` by iterated canonical kernels, and the
//! two-row Betti diagram of codes with regularity 2.
//!
//! `B_2` is the left kernel of the squared matrix. For `r ≥ 3`, `B_r` is the
//! left kernel of the Macaulay matrix `M_r` built from `B_{r−1}`; its
//! coordinates are pairs `(a, s)`, variable `X_a` times row `s` of
//! `B_{r−1}`, at index `a·β_{r−2,r−1} + s`. Every basis is in RREF.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::codes::LinearCode;
use crate::linalg::{LinalgError, Matrix};

mod monomials;
mod step;

pub use monomials::Monomials;

#[derive(Debug, Error)]
pub enum SyzygyError {
    #[error("row 2 unavailable: regularity > 2 (dim C^2 = {dim} < n = {n})")]
    NotRegularity2 { dim: usize, n: usize },
    #[error("strand computed up to degree {computed_up_to} but still nonzero")]
    IncompleteStrand { computed_up_to: usize },
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error("internal consistency: {0}")]
    Consistency(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, SyzygyError>;

/// Canonical basis `B_r` of the degree-`r` linear syzygies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyBasis {
    pub degree: usize,
    pub k: usize,
    /// `β_{r−1,r} × (k·β_{r−2,r−1})`, or `β_{1,2} × C(k+1,2)` when `r = 2`.
    pub basis: Matrix,
}

impl SyzygyBasis {
    pub fn beta(&self) -> usize {
        self.basis.rows()
    }

    /// Rows of `B_{r−1}` indexed by the second label coordinate.
    pub fn block(&self) -> usize {
        if self.degree == 2 {
            0
        } else {
            self.basis.cols() / self.k
        }
    }

    /// Column labels: `X1X2`-style monomials for `r = 2`, else `a,s`
    /// (1-based variable, 0-based previous row).
    pub fn labels(&self) -> Vec<String> {
        if self.degree == 2 {
            Monomials::new(self.k)
                .quadratic()
                .iter()
                .map(|&(a, b)| format!("X{}X{}", a + 1, b + 1))
                .collect()
        } else {
            let block = self.block();
            (0..self.basis.cols())
                .map(|c| format!("{},{}", c / block + 1, c % block))
                .collect()
        }
    }
}

/// The `C(k+1,2) × n` matrix whose row `X_aX_b` is `g_a * g_b`, rows in
/// graded lexicographic order with `X1 > … > Xk`.
pub fn squared_matrix(g: &Matrix) -> Matrix {
    let k = g.rows();
    let n = g.cols();
    let f = g.field().clone();
    let mono = Monomials::new(k);
    let rows = g.to_rows();
    let mut out = g.zeros_like(mono.quadratic().len(), n);
    for (i, &(a, b)) in mono.quadratic().iter().enumerate() {
        for (c, (&x, &y)) in rows[a].iter().zip(&rows[b]).enumerate() {
            let v = f.mul(x, y);
            if v != 0 {
                out.set(i, c, v);
            }
        }
    }
    out
}

pub fn compute_b2(g: &Matrix) -> SyzygyBasis {
    SyzygyBasis {
        degree: 2,
        k: g.rows(),
        basis: squared_matrix(g).left_kernel(),
    }
}

/// Rows `(X_a, q)` for `q ∈ B_2`: entry `q_M` at column `X_a·M`.
pub fn macaulay_deg3(b2: &SyzygyBasis) -> Result<Matrix> {
    if b2.degree != 2 {
        return Err(SyzygyError::LabelMismatch(format!(
            "expected B_2, got B_{}",
            b2.degree
        )));
    }
    let k = b2.k;
    let mono = Monomials::new(k);
    let beta = b2.beta();
    let rows = b2.basis.to_rows();
    let mut m = b2.basis.zeros_like(k * beta, mono.cubic_count());
    for a in 0..k {
        for (s, q) in rows.iter().enumerate() {
            for (col, &(i, j)) in mono.quadratic().iter().enumerate() {
                if q[col] != 0 {
                    m.set(a * beta + s, mono.cubic_index(a, i, j), q[col]);
                }
            }
        }
    }
    Ok(m)
}

/// Rows `(X_a, s)` for `s ∈ B_{r−1}`; row `(X_a, s)` adds `s_{X_b,t}` at
/// column `(X_aX_b, t)`, where `t` runs over the rows of `B_{r−2}`.
pub fn blockwise_macaulay(prev: &SyzygyBasis, prev2: &SyzygyBasis) -> Result<Matrix> {
    let k = prev.k;
    if prev.degree < 3 || prev2.degree + 1 != prev.degree || prev.basis.cols() != k * prev2.beta() {
        return Err(SyzygyError::LabelMismatch(format!(
            "B_{} has {} columns, expected {}·β(B_{}) = {}",
            prev.degree,
            prev.basis.cols(),
            k,
            prev2.degree,
            k * prev2.beta()
        )));
    }
    let mono = Monomials::new(k);
    let (beta, beta2) = (prev.beta(), prev2.beta());
    let f = prev.basis.field().clone();
    let rows = prev.basis.to_rows();
    let mut m = prev
        .basis
        .zeros_like(k * beta, mono.quadratic().len() * beta2);
    for a in 0..k {
        for (s, v) in rows.iter().enumerate() {
            for (col, &x) in v.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let (b, t) = (col / beta2, col % beta2);
                let c = mono.quadratic_index(a, b) * beta2 + t;
                let cur = m.get(a * beta + s, c);
                m.set(a * beta + s, c, f.add(cur, x));
            }
        }
    }
    Ok(m)
}

/// Memory guard applied before every kernel step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub mem_cap_bytes: u64,
}

impl Budget {
    pub fn from_gb(gb: f64) -> Budget {
        Budget {
            mem_cap_bytes: (gb * (1u64 << 30) as f64) as u64,
        }
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::from_gb(4.0)
    }
}

/// Why a strand stopped before the requested degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refusal {
    pub degree: usize,
    pub predicted_rows: u64,
    pub predicted_cols: u64,
    pub predicted_bytes: u64,
    pub cap_bytes: u64,
}

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "degree {} (Macaulay matrix {} x {}) needs {} of working memory over the {} cap",
            self.degree,
            self.predicted_rows,
            self.predicted_cols,
            human_bytes(self.predicted_bytes),
            human_bytes(self.cap_bytes)
        )
    }
}

fn human_bytes(b: u64) -> String {
    const UNITS: [&str; 4] = ["B", "KiB", "MiB", "GiB"];
    let mut v = b as f64;
    let mut u = 0;
    while v >= 1024.0 && u < UNITS.len() - 1 {
        v /= 1024.0;
        u += 1;
    }
    format!("{v:.2} {}", UNITS[u])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepInfo {
    pub degree: usize,
    pub rows: u64,
    pub cols: u64,
    pub unknowns: usize,
    /// Wall time; excluded from serialized payloads, which are reproducible.
    #[serde(skip)]
    pub seconds: f64,
}

/// `β_{1,2}, β_{2,3}, …` up to `computed_up_to`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BettiStrand {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    /// `betas[i] = β_{i+1,i+2}`.
    pub betas: Vec<u64>,
    pub computed_up_to: usize,
    pub refusal: Option<Refusal>,
    pub steps: Vec<StepInfo>,
    #[serde(skip)]
    pub bases: Vec<SyzygyBasis>,
}

impl BettiStrand {
    /// `β_{r−1,r}`; zero past a vanishing entry, `None` when not computed.
    pub fn beta(&self, r: usize) -> Option<u64> {
        if r < 2 {
            return None;
        }
        if let Some(&b) = self.betas.get(r - 2) {
            return Some(b);
        }
        self.vanished().then_some(0)
    }

    pub fn vanished(&self) -> bool {
        self.betas.last() == Some(&0)
    }

    /// `max{r : β_{r−1,r} > 0}` once the strand has vanished.
    pub fn r_max(&self) -> Option<usize> {
        self.vanished()
            .then(|| self.betas.iter().rposition(|&b| b > 0).map_or(1, |i| i + 2))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct StrandOptions {
    pub budget: Budget,
    pub keep_bases: bool,
}

/// Shape of `M_r`, and the bytes of the kernel step's working set: the
/// substitution matrix `T` has at most `k·β_{r−2,r−1}` rows and columns.
fn predicted_shape(k: usize, q: u32, r: usize, beta_prev: u64, beta_prev2: u64) -> (u64, u64, u64) {
    let k = k as u64;
    let quad = k * (k + 1) / 2;
    let (rows, cols) = match r {
        2 => (quad, 0),
        3 => (k * beta_prev, k * (k + 1) * (k + 2) / 6),
        _ => (k * beta_prev, quad * beta_prev2),
    };
    let bits = if q.is_power_of_two() && q <= 256 {
        q.trailing_zeros() as u64
    } else {
        32
    };
    let bytes = rows
        .saturating_mul(rows.div_ceil(64) * 8)
        .saturating_mul(bits);
    (rows, cols, bytes)
}

/// Algorithm: `B_2`, then one structured kernel step per degree up to
/// `max_degree` (clamped to `k`), stopping at the first zero.
pub fn linear_strand(code: &LinearCode, max_degree: usize, opts: &StrandOptions) -> BettiStrand {
    let k = code.k();
    let d = max_degree.min(k);
    let mut strand = BettiStrand {
        n: code.n(),
        k,
        q: code.q(),
        betas: Vec::new(),
        computed_up_to: 1,
        refusal: None,
        steps: Vec::new(),
        bases: Vec::new(),
    };
    if d < 2 {
        return strand;
    }
    let (rows, _, bytes) = predicted_shape(k, code.q(), 2, 0, 0);
    if bytes > opts.budget.mem_cap_bytes {
        strand.refusal = Some(Refusal {
            degree: 2,
            predicted_rows: rows,
            predicted_cols: code.n() as u64,
            predicted_bytes: bytes,
            cap_bytes: opts.budget.mem_cap_bytes,
        });
        return strand;
    }
    let start = Instant::now();
    let b2 = compute_b2(code.generator());
    strand.steps.push(StepInfo {
        degree: 2,
        rows: (k * (k + 1) / 2) as u64,
        cols: code.n() as u64,
        unknowns: k * (k + 1) / 2,
        seconds: start.elapsed().as_secs_f64(),
    });
    strand.betas.push(b2.beta() as u64);
    strand.computed_up_to = 2;
    let mut prev2_beta = 0u64;
    let mut prev = b2;
    if opts.keep_bases {
        strand.bases.push(prev.clone());
    }
    for r in 3..=d {
        if prev.beta() == 0 {
            strand.betas.push(0);
            strand.computed_up_to = r;
            continue;
        }
        let (rows, cols, bytes) = predicted_shape(k, code.q(), r, prev.beta() as u64, prev2_beta);
        if bytes > opts.budget.mem_cap_bytes {
            strand.refusal = Some(Refusal {
                degree: r,
                predicted_rows: rows,
                predicted_cols: cols,
                predicted_bytes: bytes,
                cap_bytes: opts.budget.mem_cap_bytes,
            });
            break;
        }
        let start = Instant::now();
        let (next, unknowns) = step::next_basis(&prev);
        strand.steps.push(StepInfo {
            degree: r,
            rows,
            cols,
            unknowns,
            seconds: start.elapsed().as_secs_f64(),
        });
        strand.betas.push(next.beta() as u64);
        strand.computed_up_to = r;
        prev2_beta = prev.beta() as u64;
        prev = next;
        if opts.keep_bases {
            strand.bases.push(prev.clone());
        }
    }
    strand
}

/// `B_r` from `B_{r−1}` by the plain left kernel of `M_r`; the reference
/// the structured step is tested against.
pub fn naive_next_basis(prev: &SyzygyBasis, prev2: Option<&SyzygyBasis>) -> Result<SyzygyBasis> {
    let m = match prev2 {
        None => macaulay_deg3(prev)?,
        Some(p2) => blockwise_macaulay(prev, p2)?,
    };
    Ok(SyzygyBasis {
        degree: prev.degree + 1,
        k: prev.k,
        basis: m.left_kernel(),
    })
}

pub fn binomial(n: u64, r: u64) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::from(1u32);
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `ind(φ_r) = ((k(k+1) − rn)·C(k−1, r−2)) / r`, always an integer.
pub fn phi_index(n: u64, k: u64, r: u64) -> BigInt {
    assert!(r >= 2 && k >= 1, "phi_index needs r ≥ 2 and k ≥ 1");
    let num = (BigInt::from(k) * (k + 1) - BigInt::from(r) * n) * binomial(k - 1, r - 2);
    let r_big = BigInt::from(r);
    assert!((&num % &r_big).is_zero(), "index is integral");
    num / r_big
}

fn phi_index_i64(n: usize, k: usize, r: usize) -> i64 {
    phi_index(n as u64, k as u64, r as u64)
        .to_i64()
        .expect("index fits in i64 at computable sizes")
}

/// The two nonzero rows of a regularity-2 Betti diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiDiagram {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    /// `β_{i,i+1}` for `i = 1..k−1`.
    pub row1: Vec<u64>,
    /// `β_{i,i+2}` for `i = 1..k−1`.
    pub row2: Vec<u64>,
    /// `def(φ_r)` for `r = 2..k`.
    pub defects: Vec<u64>,
}

impl BettiDiagram {
    /// `B_j = Σ_i (−1)^i β_{i,j}` for `j = 0..=k+1`.
    pub fn alternating_sums(&self) -> Vec<i64> {
        let mut b = vec![0i64; self.k + 2];
        b[0] = 1;
        for i in 1..self.k {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            b[i + 1] += sign * self.row1[i - 1] as i64;
            b[i + 2] += sign * self.row2[i - 1] as i64;
        }
        b
    }
}

/// `dim C^{⟨2⟩}`.
pub fn square_dim(code: &LinearCode) -> usize {
    squared_matrix(code.generator()).rank()
}

/// Completes row 2 from the strand: `β_{r−2,r} = β_{r−1,r} − ind(φ_r)`.
pub fn betti_diagram_reg2(code: &LinearCode, strand: &BettiStrand) -> Result<BettiDiagram> {
    let (n, k) = (code.n(), code.k());
    let dim = square_dim(code);
    if dim != n {
        return Err(SyzygyError::NotRegularity2 { dim, n });
    }
    if !strand.vanished() && strand.computed_up_to < k {
        return Err(SyzygyError::IncompleteStrand {
            computed_up_to: strand.computed_up_to,
        });
    }
    let beta = |r: usize| -> i64 { strand.beta(r).unwrap_or(0) as i64 };
    let mut row1 = Vec::with_capacity(k.saturating_sub(1));
    let mut row2 = Vec::with_capacity(k.saturating_sub(1));
    let mut defects = Vec::new();
    for i in 1..k {
        row1.push(beta(i + 1) as u64);
        let r = i + 2;
        let entry = beta(r) - phi_index_i64(n, k, r);
        if entry < 0 {
            return Err(SyzygyError::Consistency(format!(
                "β_{{{},{}}} = {entry} < 0",
                r - 2,
                r
            )));
        }
        row2.push(entry as u64);
    }
    for r in 2..=k {
        let def = beta(r) - phi_index_i64(n, k, r).max(0);
        if def < 0 {
            return Err(SyzygyError::Consistency(format!("def(φ_{r}) = {def} < 0")));
        }
        defects.push(def as u64);
    }
    if k >= 2 && row2[k - 2] != (n - k) as u64 {
        return Err(SyzygyError::Consistency(format!(
            "β_{{k−1,k+1}} = {} but n − k = {}",
            row2[k - 2],
            n - k
        )));
    }
    Ok(BettiDiagram {
        n,
        k,
        q: code.q(),
        row1,
        row2,
        defects,
    })
}

/// `def(φ_r) = β_{r−1,r} − ind(φ_r)^+`.
pub fn defect(n: usize, k: usize, r: usize, beta: u64) -> i64 {
    beta as i64 - phi_index_i64(n, k, r).max(0)
}

/// Coefficients of `(1−z)^k (1 + kz + n z²/(1−z))`, `j = 0..=k+1`.
pub fn hilbert_numerator(n: usize, k: usize) -> Vec<i64> {
    // (1−z)^k (1 + kz) + n z² (1−z)^{k−1}
    let binom_signed = |m: usize, j: usize| -> i64 {
        if j > m {
            return 0;
        }
        let v = binomial(m as u64, j as u64).to_i64().expect("small");
        if j % 2 == 0 {
            v
        } else {
            -v
        }
    };
    (0..=k + 1)
        .map(|j| {
            let a = binom_signed(k, j);
            let b = if j >= 1 {
                k as i64 * binom_signed(k, j - 1)
            } else {
                0
            };
            let c = if j >= 2 && k >= 1 {
                n as i64 * binom_signed(k - 1, j - 2)
            } else {
                0
            };
            a + b + c
        })
        .collect()
}

/// Result of [`r_max`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RMax {
    Exact(usize),
    AtLeast(usize),
}

/// Runs the strand until it vanishes or `cap` is resolved.
pub fn r_max(code: &LinearCode, cap: usize, opts: &StrandOptions) -> RMax {
    let strand = linear_strand(code, cap + 1, opts);
    match strand.r_max() {
        Some(r) => RMax::Exact(r),
        None if strand.computed_up_to >= code.k() => RMax::Exact(
            strand
                .betas
                .iter()
                .rposition(|&b| b > 0)
                .map_or(1, |i| i + 2),
        ),
        None => RMax::AtLeast(strand.computed_up_to.min(cap)),
    }
}
