//! Minimum distances by message enumeration and by meet-in-the-middle
//! search for small sets of dependent columns.

use std::collections::HashMap;

use serde::Serialize;

use super::{CodeError, LinearCode, Result};
use crate::gf::Field;

/// Largest `q^k` enumerated in exact mode.
pub const MAX_ENUMERATION: u64 = 1 << 24;

/// Largest number of partial column sums a dependency search may visit.
const MAX_COMBINATIONS: f64 = 5e7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Distance {
    Exact(usize),
    AtLeast(usize),
}

/// `d`, `d⊥` and optionally counts of small dual weights (up to scalars).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceProfile {
    pub d: Distance,
    pub d_dual: Distance,
    pub dual_counts: Vec<(usize, u64)>,
}

impl LinearCode {
    /// Exact `d` when `q^k ≤ 2^24`; otherwise `cap` is required and the
    /// answer is exact below `cap` and `AtLeast(cap)` from there on.
    pub fn min_distance(&self, cap: Option<usize>) -> Result<Distance> {
        if self.k() == 0 {
            return Ok(Distance::AtLeast(self.n() + 1));
        }
        let enumerable = (self.q() as f64).powi(self.k() as i32) <= MAX_ENUMERATION as f64;
        if enumerable {
            let d = if self.field().is_binary() {
                min_weight_binary(self)
            } else {
                min_weight_generic(self)
            };
            return Ok(match cap {
                Some(c) if d >= c => Distance::AtLeast(c),
                _ => Distance::Exact(d),
            });
        }
        let Some(cap) = cap else {
            return Err(CodeError::TooLarge(format!(
                "q^k = {}^{} exceeds 2^24; supply a cap",
                self.q(),
                self.k()
            )));
        };
        if cap <= 1 {
            return Ok(Distance::AtLeast(cap));
        }
        Ok(match self.dual().dual_distance_exact(cap - 1)? {
            Some(d) => Distance::Exact(d),
            None => Distance::AtLeast(cap),
        })
    }

    /// True iff some `w` columns of `G` are linearly dependent.
    pub fn dual_distance_leq(&self, w: usize) -> Result<bool> {
        Ok(self.dual_distance_exact(w)?.is_some())
    }

    /// `d⊥` if it is at most `limit`.
    pub fn dual_distance_exact(&self, limit: usize) -> Result<Option<usize>> {
        if self.n() == self.k() {
            return Ok(None);
        }
        let cols = columns(self);
        if cols.iter().any(|c| c.iter().all(|&v| v == 0)) {
            return Ok(if limit >= 1 { Some(1) } else { None });
        }
        let half = limit.div_ceil(2);
        check_budget(self.n(), half, self.q(), false)?;
        let f = self.field();
        let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut best: Option<usize> = None;
        for size in 1..=half {
            let mut visit = |v: &[u32]| {
                if v.iter().all(|&x| x == 0) {
                    best = Some(best.map_or(size, |b| b.min(size)));
                    return;
                }
                let key = normalize(f, v);
                if let Some(&other) = seen.get(&key) {
                    if size + other <= limit {
                        best = Some(best.map_or(size + other, |b| b.min(size + other)));
                    }
                } else {
                    seen.insert(key, size);
                }
            };
            for_each_combination(f, &cols, size, &mut visit);
        }
        Ok(best)
    }

    /// Number of dual codewords of weight `w`, divided by `q − 1`.
    pub fn dual_weight_count(&self, w: usize) -> Result<u64> {
        if w == 0 {
            return Ok(0);
        }
        check_budget(self.n(), w, self.q(), true)?;
        let cols = columns(self);
        let mut count = 0u64;
        for_each_combination(self.field(), &cols, w, &mut |v: &[u32]| {
            if v.iter().all(|&x| x == 0) {
                count += 1;
            }
        });
        Ok(count)
    }

    /// `d` and `d⊥` (each capped), plus dual weight counts for `weights`.
    pub fn distance_profile(&self, cap: usize, weights: &[usize]) -> Result<DistanceProfile> {
        let d = self.min_distance(Some(cap))?;
        let d_dual = match self.dual_distance_exact(cap - 1)? {
            Some(w) => Distance::Exact(w),
            None => Distance::AtLeast(cap),
        };
        let dual_counts = weights
            .iter()
            .map(|&w| Ok((w, self.dual_weight_count(w)?)))
            .collect::<Result<_>>()?;
        Ok(DistanceProfile {
            d,
            d_dual,
            dual_counts,
        })
    }
}

fn columns(code: &LinearCode) -> Vec<Vec<u32>> {
    let g = code.generator();
    (0..code.n())
        .map(|j| (0..code.k()).map(|i| g.get(i, j)).collect())
        .collect()
}

fn check_budget(n: usize, size: usize, q: u32, exact_size: bool) -> Result<()> {
    let mut total = 0.0;
    let mut binom = 1.0;
    for s in 1..=size {
        binom = binom * (n + 1 - s) as f64 / s as f64;
        if !exact_size || s == size {
            total += binom * (q as f64 - 1.0).powi(s as i32 - 1);
        }
    }
    if total > MAX_COMBINATIONS {
        return Err(CodeError::TooLarge(format!(
            "dependency search over {total:.3e} column combinations"
        )));
    }
    Ok(())
}

/// Scales `v` so its first nonzero entry is 1.
fn normalize(f: &Field, v: &[u32]) -> Vec<u32> {
    let lead = *v.iter().find(|&&x| x != 0).expect("nonzero");
    if lead == 1 {
        return v.to_vec();
    }
    let inv = f.inv(lead).expect("nonzero");
    v.iter().map(|&x| f.mul(x, inv)).collect()
}

/// Calls `visit` on `Σ c_j col_j` for every `size`-subset with nonzero
/// scalars, the first scalar fixed to 1.
fn for_each_combination(f: &Field, cols: &[Vec<u32>], size: usize, visit: &mut impl FnMut(&[u32])) {
    let k = cols.first().map_or(0, Vec::len);
    let mut sums = vec![vec![0u32; k]; size + 1];
    let scalars: Vec<u32> = (1..f.q()).collect();
    recurse(f, cols, &scalars, size, 0, 0, &mut sums, visit);
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &Field,
    cols: &[Vec<u32>],
    scalars: &[u32],
    size: usize,
    depth: usize,
    start: usize,
    sums: &mut [Vec<u32>],
    visit: &mut impl FnMut(&[u32]),
) {
    if depth == size {
        visit(&sums[depth]);
        return;
    }
    let remaining = size - depth;
    for j in start..=cols.len().saturating_sub(remaining) {
        let choices: &[u32] = if depth == 0 { &scalars[..1] } else { scalars };
        for &c in choices {
            let (lo, hi) = sums.split_at_mut(depth + 1);
            for ((dst, &src), &col) in hi[0].iter_mut().zip(&lo[depth]).zip(&cols[j]) {
                *dst = f.add(src, f.mul(c, col));
            }
            recurse(f, cols, scalars, size, depth + 1, j + 1, sums, visit);
        }
    }
}

/// Gray-code walk over all `2^k` messages on packed rows.
fn min_weight_binary(code: &LinearCode) -> usize {
    let words = code.n().div_ceil(64);
    let rows: Vec<Vec<u64>> = (0..code.k())
        .map(|i| {
            let mut r = vec![0u64; words];
            for j in 0..code.n() {
                if code.generator().get(i, j) == 1 {
                    r[j / 64] |= 1 << (j % 64);
                }
            }
            r
        })
        .collect();
    let mut word = vec![0u64; words];
    let mut best = usize::MAX;
    for step in 1u64..(1u64 << code.k()) {
        let flip = step.trailing_zeros() as usize;
        for (w, r) in word.iter_mut().zip(&rows[flip]) {
            *w ^= r;
        }
        let wt: u32 = word.iter().map(|w| w.count_ones()).sum();
        best = best.min(wt as usize);
    }
    best
}

/// Odometer over messages whose leading nonzero coefficient is 1.
fn min_weight_generic(code: &LinearCode) -> usize {
    let f = code.field();
    let (k, n) = (code.k(), code.n());
    let rows = code.generator().to_rows();
    let q = f.q();
    let mut best = usize::MAX;
    for lead in 0..k {
        let mut word = rows[lead].clone();
        let mut digits = vec![0u32; k - lead - 1];
        loop {
            best = best.min(word.iter().filter(|&&x| x != 0).count());
            // Advance the odometer; each digit runs through the integer
            // encodings 0..q and the word absorbs the field difference.
            let mut pos = 0;
            loop {
                if pos == digits.len() {
                    break;
                }
                let old = digits[pos];
                let new = if old + 1 == q { 0 } else { old + 1 };
                digits[pos] = new;
                let delta = f.sub(new, old);
                let row = &rows[lead + 1 + pos];
                for j in 0..n {
                    word[j] = f.add(word[j], f.mul(delta, row[j]));
                }
                if new != 0 {
                    break;
                }
                pos += 1;
            }
            if pos == digits.len() {
                break;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{golay_11, golay_23, hamming_7_4};

    #[test]
    fn classical_distances() {
        assert_eq!(
            hamming_7_4().min_distance(None).unwrap(),
            Distance::Exact(3)
        );
        assert_eq!(golay_23().min_distance(None).unwrap(), Distance::Exact(7));
        assert_eq!(golay_11().min_distance(None).unwrap(), Distance::Exact(5));
        assert_eq!(
            hamming_7_4().min_distance(Some(3)).unwrap(),
            Distance::AtLeast(3)
        );
    }

    #[test]
    fn dual_distances() {
        assert_eq!(golay_23().dual_distance_exact(9).unwrap(), Some(8));
        assert!(!golay_23().dual_distance_leq(7).unwrap());
        assert_eq!(hamming_7_4().dual_distance_exact(5).unwrap(), Some(4));
        assert_eq!(golay_11().dual_distance_exact(7).unwrap(), Some(6));
    }

    #[test]
    fn hamming_dual_weights() {
        // The simplex code has 7 words of weight 4.
        assert_eq!(hamming_7_4().dual_weight_count(4).unwrap(), 7);
        // The [7,4] Hamming code has 7 words of weight 3.
        assert_eq!(hamming_7_4().dual().dual_weight_count(3).unwrap(), 7);
    }
}
