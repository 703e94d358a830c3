//! Test-only oracles, written against field arithmetic alone so they share
//! no elimination or syzygy code with the library.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use syzkit::codes::LinearCode;
use syzkit::gf::Field;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rows(code: &LinearCode) -> Vec<Vec<u32>> {
    code.generator().to_rows()
}

/// Rank by plain Gaussian elimination; bit-packed over GF(2).
pub fn rank(field: &Field, mut m: Vec<Vec<u32>>) -> usize {
    if m.is_empty() {
        return 0;
    }
    if field.q() == 2 {
        let words = m[0].len().div_ceil(64);
        let mut bits: Vec<Vec<u64>> = m
            .iter()
            .map(|r| {
                let mut w = vec![0u64; words];
                for (c, &v) in r.iter().enumerate() {
                    if v != 0 {
                        w[c / 64] |= 1 << (c % 64);
                    }
                }
                w
            })
            .collect();
        let mut rank = 0;
        for c in 0..m[0].len() {
            let (wi, bit) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..bits.len()).find(|&r| bits[r][wi] & bit != 0) else {
                continue;
            };
            bits.swap(rank, p);
            let pivot = bits[rank].clone();
            for row in &mut bits[rank + 1..] {
                if row[wi] & bit != 0 {
                    for (a, b) in row.iter_mut().zip(&pivot) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
        }
        return rank;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = field.inv(m[rank][c]).unwrap();
        let pivot: Vec<u32> = m[rank].iter().map(|&v| field.mul(v, inv)).collect();
        for row in &mut m[rank + 1..] {
            let f = row[c];
            if f != 0 {
                for (a, &b) in row.iter_mut().zip(&pivot) {
                    *a = field.sub(*a, field.mul(f, b));
                }
            }
        }
        m[rank] = pivot;
        rank += 1;
    }
    rank
}

pub fn binom(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `r`-subsets of `0..k` in lexicographic order.
pub fn subsets(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, k: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in start..k {
            cur.push(v);
            rec(v + 1, k, r, cur, out);
            cur.pop();
        }
    }
    rec(0, k, r, &mut cur, &mut out);
    out
}

/// `β_{i,i+1}` from Koszul homology of the coordinate ring:
/// `dim ker(∧^i V ⊗ V → ∧^{i−1} V ⊗ C^{⟨2⟩}) − C(k, i+1)`, where
/// `e_S ⊗ x_a ↦ Σ_{b∈S} ± e_{S∖b} ⊗ (g_b ∗ g_a)`.
pub fn koszul_beta(field: &Field, g: &[Vec<u32>], i: usize) -> u64 {
    let k = g.len();
    let n = g[0].len();
    let lower = subsets(k, i - 1);
    let lower_index: std::collections::HashMap<Vec<usize>, usize> = lower
        .iter()
        .enumerate()
        .map(|(j, s)| (s.clone(), j))
        .collect();
    let mut cols = Vec::new();
    for s in subsets(k, i) {
        for a in 0..k {
            let mut col = vec![0u32; lower.len() * n];
            for (pos, &b) in s.iter().enumerate() {
                let mut rest = s.clone();
                rest.remove(pos);
                let base = lower_index[&rest] * n;
                for j in 0..n {
                    let v = field.mul(g[b][j], g[a][j]);
                    let v = if pos % 2 == 1 { field.neg(v) } else { v };
                    col[base + j] = field.add(col[base + j], v);
                }
            }
            cols.push(col);
        }
    }
    let dim_domain = cols.len();
    let kernel = dim_domain - rank(field, cols);
    (kernel - binom(k, i + 1)) as u64
}

/// `β_{r−1,r}` for `r = 2..=max_r`.
pub fn koszul_strand(field: &Field, g: &[Vec<u32>], max_r: usize) -> Vec<u64> {
    (2..=max_r).map(|r| koszul_beta(field, g, r - 1)).collect()
}

/// `dim C^{⟨r⟩}` for `r = 1..=r_max`, from products of generator rows.
pub fn power_dims(field: &Field, g: &[Vec<u32>], r_max: usize) -> Vec<usize> {
    let n = g[0].len();
    let mut dims = Vec::new();
    let mut span: Vec<Vec<u32>> = g.to_vec();
    for r in 1..=r_max {
        if r > 1 {
            let mut next = Vec::new();
            for a in &span {
                for b in g {
                    next.push((0..n).map(|j| field.mul(a[j], b[j])).collect());
                }
            }
            span = basis(field, next);
        }
        dims.push(rank(field, span.clone()));
    }
    dims
}

/// Independent rows spanning the same space.
fn basis(field: &Field, m: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    for row in m {
        let mut trial = out.clone();
        trial.push(row.clone());
        if rank(field, trial) > out.len() {
            out.push(row);
        }
    }
    out
}

/// Coefficients of `(1−z)^k · Σ_{r≤len} dim C^{⟨r⟩} z^r`, truncated.
pub fn hilbert_numerator_from_dims(k: usize, dims: &[usize], len: usize) -> Vec<i64> {
    let mut h = vec![0i64; len];
    h[0] = 1;
    for (r, &d) in dims.iter().enumerate() {
        if r + 1 < len {
            h[r + 1] = d as i64;
        }
    }
    let last = *dims.last().unwrap() as i64;
    for v in h.iter_mut().skip(dims.len() + 1) {
        *v = last;
    }
    for _ in 0..k {
        for j in (1..len).rev() {
            h[j] -= h[j - 1];
        }
    }
    h
}

/// Uniform full-rank `[n,k]` code.
pub fn random_code<R: Rng>(field: &Field, n: usize, k: usize, rng: &mut R) -> LinearCode {
    LinearCode::random(field, n, k, rng).unwrap()
}
