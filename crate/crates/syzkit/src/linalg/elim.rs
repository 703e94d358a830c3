//! Gauss–Jordan elimination.
//!
//! The bit-sliced path is a greased (Four Russians) elimination: each pass
//! collects up to `G·K` pivots with lazily reduced pivot search, keeps the
//! pivot rows mutually reduced, tabulates all `q^K` combinations of each group
//! of `K` pivot rows and clears the pivot columns of every other row with one
//! table lookup per group. Pivot choice is sequential; only the row updates
//! run in parallel, so the output does not depend on the thread count.

use rayon::prelude::*;

use super::{Matrix, Store};
use crate::gf::Field;

/// Reduced row echelon form: `matrix` has the nonzero rows first, `pivots[i]`
/// is the leading column of row `i`.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Rref {
    /// The `rank` nonzero rows.
    pub fn basis(&self) -> Matrix {
        self.matrix.select_rows(&(0..self.rank).collect::<Vec<_>>())
    }
}

pub fn rref(m: &Matrix) -> Rref {
    let mut work = m.clone();
    let pivots = eliminate(&mut work, true);
    Rref {
        rank: pivots.len(),
        matrix: work,
        pivots,
    }
}

pub fn rank(m: &Matrix) -> usize {
    let mut work = m.clone();
    eliminate(&mut work, false).len()
}

/// In-place elimination; `full` clears above the pivots too.
pub(crate) fn eliminate(m: &mut Matrix, full: bool) -> Vec<usize> {
    if m.rows == 0 || m.cols == 0 {
        return Vec::new();
    }
    if m.is_sliced() {
        gauss_sliced(m, full)
    } else {
        gauss_dense(m, full)
    }
}

/// Multiplication by a constant as a GF(2)-linear map on bit planes:
/// `masks[c][j]` lists the input planes feeding output plane `j`.
pub(crate) struct PlaneMul {
    planes: usize,
    masks: Vec<Vec<u8>>,
}

impl PlaneMul {
    pub(crate) fn new(field: &Field) -> PlaneMul {
        let planes = field.degree() as usize;
        let masks = (0..field.q())
            .map(|c| {
                let imgs: Vec<u32> = (0..planes).map(|i| field.mul(c, 1 << i)).collect();
                (0..planes)
                    .map(|j| {
                        imgs.iter()
                            .enumerate()
                            .fold(0u8, |acc, (i, &img)| acc | ((((img >> j) & 1) as u8) << i))
                    })
                    .collect()
            })
            .collect();
        PlaneMul { planes, masks }
    }

    /// `dst += c · src`, both laid out as `planes` runs of `segw` words.
    #[inline]
    fn axpy(&self, dst: &mut [u64], src: &[u64], c: u32, segw: usize) {
        if c == 0 {
            return;
        }
        if self.planes == 1 {
            xor_into(dst, src);
            return;
        }
        let mask = &self.masks[c as usize];
        for (j, &mj) in mask.iter().enumerate() {
            for i in 0..self.planes {
                if (mj >> i) & 1 == 1 {
                    xor_into(
                        &mut dst[j * segw..(j + 1) * segw],
                        &src[i * segw..(i + 1) * segw],
                    );
                }
            }
        }
    }

    fn scale(&self, seg: &mut [u64], c: u32, segw: usize) {
        if c == 1 {
            return;
        }
        let src = seg.to_vec();
        seg.iter_mut().for_each(|w| *w = 0);
        self.axpy(seg, &src, c, segw);
    }
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// `dst ^= src[0] ^ … ^ src[GROUPS-1]` in one sweep.
#[inline]
fn combine(dst: &mut [u64], src: &[&[u64]; GROUPS]) {
    let n = dst.len();
    let s: [&[u64]; GROUPS] = std::array::from_fn(|g| &src[g][..n]);
    for i in 0..n {
        let mut acc = s[0][i];
        for t in &s[1..] {
            acc ^= t[i];
        }
        dst[i] ^= acc;
    }
}

#[inline]
fn seg_get(seg: &[u64], segw: usize, planes: usize, rel: usize) -> u32 {
    let (w, bit) = (rel / 64, rel % 64);
    let mut v = 0u32;
    for b in 0..planes {
        v |= (((seg[b * segw + w] >> bit) & 1) as u32) << b;
    }
    v
}

#[inline]
fn row_get(row: &[u64], words: usize, planes: usize, c: usize) -> u32 {
    let (w, bit) = (c / 64, c % 64);
    let mut v = 0u32;
    for b in 0..planes {
        v |= (((row[b * words + w] >> bit) & 1) as u32) << b;
    }
    v
}

const GROUPS: usize = 8;
const ROW_BLOCK: usize = 64;

fn gauss_sliced(m: &mut Matrix, full: bool) -> Vec<usize> {
    let field = m.field.clone();
    let q = field.q() as usize;
    let pm = PlaneMul::new(&field);
    let (rows, cols) = (m.rows, m.cols);
    let Store::Sliced {
        planes,
        words,
        data,
    } = &mut m.store
    else {
        unreachable!()
    };
    let (planes, words) = (*planes, *words);
    let stride = planes * words;
    let kmax = (8 / planes).max(1);

    // order[l] = physical row at logical position l.
    let mut order: Vec<usize> = (0..rows).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    let mut col = 0;
    let mut skip = vec![false; rows];
    // Rows that became zero are parked past `active` and never scanned again.
    let is_zero = |row: &[u64]| row.iter().all(|&w| w == 0);
    let mut zero: Vec<bool> = (0..rows)
        .map(|r| is_zero(&data[r * stride..(r + 1) * stride]))
        .collect();
    let mut active = rows;
    park_zero_rows(&mut order, &zero, 0, &mut active);

    while col < cols && rank < active {
        let remaining = active - rank;
        let mut k_per = kmax;
        while k_per > 1 && q.pow(k_per as u32) > 2 * remaining {
            k_per -= 1;
        }
        let maxp = (GROUPS * k_per).min(remaining);
        let w0 = col / 64;
        let segw = words - w0;
        let seg_len = planes * segw;
        let base_bit = w0 * 64;

        let mut pcols: Vec<usize> = Vec::with_capacity(maxp);
        let mut prows: Vec<Vec<u64>> = Vec::with_capacity(maxp);
        let mut j = col;
        while j < cols && pcols.len() < maxp {
            let np = pcols.len();
            let mut found = None;
            for l in rank + np..active {
                let row = &data[order[l] * stride..(order[l] + 1) * stride];
                let mut v = row_get(row, words, planes, j);
                for t in 0..np {
                    let u = row_get(row, words, planes, pcols[t]);
                    if u != 0 {
                        let pj = seg_get(&prows[t], segw, planes, j - base_bit);
                        if pj != 0 {
                            v ^= field.mul(u, pj);
                        }
                    }
                }
                if v != 0 {
                    found = Some(l);
                    break;
                }
            }
            if let Some(l) = found {
                let ph = order[l];
                let row = &data[ph * stride..(ph + 1) * stride];
                let mut r = vec![0u64; seg_len];
                for b in 0..planes {
                    r[b * segw..(b + 1) * segw]
                        .copy_from_slice(&row[b * words + w0..(b + 1) * words]);
                }
                for t in 0..np {
                    let u = row_get(row, words, planes, pcols[t]);
                    pm.axpy(&mut r, &prows[t], u, segw);
                }
                let v = seg_get(&r, segw, planes, j - base_bit);
                debug_assert!(v != 0);
                pm.scale(&mut r, field.inv(v).expect("nonzero pivot"), segw);
                for p in prows.iter_mut() {
                    let w = seg_get(p, segw, planes, j - base_bit);
                    pm.axpy(p, &r, w, segw);
                }
                pcols.push(j);
                prows.push(r);
                order.swap(rank + np, l);
            } else if np > 0 {
                // Apply the batch first: rows it zeroes are parked, so a
                // rank-deficient tail is not rescanned column by column.
                j += 1;
                break;
            }
            j += 1;
        }
        col = j;
        let np = pcols.len();
        if np == 0 {
            break;
        }

        for (t, p) in prows.iter().enumerate() {
            let ph = order[rank + t];
            let row = &mut data[ph * stride..(ph + 1) * stride];
            for b in 0..planes {
                row[b * words + w0..(b + 1) * words].copy_from_slice(&p[b * segw..(b + 1) * segw]);
            }
        }

        // Tables of all combinations per group of pivots.
        let groups: Vec<(usize, usize)> = (0..np)
            .step_by(k_per)
            .map(|s| (s, (s + k_per).min(np)))
            .collect();
        let tables: Vec<Vec<u64>> = groups
            .iter()
            .map(|&(s, e)| {
                let size = q.pow((e - s) as u32);
                let mut t = vec![0u64; size * seg_len];
                let mut base = 1;
                for piv in &prows[s..e] {
                    for v in 1..q {
                        for i in 0..base {
                            let (lo, hi) = t.split_at_mut((v * base + i) * seg_len);
                            let dst = &mut hi[..seg_len];
                            dst.copy_from_slice(&lo[i * seg_len..(i + 1) * seg_len]);
                            pm.axpy(dst, piv, v as u32, segw);
                        }
                    }
                    base *= q;
                }
                t
            })
            .collect();

        skip.iter_mut().for_each(|s| *s = false);
        if !full {
            for &ph in &order[..rank] {
                skip[ph] = true;
            }
        }
        for &ph in &order[rank..rank + np] {
            skip[ph] = true;
        }
        let pcols_ref = &pcols;
        let groups_ref = &groups;
        let tables_ref = &tables;
        let skip_ref = &skip;
        // Rows in parallel blocks; every row folds all group tables in one sweep.
        data.par_chunks_mut(stride * ROW_BLOCK)
            .zip(zero.par_chunks_mut(ROW_BLOCK))
            .enumerate()
            .for_each(|(blk, (rows_blk, zero_blk))| {
                let first = blk * ROW_BLOCK;
                let nrows = rows_blk.len() / stride;
                let mut idx = vec![0usize; nrows * GROUPS];
                let mut any = false;
                for i in 0..nrows {
                    if skip_ref[first + i] {
                        continue;
                    }
                    let row = &rows_blk[i * stride..(i + 1) * stride];
                    for (g, &(s, e)) in groups_ref.iter().enumerate() {
                        let mut x = 0usize;
                        for t in (s..e).rev() {
                            x = x * q + row_get(row, words, planes, pcols_ref[t]) as usize;
                        }
                        idx[i * GROUPS + g] = x;
                        any |= x != 0;
                    }
                }
                if !any {
                    return;
                }
                for i in 0..nrows {
                    let ix = &idx[i * GROUPS..(i + 1) * GROUPS];
                    if ix.iter().all(|&x| x == 0) {
                        continue;
                    }
                    let row = &mut rows_blk[i * stride..(i + 1) * stride];
                    for b in 0..planes {
                        let off = b * words + w0;
                        // Entry 0 of every table is the zero row, so missing groups read zeros.
                        let src: [&[u64]; GROUPS] = std::array::from_fn(|g| {
                            let (t, x) = match tables_ref.get(g) {
                                Some(t) => (t, ix[g]),
                                None => (&tables_ref[0], 0),
                            };
                            let e = x * seg_len + b * segw;
                            &t[e..e + segw]
                        });
                        combine(&mut row[off..off + segw], &src);
                    }
                    zero_blk[i] =
                        (0..planes).all(|b| is_zero(&row[b * words + w0..(b + 1) * words]));
                }
            });

        pivots.extend_from_slice(&pcols);
        rank += np;
        park_zero_rows(&mut order, &zero, rank, &mut active);
    }

    if order.iter().enumerate().any(|(l, &ph)| l != ph) {
        let mut out = vec![0u64; data.len()];
        for (l, &ph) in order.iter().enumerate() {
            out[l * stride..(l + 1) * stride]
                .copy_from_slice(&data[ph * stride..(ph + 1) * stride]);
        }
        *data = out;
    }
    pivots
}

/// Stable partition of `order[from..active]`: nonzero rows first; `active`
/// shrinks to the end of the nonzero part.
fn park_zero_rows(order: &mut [usize], zero: &[bool], from: usize, active: &mut usize) {
    let (nonzero, zeros): (Vec<usize>, Vec<usize>) =
        order[from..*active].iter().partition(|&&ph| !zero[ph]);
    if zeros.is_empty() {
        return;
    }
    let mid = from + nonzero.len();
    order[from..mid].copy_from_slice(&nonzero);
    order[mid..*active].copy_from_slice(&zeros);
    *active = mid;
}

fn gauss_dense(m: &mut Matrix, full: bool) -> Vec<usize> {
    let field = m.field.clone();
    let (rows, cols) = (m.rows, m.cols);
    let Store::Dense(d) = &mut m.store else {
        unreachable!()
    };
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| d[r * cols + col] != 0) else {
            continue;
        };
        if pr != rank {
            for c in 0..cols {
                d.swap(pr * cols + c, rank * cols + c);
            }
        }
        let inv = field.inv(d[rank * cols + col]).expect("nonzero pivot");
        for c in col..cols {
            let e = &mut d[rank * cols + c];
            *e = field.mul(*e, inv);
        }
        let prow: Vec<u32> = d[rank * cols..(rank + 1) * cols].to_vec();
        let f = &field;
        let pr_ref = &prow;
        let start = if full { 0 } else { rank + 1 };
        d[start * cols..]
            .par_chunks_mut(cols)
            .enumerate()
            .with_min_len(16)
            .for_each(|(i, row)| {
                if start + i == rank {
                    return;
                }
                let c0 = row[col];
                if c0 == 0 {
                    return;
                }
                let neg = f.neg(c0);
                for c in col..cols {
                    let p = pr_ref[c];
                    if p != 0 {
                        row[c] = f.add(row[c], f.mul(neg, p));
                    }
                }
            });
        pivots.push(col);
        rank += 1;
    }
    pivots
}

/// Four Russians product for bit-sliced operands.
pub(crate) fn mul_sliced(a: &Matrix, b: &Matrix) -> Matrix {
    let field = a.field.clone();
    let q = field.q() as usize;
    let pm = PlaneMul::new(&field);
    let mut c = Matrix::zeros(&field, a.rows, b.cols);
    if a.rows == 0 || b.cols == 0 || a.cols == 0 {
        return c;
    }
    let (
        Store::Sliced {
            planes,
            words: aw,
            data: ad,
        },
        Store::Sliced {
            words: bw,
            data: bd,
            ..
        },
    ) = (&a.store, &b.store)
    else {
        unreachable!()
    };
    let (planes, aw, bw) = (*planes, *aw, *bw);
    let (astride, bstride) = (planes * aw, planes * bw);
    let mut k_per = (8 / planes).max(1);
    while k_per > 1 && q.pow(k_per as u32) > 2 * a.rows.max(1) {
        k_per -= 1;
    }
    let Store::Sliced { data: cd, .. } = &mut c.store else {
        unreachable!()
    };
    let mut table = vec![0u64; q.pow(k_per as u32) * bstride];
    for s in (0..a.cols).step_by(k_per) {
        let e = (s + k_per).min(a.cols);
        let size = q.pow((e - s) as u32);
        table[..bstride].iter_mut().for_each(|w| *w = 0);
        let mut base = 1;
        for r in s..e {
            let src = &bd[r * bstride..(r + 1) * bstride];
            for v in 1..q {
                for i in 0..base {
                    let (lo, hi) = table.split_at_mut((v * base + i) * bstride);
                    let dst = &mut hi[..bstride];
                    dst.copy_from_slice(&lo[i * bstride..(i + 1) * bstride]);
                    pm.axpy(dst, src, v as u32, bw);
                }
            }
            base *= q;
        }
        let table_ref = &table[..size * bstride];
        cd.par_chunks_mut(bstride)
            .enumerate()
            .with_min_len(64)
            .for_each(|(i, crow)| {
                let arow = &ad[i * astride..(i + 1) * astride];
                let mut x = 0usize;
                for col in (s..e).rev() {
                    x = x * q + row_get(arow, aw, planes, col) as usize;
                }
                if x != 0 {
                    xor_into(crow, &table_ref[x * bstride..(x + 1) * bstride]);
                }
            });
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn is_rref(r: &Rref) -> bool {
        let m = &r.matrix;
        for (i, &p) in r.pivots.iter().enumerate() {
            if m.get(i, p) != 1 || (0..p).any(|c| m.get(i, c) != 0) {
                return false;
            }
            if (0..m.rows()).any(|k| k != i && m.get(k, p) != 0) {
                return false;
            }
        }
        (r.rank..m.rows()).all(|i| m.row_weight(i) == 0) && r.pivots.windows(2).all(|w| w[0] < w[1])
    }

    #[test]
    fn small_examples() {
        let f = Field::prime(2).unwrap();
        let m = Matrix::from_rows(&f, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
        let id = Matrix::identity(&f, 5);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1, 2, 3, 4]);
        assert_eq!(Matrix::zeros(&f, 3, 4).rref().rank, 0);
    }

    #[test]
    fn sliced_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for q in [2u64, 4, 8, 16, 256] {
            let f = Field::with_order(q).unwrap();
            for &(r, c) in &[(5, 9), (70, 130), (200, 90), (129, 129)] {
                let mut m = Matrix::random(&f, r, c, &mut rng);
                // Force rank deficiency.
                for i in 0..r / 3 {
                    let src = m.clone();
                    m.xor_row_segment(i, 0, &src, r - 1 - i, 0, c);
                    let rowcopy = m.row(r - 1 - i);
                    for (j, v) in rowcopy.iter().enumerate() {
                        m.set(i, j, *v);
                    }
                }
                let a = m.rref();
                let b = m.to_dense().rref();
                assert!(is_rref(&a));
                assert_eq!(a.pivots, b.pivots);
                assert_eq!(a.matrix.to_rows(), b.matrix.to_rows());
            }
        }
    }

    #[test]
    fn product_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for q in [2u64, 4, 16] {
            let f = Field::with_order(q).unwrap();
            let a = Matrix::random(&f, 33, 70, &mut rng);
            let b = Matrix::random(&f, 70, 65, &mut rng);
            assert_eq!(
                a.mul(&b).unwrap().to_rows(),
                a.to_dense().mul(&b.to_dense()).unwrap().to_rows()
            );
        }
    }
}
