//! One kernel step `B_{r−1} ↦ B_r` without materializing `M_r`.
//!
//! We solve `M_rᵀ x = 0` for `x` indexed by `(a, s)`. Since `B = B_{r−1}` is
//! in RREF, row `s` has a pivot column `p_s` and column `p_s` of `B` is the
//! unit vector `e_s`. The equation `ρ(a, s)` of `M_rᵀ` that contains
//! `(a, p_s)` therefore has coefficient 1 on `x_{a,s}`; all its other terms
//! sit in blocks `v ≠ a`, read off the pivot's variables:
//!
//! * none: `ρ` reads `x_{a,s} = 0` (kind D);
//! * all in blocks `v < a`: `ρ` expresses `x_{a,s}` through earlier blocks (kind L);
//! * otherwise `x_{a,s}` is kept as a free parameter (kind U).
//!
//! Walking the blocks upwards yields `T` with `x = T·u` for every solution,
//! `u` the U-coordinates. The remaining equations are `R u = 0` with
//! `R = M_rᵀ T`, assembled blockwise from products `Bᵀ[rows] · T_v`. Then
//! `B_r = RREF(ker(R) · Tᵀ)`; `T` is injective, so this is exactly `ker M_rᵀ`.
//! A random subset of the equations is solved first and the others are
//! imposed on its solution space only; the subset changes cost, not the result.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Monomials, SyzygyBasis};
use crate::linalg::Matrix;

const SAMPLE_SEED: u64 = 0x5354_5241_4e44;
const SAMPLE_SLACK: usize = 64;

enum Kind {
    Zero,
    Free(usize),
    /// `x_{a,s} = −Σ Bᵀ[row] · x_v` over `(v, row)`.
    Lower(Vec<(usize, usize)>),
}

/// `B_r` from `B_{r−1}` and the number of free parameters used.
pub(super) fn next_basis(prev: &SyzygyBasis) -> (SyzygyBasis, usize) {
    let k = prev.k;
    let beta = prev.beta();
    let b = &prev.basis;
    let mono = Monomials::new(k);
    let pivots: Vec<usize> = b
        .leading_cols()
        .into_iter()
        .map(|p| p.expect("kernel bases have no zero rows"))
        .collect();
    let block2 = prev.block();

    // Other terms of ρ(a, s) as (block v, row of Bᵀ).
    let others = |a: usize, s: usize| -> Vec<(usize, usize)> {
        let p = pivots[s];
        if prev.degree == 2 {
            // ρ = X_a·m_s; the term of variable v reads Bᵀ[X_a·m_s / X_v].
            let (i, j) = mono.quadratic()[p];
            let mut vs = vec![i, j];
            vs.dedup();
            vs.into_iter()
                .filter(|&v| v != a)
                .map(|v| {
                    let rest = if v == i { j } else { i };
                    (v, mono.quadratic_index(a, rest))
                })
                .collect()
        } else {
            // ρ = (X_aX_{b_s}, t_s); the other term is Bᵀ[(a, t_s)] in block b_s.
            let (bs, ts) = (p / block2, p % block2);
            if bs == a {
                Vec::new()
            } else {
                vec![(bs, a * block2 + ts)]
            }
        }
    };

    let mut kinds = Vec::with_capacity(k * beta);
    let mut free = 0;
    for a in 0..k {
        for s in 0..beta {
            let o = others(a, s);
            kinds.push(if o.is_empty() {
                Kind::Zero
            } else if o.iter().all(|&(v, _)| v < a) {
                Kind::Lower(o)
            } else {
                free += 1;
                Kind::Free(free - 1)
            });
        }
    }

    let bt = b.transpose();
    let mut t: Vec<Matrix> = Vec::with_capacity(k);
    for a in 0..k {
        let mut ta = b.zeros_like(beta, free);
        // Per source block: target rows and the Bᵀ rows feeding them.
        let mut by_source: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), Vec::new()); a];
        for s in 0..beta {
            match &kinds[a * beta + s] {
                Kind::Zero => {}
                Kind::Free(u) => ta.set(s, *u, 1),
                Kind::Lower(o) => {
                    for &(v, row) in o {
                        by_source[v].0.push(s);
                        by_source[v].1.push(row);
                    }
                }
            }
        }
        for (v, (targets, rows)) in by_source.iter().enumerate() {
            if targets.is_empty() || free == 0 {
                continue;
            }
            let contrib = bt.select_rows(rows).mul(&t[v]).expect("β columns").neg();
            for (i, &s) in targets.iter().enumerate() {
                ta.xor_row_segment(s, 0, &contrib, i, 0, free);
            }
        }
        t.push(ta);
    }
    let empty = || b.zeros_like(0, k * beta);
    if free == 0 {
        return (next(prev, empty()), 0);
    }

    // Equations of kind D and L hold by construction of T.
    let eqs = Equations {
        prev,
        mono: &mono,
        bt: &bt,
    };
    let mut solved = vec![false; eqs.count()];
    for a in 0..k {
        for s in 0..beta {
            if !matches!(kinds[a * beta + s], Kind::Free(_)) {
                solved[eqs.own_row(a, pivots[s])] = true;
            }
        }
    }
    let live: Vec<usize> = (0..eqs.count()).filter(|&i| !solved[i]).collect();

    // Equations are taken in a random order, in batches slightly larger
    // than the current solution space; each batch usually cuts that space
    // sharply. Once a batch stops paying off the rest is imposed at once.
    let mut order = live;
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(SAMPLE_SEED));
    // `comb` (width × free) spans the solutions of the batches so far.
    let mut comb: Option<Matrix> = None;
    let mut width = free;
    let mut cursor = 0;
    while order.len() - cursor > 2 * (width + SAMPLE_SLACK) {
        let batch = &order[cursor..cursor + width + SAMPLE_SLACK];
        cursor += batch.len();
        let mut r = eqs.residual(batch, &t, free);
        if let Some(c) = &comb {
            r = r.mul(&c.transpose()).expect("free columns");
        }
        let ks = r.right_kernel();
        if ks.rows() == 0 {
            return (next(prev, empty()), free);
        }
        let before = width;
        if ks.rows() < width {
            width = ks.rows();
            comb = Some(match comb {
                Some(c) => ks.mul(&c).expect("width columns"),
                None => ks,
            });
        }
        if 10 * width > 9 * before {
            break;
        }
    }
    let narrow: Vec<Matrix> = match &comb {
        Some(c) => {
            let ct = c.transpose();
            t.iter()
                .map(|tv| tv.mul(&ct).expect("free columns"))
                .collect()
        }
        None => t,
    };
    let y = eqs
        .residual(&order[cursor..], &narrow, width)
        .right_kernel();
    if y.rows() == 0 {
        return (next(prev, empty()), free);
    }
    let mut full = narrow[0].clone();
    for tv in &narrow[1..] {
        full = full.vstack(tv).expect("same width");
    }
    let basis = y
        .mul(&full.transpose())
        .expect("narrow columns")
        .rref()
        .basis();
    (next(prev, basis), free)
}

/// The equations of `M_rᵀ x = 0`, one per column of `M_r`.
struct Equations<'a> {
    prev: &'a SyzygyBasis,
    mono: &'a Monomials,
    bt: &'a Matrix,
}

impl Equations<'_> {
    fn count(&self) -> usize {
        if self.prev.degree == 2 {
            self.mono.cubic_count()
        } else {
            self.mono.quadratic().len() * self.prev.block()
        }
    }

    /// Index of `ρ(a, s)` for a row `s` of `B_{r−1}` with pivot column `p`.
    fn own_row(&self, a: usize, p: usize) -> usize {
        if self.prev.degree == 2 {
            let (i, j) = self.mono.quadratic()[p];
            self.mono.cubic_index(a, i, j)
        } else {
            let block2 = self.prev.block();
            self.mono.quadratic_index(a, p / block2) * block2 + p % block2
        }
    }

    /// Terms of an equation as (block v, row of Bᵀ).
    fn terms(&self, row: usize, out: &mut Vec<(usize, usize)>) {
        out.clear();
        if self.prev.degree == 2 {
            let (x, y, z) = self.mono.cubic()[row];
            // One term per distinct variable v dividing N, reading Bᵀ[N / X_v].
            out.push((x, self.mono.quadratic_index(y, z)));
            if y != x {
                out.push((y, self.mono.quadratic_index(x, z)));
            }
            if z != y {
                out.push((z, self.mono.quadratic_index(x, y)));
            }
        } else {
            let block2 = self.prev.block();
            let (x, y) = self.mono.quadratic()[row / block2];
            let t = row % block2;
            out.push((x, y * block2 + t));
            if x != y {
                out.push((y, x * block2 + t));
            }
        }
    }

    /// Rows `rows` of `M_rᵀ X`, with `X` given by its `k` blocks.
    fn residual(&self, rows: &[usize], x: &[Matrix], width: usize) -> Matrix {
        let k = self.prev.k;
        let mut by_source: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), Vec::new()); k];
        let mut terms = Vec::with_capacity(3);
        for (i, &row) in rows.iter().enumerate() {
            self.terms(row, &mut terms);
            for &(v, bt_row) in &terms {
                by_source[v].0.push(i);
                by_source[v].1.push(bt_row);
            }
        }
        let mut out = self.bt.zeros_like(rows.len(), width);
        for (v, (targets, bt_rows)) in by_source.iter().enumerate() {
            if targets.is_empty() {
                continue;
            }
            let prod = self.bt.select_rows(bt_rows).mul(&x[v]).expect("β rows");
            for (j, &i) in targets.iter().enumerate() {
                out.xor_row_segment(i, 0, &prod, j, 0, width);
            }
        }
        out
    }
}

fn next(prev: &SyzygyBasis, basis: Matrix) -> SyzygyBasis {
    SyzygyBasis {
        degree: prev.degree + 1,
        k: prev.k,
        basis,
    }
}
