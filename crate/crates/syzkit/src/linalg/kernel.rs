//! Canonical kernel bases.
//!
//! A tall matrix (many more rows than columns) is handled exactly by row
//! sampling: with `S` a random subset of about `cols + 64` rows, every kernel
//! vector lies in `ker A_S`, so `ker A = Y·K_S` where `K_S` spans `ker A_S` and
//! `Y` spans the kernel of the residual `A_rest·K_Sᵀ`. The sample only changes
//! the cost, never the result, and the RNG seed is fixed.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Matrix;

const SAMPLE_SEED: u64 = 0x5359_5a4b_4b45_524e;
/// Extra rows drawn beyond the column count.
pub(crate) const SAMPLE_SLACK: usize = 64;

pub(crate) fn sampling_rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SAMPLE_SEED)
}

/// Whether a `rows × cols` kernel problem is worth sampling.
pub(crate) fn worth_sampling(rows: usize, cols: usize) -> bool {
    cols > 0 && rows > cols + 4 * SAMPLE_SLACK && rows > cols + cols / 4
}

pub(crate) fn right_kernel(a: &Matrix) -> Matrix {
    right_kernel_with(a, &mut sampling_rng())
}

pub(crate) fn right_kernel_with(a: &Matrix, rng: &mut ChaCha8Rng) -> Matrix {
    let nonzero: Vec<usize> = a
        .leading_cols()
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.map(|_| i))
        .collect();
    if nonzero.len() < a.rows() {
        return right_kernel_with(&a.select_rows(&nonzero), rng);
    }
    let (m, c) = (a.rows(), a.cols());
    if !worth_sampling(m, c) {
        return direct_kernel(a);
    }
    let mut idx = sample(rng, m, c + SAMPLE_SLACK).into_vec();
    idx.sort_unstable();
    let mut chosen = vec![false; m];
    idx.iter().for_each(|&i| chosen[i] = true);
    let rest: Vec<usize> = (0..m).filter(|&i| !chosen[i]).collect();
    let ks = direct_kernel(&a.select_rows(&idx));
    if ks.rows() == 0 {
        return ks;
    }
    let resid = a
        .select_rows(&rest)
        .mul(&ks.transpose())
        .expect("shapes agree by construction");
    combine(&right_kernel_with(&resid, rng), &ks)
}

/// `RREF(Y · K_S)`.
pub(crate) fn combine(y: &Matrix, ks: &Matrix) -> Matrix {
    if y.rows() == 0 {
        return ks.zeros_like(0, ks.cols());
    }
    y.mul(ks)
        .expect("shapes agree by construction")
        .rref()
        .basis()
}

/// Kernel read off the RREF: one vector per free column, then canonicalized.
pub(crate) fn direct_kernel(a: &Matrix) -> Matrix {
    let c = a.cols();
    let r = a.rref();
    let field = a.field().clone();
    let mut is_pivot = vec![false; c];
    r.pivots.iter().for_each(|&p| is_pivot[p] = true);
    let free: Vec<usize> = (0..c).filter(|&j| !is_pivot[j]).collect();
    let mut k = a.zeros_like(free.len(), c);
    for (i, &f) in free.iter().enumerate() {
        k.set(i, f, 1);
    }
    if !free.is_empty() {
        let block = r
            .matrix
            .select_rows(&(0..r.rank).collect::<Vec<_>>())
            .select_cols(&free)
            .transpose();
        for i in 0..free.len() {
            for (j, &p) in r.pivots.iter().enumerate() {
                let v = block.get(i, j);
                if v != 0 {
                    k.set(i, p, field.neg(v));
                }
            }
        }
    }
    // Free-column vectors have their 1 at `f` but may lead at an earlier pivot column.
    k.rref().basis()
}
