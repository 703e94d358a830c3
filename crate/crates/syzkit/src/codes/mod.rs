//! Linear codes over GF(q), stored by the RREF of a generator matrix.

use std::collections::BTreeSet;

use rand::Rng;
use thiserror::Error;

use crate::gf::{Field, GfError};
use crate::linalg::{LinalgError, Matrix};

mod distance;
mod families;

pub use distance::{Distance, DistanceProfile, MAX_ENUMERATION};
pub use families::{
    dual_alternant_code, dual_goppa_code, grs_code, pi_bits, pi_code, Family, FamilySample,
    FamilySpec, SupportMultiplier,
};

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("generator has rank {rank} < {rows} rows")]
    RankDeficient { rows: usize, rank: usize },
    #[error("support entries must be pairwise distinct")]
    RepeatedSupport,
    #[error("multiplier entries must be nonzero")]
    ZeroMultiplier,
    #[error("root in support")]
    RootInSupport,
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("rejection sampling gave up after {0} draws")]
    RejectionCap(u64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] GfError),
}

pub type Result<T> = std::result::Result<T, CodeError>;

/// Cap on rejection sampling draws.
pub const MAX_DRAWS: u64 = 1_000_000;

/// An `[n, k]_q` code; `generator` is always in RREF with exactly `k` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    generator: Matrix,
}

/// Result of [`LinearCode::shorten`].
#[derive(Clone, Debug)]
pub struct Shortened {
    pub code: LinearCode,
    /// `k - |S|`.
    pub expected_k: usize,
    /// Set when the true dimension exceeds `k - |S|`.
    pub excess: bool,
}

impl LinearCode {
    /// Canonicalizes any generator; dependent rows are dropped.
    pub fn new(generator: &Matrix) -> LinearCode {
        LinearCode {
            generator: generator.rref().basis(),
        }
    }

    /// Like [`LinearCode::new`] but refuses rank-deficient generators.
    pub fn new_strict(generator: &Matrix) -> Result<LinearCode> {
        let code = Self::new(generator);
        if code.k() < generator.rows() {
            return Err(CodeError::RankDeficient {
                rows: generator.rows(),
                rank: code.k(),
            });
        }
        Ok(code)
    }

    pub fn field(&self) -> &Field {
        self.generator.field()
    }
    pub fn n(&self) -> usize {
        self.generator.cols()
    }
    pub fn k(&self) -> usize {
        self.generator.rows()
    }
    pub fn q(&self) -> u32 {
        self.field().q()
    }
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn dual(&self) -> LinearCode {
        let h = if self.k() == 0 {
            Matrix::identity(self.field(), self.n())
        } else {
            self.generator.right_kernel()
        };
        LinearCode { generator: h }
    }

    /// Codewords vanishing on `positions`, with those positions removed.
    pub fn shorten(&self, positions: &BTreeSet<usize>) -> Shortened {
        let s: Vec<usize> = positions.iter().copied().collect();
        let expected_k = self.k().saturating_sub(s.len());
        let sub = if s.is_empty() {
            self.generator.clone()
        } else {
            let coeffs = self.generator.select_cols(&s).left_kernel();
            if coeffs.rows() == 0 {
                self.generator.zeros_like(0, self.n())
            } else {
                coeffs.mul(&self.generator).expect("k columns")
            }
        };
        let keep: Vec<usize> = (0..self.n()).filter(|i| !positions.contains(i)).collect();
        let code = LinearCode::new(&sub.select_cols(&keep));
        Shortened {
            excess: code.k() > expected_k,
            expected_k,
            code,
        }
    }

    /// Deletes `positions`; the dimension may drop.
    pub fn puncture(&self, positions: &BTreeSet<usize>) -> LinearCode {
        let keep: Vec<usize> = (0..self.n()).filter(|i| !positions.contains(i)).collect();
        LinearCode::new(&self.generator.select_cols(&keep))
    }

    /// Keeps the first `n` positions.
    pub fn truncate(&self, n: usize) -> LinearCode {
        let drop: BTreeSet<usize> = (n.min(self.n())..self.n()).collect();
        self.puncture(&drop)
    }

    /// Removes zero columns and every column proportional to an earlier one,
    /// leaving a code whose dual distance is at least 3.
    pub fn projectivize(&self) -> LinearCode {
        let f = self.field();
        let mut seen = BTreeSet::new();
        let mut drop = BTreeSet::new();
        for j in 0..self.n() {
            let col: Vec<u32> = (0..self.k()).map(|i| self.generator.get(i, j)).collect();
            let Some(&lead) = col.iter().find(|&&v| v != 0) else {
                drop.insert(j);
                continue;
            };
            let inv = f.inv(lead).expect("nonzero");
            let norm: Vec<u32> = col.iter().map(|&v| f.mul(v, inv)).collect();
            if !seen.insert(norm) {
                drop.insert(j);
            }
        }
        self.puncture(&drop)
    }

    /// Applies a monomial transformation: permutation `perm` (new position
    /// `i` takes old column `perm[i]`) and column scalars `scale`.
    pub fn monomial_transform(&self, perm: &[usize], scale: &[u32]) -> LinearCode {
        let f = self.field().clone();
        let g = &self.generator;
        let m = Matrix::from_fn(&f, self.k(), self.n(), |i, j| {
            f.mul(g.get(i, perm[j]), scale[j])
        });
        LinearCode::new(&m)
    }

    /// Uniform `k × n` generator, redrawn until full rank.
    pub fn random<R: Rng + ?Sized>(
        field: &Field,
        n: usize,
        k: usize,
        rng: &mut R,
    ) -> Result<LinearCode> {
        if k > n {
            return Err(CodeError::Parameters(format!("k={k} exceeds n={n}")));
        }
        for _ in 0..MAX_DRAWS {
            let g = Matrix::random(field, k, n, rng);
            let code = LinearCode::new(&g);
            if code.k() == k {
                return Ok(code);
            }
        }
        Err(CodeError::RejectionCap(MAX_DRAWS))
    }

    /// Random code conditioned on exact `d` and `d⊥`, by rejection.
    pub fn random_conditioned<R: Rng + ?Sized>(
        field: &Field,
        n: usize,
        k: usize,
        d: usize,
        d_dual: usize,
        rng: &mut R,
    ) -> Result<(LinearCode, u64)> {
        for draw in 1..=MAX_DRAWS {
            let code = Self::random(field, n, k, rng)?;
            if code.min_distance(None)? != Distance::Exact(d) {
                continue;
            }
            if code.dual_distance_exact(d_dual + 1)? == Some(d_dual) {
                return Ok((code, draw));
            }
        }
        Err(CodeError::RejectionCap(MAX_DRAWS))
    }

    /// Dimensions of `C^{<r>}` for `r = 1..=r_max` and the first `r` with
    /// `C^{<r>} = F^n`, if reached.
    pub fn power_dims(&self, r_max: usize) -> (Vec<usize>, Option<usize>) {
        let mut dims = Vec::new();
        let mut reg = None;
        let mut basis = self.generator.clone();
        for r in 1..=r_max {
            if r > 1 {
                basis = schur_product(&basis, &self.generator).rref().basis();
            }
            dims.push(basis.rows());
            if reg.is_none() && basis.rows() == self.n() {
                reg = Some(r);
            }
        }
        (dims, reg)
    }

    /// Code file: header `q n k`, then the generator rows.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.q(), self.n(), self.k());
        for line in self.generator.to_text().lines().skip(1) {
            s.push_str(line);
            s.push('\n');
        }
        s
    }

    /// Reads a code file; the header lists `q n k`, unlike the `q r c`
    /// order of a bare matrix file.
    pub fn from_text(text: &str, field: Option<&Field>) -> Result<LinearCode> {
        let mut lines = text.lines().skip_while(|l| l.trim().is_empty());
        let header = lines.next().unwrap_or("");
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 {
            return Err(LinalgError::Parse(format!("bad code header `{header}`")).into());
        }
        let body: Vec<&str> = lines.collect();
        let swapped = format!("{} {} {}\n{}", h[0], h[2], h[1], body.join("\n"));
        LinearCode::new_strict(&Matrix::from_text(&swapped, field)?)
    }
}

/// Rows `a_i * b_j` (entrywise) for all pairs.
pub(crate) fn schur_product(a: &Matrix, b: &Matrix) -> Matrix {
    let f = a.field().clone();
    let n = a.cols();
    let mut out = a.zeros_like(a.rows() * b.rows(), n);
    let arows = a.to_rows();
    let brows = b.to_rows();
    for (i, ra) in arows.iter().enumerate() {
        for (j, rb) in brows.iter().enumerate() {
            let r = i * brows.len() + j;
            for c in 0..n {
                let v = f.mul(ra[c], rb[c]);
                if v != 0 {
                    out.set(r, c, v);
                }
            }
        }
    }
    out
}

/// The [7,4] binary Hamming code.
pub fn hamming_7_4() -> LinearCode {
    let f = Field::prime(2).expect("prime");
    let rows = vec![
        vec![1, 0, 0, 0, 0, 1, 1],
        vec![0, 1, 0, 0, 1, 0, 1],
        vec![0, 0, 1, 0, 1, 1, 0],
        vec![0, 0, 0, 1, 1, 1, 1],
    ];
    LinearCode::new(&Matrix::from_rows(&f, &rows).expect("well formed"))
}

/// The [23,12] binary Golay code, generated by the cyclic shifts of
/// `g(x) = x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1`.
pub fn golay_23() -> LinearCode {
    cyclic_code(2, 23, &[1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1])
}

/// The [11,6] ternary Golay code, generated by the cyclic shifts of
/// `g(x) = x^5 + x^4 − x^3 + x^2 − 1`.
pub fn golay_11() -> LinearCode {
    cyclic_code(3, 11, &[2, 0, 1, 2, 1, 1])
}

/// Cyclic code of length `n` with generator polynomial `g` (constant term first).
pub fn cyclic_code(q: u64, n: usize, g: &[u32]) -> LinearCode {
    let f = Field::with_order(q).expect("prime power");
    let k = n + 1 - g.len();
    let m = Matrix::from_fn(&f, k, n, |i, j| {
        if j >= i && j - i < g.len() {
            g[j - i]
        } else {
            0
        }
    });
    LinearCode::new(&m)
}

/// The `[k+1, k]` single parity-check code.
pub fn parity_code(field: &Field, k: usize) -> LinearCode {
    let m = Matrix::from_fn(field, k, k + 1, |i, j| u32::from(j == i || j == k));
    LinearCode::new(&m)
}
