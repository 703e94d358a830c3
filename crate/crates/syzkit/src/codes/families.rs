//! Algebraic families (GRS, dual alternant, dual Goppa) and the π code.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{CodeError, LinearCode, Result, MAX_DRAWS};
use crate::gf::poly::{self, PolyMode};
use crate::gf::{Field, SubfieldEmbedding};
use crate::linalg::Matrix;

/// Support `x` (pairwise distinct) and multiplier `y` (nonzero) over GF(q^m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportMultiplier {
    field: Field,
    x: Vec<u32>,
    y: Vec<u32>,
}

impl SupportMultiplier {
    pub fn new(field: &Field, x: Vec<u32>, y: Vec<u32>) -> Result<SupportMultiplier> {
        if x.len() != y.len() {
            return Err(CodeError::Parameters(
                "support and multiplier lengths differ".into(),
            ));
        }
        let mut sorted = x.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(CodeError::RepeatedSupport);
        }
        if y.contains(&0) {
            return Err(CodeError::ZeroMultiplier);
        }
        if x.iter().chain(&y).any(|&v| v >= field.q()) {
            return Err(CodeError::Parameters("entry outside the field".into()));
        }
        Ok(SupportMultiplier {
            field: field.clone(),
            x,
            y,
        })
    }

    /// `n` distinct uniform support entries and uniform nonzero multipliers.
    pub fn random<R: Rng + ?Sized>(
        field: &Field,
        n: usize,
        rng: &mut R,
    ) -> Result<SupportMultiplier> {
        let x = random_support(field, n, rng)?;
        let y = (0..n).map(|_| field.random_nonzero(rng)).collect();
        Ok(SupportMultiplier {
            field: field.clone(),
            x,
            y,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.x.len()
    }
    pub fn x(&self) -> &[u32] {
        &self.x
    }
    pub fn y(&self) -> &[u32] {
        &self.y
    }
}

/// `n` distinct field elements by a partial Fisher–Yates shuffle.
pub(crate) fn random_support<R: Rng + ?Sized>(
    field: &Field,
    n: usize,
    rng: &mut R,
) -> Result<Vec<u32>> {
    let q = field.q() as usize;
    if n > q {
        return Err(CodeError::Parameters(format!(
            "n={n} exceeds field order {q}"
        )));
    }
    let mut all: Vec<u32> = (0..field.q()).collect();
    for i in 0..n {
        let j = rng.random_range(i..q);
        all.swap(i, j);
    }
    all.truncate(n);
    Ok(all)
}

/// Rows `y·x^i` for `0 ≤ i < k`.
pub fn grs_code(sm: &SupportMultiplier, k: usize) -> Result<LinearCode> {
    if k > sm.n() {
        return Err(CodeError::Parameters(format!("k={k} exceeds n={}", sm.n())));
    }
    let f = sm.field();
    let m = Matrix::from_fn(f, k, sm.n(), |i, j| {
        f.mul(sm.y[j], f.pow(sm.x[j], i as u64))
    });
    Ok(LinearCode::new(&m))
}

/// Subfield expansion of the parity rows `y·x^j`, `0 ≤ j < t`; the flag
/// reports whether the dimension is `mt`.
pub fn dual_alternant_code(
    sm: &SupportMultiplier,
    t: usize,
    emb: &SubfieldEmbedding,
) -> Result<(LinearCode, bool)> {
    if sm.field() != emb.big() {
        return Err(CodeError::Parameters(
            "support lives outside the big field".into(),
        ));
    }
    let m = emb.m();
    if m * t > sm.n() {
        return Err(CodeError::Parameters(format!(
            "mt={} exceeds n={}",
            m * t,
            sm.n()
        )));
    }
    let f = sm.field();
    let mut out = Matrix::zeros(emb.small(), m * t, sm.n());
    for (col, (&x, &y)) in sm.x.iter().zip(&sm.y).enumerate() {
        let mut v = y;
        for j in 0..t {
            for (l, c) in emb.expand(v).into_iter().enumerate() {
                if c != 0 {
                    out.set(j * m + l, col, c);
                }
            }
            v = f.mul(v, x);
        }
    }
    let code = LinearCode::new(&out);
    let proper = code.k() == m * t;
    Ok((code, proper))
}

/// Dual alternant code with `t = deg g` and `y = g(x)^{-1}`.
pub fn dual_goppa_code(
    x: &[u32],
    g: &[u32],
    emb: &SubfieldEmbedding,
) -> Result<(LinearCode, bool)> {
    let f = emb.big();
    let t = poly::degree(g).ok_or_else(|| CodeError::Parameters("zero Goppa polynomial".into()))?;
    let y = x
        .iter()
        .map(|&xi| {
            f.inv(poly::eval(f, g, xi))
                .map_err(|_| CodeError::RootInSupport)
        })
        .collect::<Result<Vec<_>>>()?;
    let sm = SupportMultiplier::new(f, x.to_vec(), y)?;
    dual_alternant_code(&sm, t, emb)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    AltDual,
    GoppaDual,
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "alt-dual" => Ok(Family::AltDual),
            "goppa-dual" => Ok(Family::GoppaDual),
            other => Err(format!("unknown family `{other}` (alt-dual, goppa-dual)")),
        }
    }
}

/// A random family `Alt⊥_{q,m,n,t}` or `Gop⊥_{q,m,n,t}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub q: u64,
    pub m: usize,
    pub n: usize,
    pub t: usize,
    pub mode: PolyMode,
}

/// One accepted draw; `retries` counts rejected (improper or root-hitting) draws.
#[derive(Clone, Debug)]
pub struct FamilySample {
    pub code: LinearCode,
    pub support: Vec<u32>,
    pub multiplier: Vec<u32>,
    pub goppa: Option<Vec<u32>>,
    pub retries: u64,
}

impl FamilySpec {
    /// `n` defaults to the full field, `q^m`.
    pub fn new(
        family: Family,
        q: u64,
        m: usize,
        t: usize,
        n: Option<usize>,
        mode: PolyMode,
    ) -> Result<FamilySpec> {
        let order = q
            .checked_pow(m as u32)
            .filter(|&o| o <= 1 << 20)
            .ok_or_else(|| CodeError::Parameters(format!("q^m = {q}^{m} exceeds 2^20")))?;
        let spec = FamilySpec {
            family,
            q,
            m,
            n: n.unwrap_or(order as usize),
            t,
            mode,
        };
        if t == 0 || m == 0 {
            return Err(CodeError::Parameters("t and m must be positive".into()));
        }
        if spec.n as u64 > order {
            return Err(CodeError::Parameters(format!(
                "n={} exceeds q^m={order}",
                spec.n
            )));
        }
        if m * t > spec.n {
            return Err(CodeError::Parameters(format!(
                "mt={} exceeds n={}",
                m * t,
                spec.n
            )));
        }
        Ok(spec)
    }

    pub fn k(&self) -> usize {
        self.m * self.t
    }

    pub fn embedding(&self) -> Result<SubfieldEmbedding> {
        let small = Field::with_order(self.q)?;
        let big = Field::with_order(self.q.pow(self.m as u32))?;
        Ok(SubfieldEmbedding::new(&small, &big)?)
    }

    /// Draws until the code is proper.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        emb: &SubfieldEmbedding,
        rng: &mut R,
    ) -> Result<FamilySample> {
        let big = emb.big();
        for retries in 0..MAX_DRAWS {
            let x = random_support(big, self.n, rng)?;
            let (code, proper, multiplier, goppa) = match self.family {
                Family::AltDual => {
                    let y: Vec<u32> = (0..self.n).map(|_| big.random_nonzero(rng)).collect();
                    let sm = SupportMultiplier::new(big, x.clone(), y.clone())?;
                    let (code, proper) = dual_alternant_code(&sm, self.t, emb)?;
                    (code, proper, y, None)
                }
                Family::GoppaDual => {
                    let g = poly::find_irreducible(big, self.t, self.mode, rng)?;
                    match dual_goppa_code(&x, &g, emb) {
                        Ok((code, proper)) => {
                            let y = x
                                .iter()
                                .map(|&v| big.inv(poly::eval(big, &g, v)).expect("no root"))
                                .collect();
                            (code, proper, y, Some(g))
                        }
                        Err(CodeError::RootInSupport) => continue,
                        Err(e) => return Err(e),
                    }
                }
            };
            if proper {
                return Ok(FamilySample {
                    code,
                    support: x,
                    multiplier,
                    goppa,
                    retries,
                });
            }
        }
        Err(CodeError::RejectionCap(MAX_DRAWS))
    }
}

/// The first `count` bits of π in binary, starting with the integer part `11`.
pub fn pi_bits(count: usize) -> Vec<u8> {
    let guard = 64;
    let frac = count.saturating_sub(2) + guard;
    let scale = BigInt::one() << frac;
    let pi = (arctan_inv(5, &scale) * 16u32) - (arctan_inv(239, &scale) * 4u32);
    let top = pi >> guard;
    (0..count)
        .rev()
        .map(|i| u8::from(top.bit(i as u64)))
        .collect()
}

/// `scale · arctan(1/x)` by its alternating series, truncated per term.
fn arctan_inv(x: u32, scale: &BigInt) -> BigInt {
    let x2 = BigInt::from(x) * x;
    let mut power = scale / x;
    let mut sum = BigInt::zero();
    let mut i = 0u32;
    while !power.is_zero() {
        let term = &power / (2 * i + 1);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        i += 1;
    }
    sum
}

/// The 12 × 23 binary matrix filled row by row with the first 276 bits of π.
pub fn pi_code() -> LinearCode {
    let f = Field::prime(2).expect("prime");
    let bits = pi_bits(12 * 23);
    let m = Matrix::from_fn(&f, 12, 23, |i, j| u32::from(bits[i * 23 + j]));
    LinearCode::new(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pi_prefix() {
        // π = 11.0010010000111111011010101000100010000101101000110000100011010011...
        let expect = "110010010000111111011010101000100010000101101000110000100011010011";
        let got: String = pi_bits(expect.len())
            .iter()
            .map(|b| char::from(b'0' + b))
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn grs_small_example() {
        let f = Field::with_order(4).unwrap();
        let sm = SupportMultiplier::new(&f, vec![0, 1, 2], vec![1, 1, 1]).unwrap();
        let c = grs_code(&sm, 2).unwrap();
        assert_eq!(c.generator().to_rows(), vec![vec![1, 0, 3], vec![0, 1, 2]]);
        assert_eq!(grs_code(&sm, 3).unwrap().k(), 3);
    }

    #[test]
    fn support_validation() {
        let f = Field::with_order(8).unwrap();
        assert!(matches!(
            SupportMultiplier::new(&f, vec![1, 1], vec![1, 1]),
            Err(CodeError::RepeatedSupport)
        ));
        assert!(matches!(
            SupportMultiplier::new(&f, vec![1, 2], vec![0, 1]),
            Err(CodeError::ZeroMultiplier)
        ));
    }

    #[test]
    fn goppa_root_rejected() {
        let spec = FamilySpec::new(Family::GoppaDual, 2, 4, 2, None, PolyMode::Any).unwrap();
        let emb = spec.embedding().unwrap();
        let x: Vec<u32> = (0..16).collect();
        // g = X(X + 1) vanishes on the support.
        assert!(matches!(
            dual_goppa_code(&x, &[0, 1, 1], &emb),
            Err(CodeError::RootInSupport)
        ));
    }

    #[test]
    fn goppa_2_6_3_is_64_18() {
        let spec = FamilySpec::new(Family::GoppaDual, 2, 6, 3, None, PolyMode::Irr).unwrap();
        let emb = spec.embedding().unwrap();
        let s = spec
            .sample(&emb, &mut ChaCha8Rng::seed_from_u64(1))
            .unwrap();
        assert_eq!((s.code.n(), s.code.k()), (64, 18));
    }
}
