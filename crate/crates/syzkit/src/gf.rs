//! Finite fields GF(p^a) of order at most 2^20.
//!
//! Elements are stored as the integer `Σ c_i p^i` of their coordinates in the
//! polynomial basis of `GF(p)[X]/(f)`. The hot paths of the crate work on these
//! raw `u32` encodings through [`Field`] methods; [`FieldElement`] is the
//! checked wrapper that carries its field along.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

pub mod poly;

pub use poly::{find_irreducible, PolyMode};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;
/// Orders up to this bound get discrete-log tables.
const TABLE_LIMIT: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds 2^20")]
    OrderOverflow(u64),
    #[error("modulus must be monic of degree {0} with coefficients below {1}")]
    BadModulus(u32, u32),
    #[error("reducible modulus")]
    ReducibleModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch")]
    FieldMismatch,
    #[error("{0} is not an element of GF({1})")]
    NotAnElement(u64, u32),
    #[error("GF({0}) is not a subfield of GF({1})")]
    NotSubfield(u32, u32),
    #[error("no suitable polynomial after {0} draws")]
    RetryCap(u64),
    #[error("malformed field descriptor: {0}")]
    Descriptor(String),
}

pub type Result<T> = std::result::Result<T, GfError>;

struct Inner {
    p: u32,
    a: u32,
    q: u32,
    /// `a + 1` coefficients, constant term first, leading one last.
    modulus: Vec<u32>,
    /// Modulus without its leading term, as an encoded element (the value of `X^a`).
    x_pow_a: u32,
    generator: u32,
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`; empty above `TABLE_LIMIT`.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field GF(p^a). Cheap to clone; shares immutable tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) [{}]", self.q(), self.descriptor())
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomial arithmetic over the prime field, used only at construction.
mod fp {
    pub fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let inv = inv(b[db], p);
        while r.len() > db {
            let lead = r.len() - 1;
            let c = (r[lead] as u64 * inv as u64 % p as u64) as u32;
            let shift = lead - db;
            for (i, &bi) in b.iter().enumerate() {
                let sub = (c as u64 * bi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn inv(x: u32, p: u32) -> u32 {
        let mut result = 1u64;
        let mut base = x as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        result as u32
    }

    /// Irreducibility by trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = f.len() - 1;
        for d in 1..=deg / 2 {
            let count = (p as u64).pow(d as u32);
            for n in 0..count {
                let mut div = Vec::with_capacity(d + 1);
                let mut m = n;
                for _ in 0..d {
                    div.push((m % p as u64) as u32);
                    m /= p as u64;
                }
                div.push(1);
                if rem(f, &div, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl Field {
    /// Builds GF(p^a). Without a modulus the canonical one is used: the
    /// lexicographically smallest monic irreducible, comparing `c_0` first.
    pub fn new(p: u64, a: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if a == 0 {
            return Err(GfError::ZeroDegree);
        }
        let order = (p as u128).checked_pow(a).unwrap_or(u128::MAX);
        if order > MAX_ORDER as u128 {
            return Err(GfError::OrderOverflow(order.min(u64::MAX as u128) as u64));
        }
        let p = p as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != a as usize + 1 || m[a as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(GfError::BadModulus(a, p));
                }
                if !fp::is_irreducible(m, p) {
                    return Err(GfError::ReducibleModulus);
                }
                m.to_vec()
            }
            None => Self::default_modulus(p, a),
        };
        Ok(Self::from_modulus(p, a, modulus))
    }

    /// Prime field GF(p).
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// GF(q) with the canonical modulus; `q` must be a prime power.
    pub fn with_order(q: u64) -> Result<Field> {
        let factors = prime_factors(q);
        if factors.len() != 1 {
            return Err(GfError::NotPrime(q));
        }
        let p = factors[0];
        let mut a = 0;
        let mut m = 1;
        while m < q {
            m *= p;
            a += 1;
        }
        Field::new(p, a, None)
    }

    fn default_modulus(p: u32, a: u32) -> Vec<u32> {
        // Enumerate N = Σ c_i p^{a-1-i}: increasing N is lexicographic with c_0 most significant.
        let count = (p as u64).pow(a);
        for n in 0..count {
            let mut coeffs = vec![0u32; a as usize + 1];
            let mut m = n;
            for i in (0..a as usize).rev() {
                coeffs[i] = (m % p as u64) as u32;
                m /= p as u64;
            }
            coeffs[a as usize] = 1;
            if fp::is_irreducible(&coeffs, p) {
                return coeffs;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn from_modulus(p: u32, a: u32, modulus: Vec<u32>) -> Field {
        let q = p.pow(a);
        let mut x_pow_a = 0u32;
        let mut pw = 1u32;
        for &c in &modulus[..a as usize] {
            x_pow_a += ((p - c) % p) * pw;
            pw = pw.wrapping_mul(p);
        }
        let mut inner = Inner {
            p,
            a,
            q,
            modulus,
            x_pow_a,
            generator: 1,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let field = Field(Arc::new(Inner {
            modulus: inner.modulus.clone(),
            exp: Vec::new(),
            log: Vec::new(),
            ..inner
        }));
        let generator = field.find_generator();
        inner.generator = generator;
        if q <= TABLE_LIMIT && q > 2 {
            let n = (q - 1) as usize;
            let mut exp = vec![0u32; 2 * n];
            let mut log = vec![0u32; q as usize];
            let mut x = 1u32;
            for (i, e) in exp.iter_mut().enumerate().take(n) {
                *e = x;
                log[x as usize] = i as u32;
                x = field.mul_poly(x, generator);
            }
            for i in n..2 * n {
                exp[i] = exp[i - n];
            }
            inner.exp = exp;
            inner.log = log;
        }
        Field(Arc::new(inner))
    }

    /// Smallest encoding of multiplicative order `q - 1`.
    fn find_generator(&self) -> u32 {
        let q = self.q();
        if q == 2 {
            return 1;
        }
        let n = (q - 1) as u64;
        let factors = prime_factors(n);
        (1..q)
            .find(|&g| factors.iter().all(|&l| self.pow_slow(g, n / l) != 1))
            .expect("multiplicative group is cyclic")
    }

    fn pow_slow(&self, x: u32, mut e: u64) -> u32 {
        let mut result = 1u32;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_poly(result, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        result
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn degree(&self) -> u32 {
        self.0.a
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    /// The fixed primitive element behind the log tables.
    pub fn generator(&self) -> u32 {
        self.0.generator
    }
    pub fn is_binary(&self) -> bool {
        self.0.p == 2
    }

    /// Coordinates `c_0..c_{a-1}` of an encoded element.
    pub fn digits(&self, mut x: u32) -> Vec<u32> {
        let p = self.0.p;
        (0..self.0.a)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        let p = self.0.p;
        digits.iter().rev().fold(0u32, |acc, &d| acc * p + d % p)
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            x ^ y
        } else if self.0.a == 1 {
            let s = x + y;
            if s >= p {
                s - p
            } else {
                s
            }
        } else {
            let (mut x, mut y, mut out, mut pw) = (x, y, 0u32, 1u32);
            while x > 0 || y > 0 {
                out += ((x % p + y % p) % p) * pw;
                x /= p;
                y /= p;
                pw *= p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            x
        } else if self.0.a == 1 {
            (p - x) % p
        } else {
            let (mut x, mut out, mut pw) = (x, 0u32, 1u32);
            while x > 0 {
                out += ((p - x % p) % p) * pw;
                x /= p;
                pw *= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let inner = &*self.0;
        if !inner.exp.is_empty() {
            inner.exp[(inner.log[x as usize] + inner.log[y as usize]) as usize]
        } else if inner.a == 1 {
            (x as u64 * y as u64 % inner.p as u64) as u32
        } else {
            self.mul_poly(x, y)
        }
    }

    /// Schoolbook product in `GF(p)[X]/(f)`: carry-less in characteristic 2.
    fn mul_poly(&self, x: u32, y: u32) -> u32 {
        let inner = &*self.0;
        let a = inner.a;
        if inner.a == 1 {
            return (x as u64 * y as u64 % inner.p as u64) as u32;
        }
        if inner.p == 2 {
            let mut prod = 0u64;
            for i in 0..a {
                if (y >> i) & 1 == 1 {
                    prod ^= (x as u64) << i;
                }
            }
            let full = self.modulus_bits();
            for i in (a..2 * a).rev() {
                if (prod >> i) & 1 == 1 {
                    prod ^= full << (i - a);
                }
            }
            return prod as u32;
        }
        let p = inner.p as u64;
        let xd = self.digits(x);
        let yd = self.digits(y);
        let mut prod = vec![0u64; 2 * a as usize - 1];
        for (i, &xi) in xd.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in yd.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        let m = &inner.modulus;
        for i in (a as usize..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            let shift = i - a as usize;
            for (j, &mj) in m.iter().enumerate() {
                prod[shift + j] = (prod[shift + j] + (p - c) * mj as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..a as usize].iter().map(|&d| d as u32).collect();
        self.from_digits(&digits)
    }

    fn modulus_bits(&self) -> u64 {
        self.0
            .modulus
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i))
    }

    /// Square-and-multiply.
    pub fn pow(&self, x: u32, e: u64) -> u32 {
        let mut result = 1u32;
        let mut base = x;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, x: u32) -> Result<u32> {
        if x == 0 {
            return Err(GfError::DivisionByZero);
        }
        let inner = &*self.0;
        if !inner.exp.is_empty() {
            let n = inner.q - 1;
            Ok(inner.exp[((n - inner.log[x as usize]) % n) as usize])
        } else {
            Ok(self.pow(x, inner.q as u64 - 2))
        }
    }

    pub fn div(&self, x: u32, y: u32) -> Result<u32> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// The element `X`, i.e. the class of the indeterminate.
    pub fn x(&self) -> u32 {
        if self.0.a == 1 {
            0
        } else {
            self.0.p
        }
    }

    /// Value of `X^a` reduced, exposed for tests of the reduction rule.
    pub fn x_pow_degree(&self) -> u32 {
        self.0.x_pow_a
    }

    /// Frobenius `x ↦ x^{q_sub^i}` where `q_sub = p^b` and `b` divides `a`.
    pub fn frobenius(&self, x: u32, q_sub: u32, i: u32) -> Result<u32> {
        let b = self.sub_degree(q_sub)?;
        if x == 0 {
            return Ok(0);
        }
        let n = (self.q() - 1) as u64;
        let mut e = 1u64;
        let step = (self.p() as u64).pow(b) % n.max(1);
        for _ in 0..i {
            e = e * step % n.max(1);
        }
        Ok(self.pow(x, if n == 1 { 1 } else { e }))
    }

    fn sub_degree(&self, q_sub: u32) -> Result<u32> {
        let p = self.p();
        let mut b = 0;
        let mut m = 1u32;
        while m < q_sub {
            m = m.saturating_mul(p);
            b += 1;
        }
        if m != q_sub || b == 0 || self.degree() % b != 0 {
            return Err(GfError::NotSubfield(q_sub, self.q()));
        }
        Ok(b)
    }

    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value >= self.q() as u64 {
            return Err(GfError::NotAnElement(value, self.q()));
        }
        Ok(FieldElement {
            field: self.clone(),
            value: value as u32,
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: 1,
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(0..self.q())
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(1..self.q())
    }

    /// `p a c_0 c_1 … c_a`.
    pub fn descriptor(&self) -> String {
        let mut s = format!("{} {}", self.p(), self.degree());
        for c in self.modulus() {
            s.push_str(&format!(" {c}"));
        }
        s
    }

    pub fn from_descriptor(s: &str) -> Result<Field> {
        let nums: Vec<u64> = s
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| GfError::Descriptor(e.to_string()))?;
        if nums.len() < 2 {
            return Err(GfError::Descriptor("expected `p a c_0 … c_a`".into()));
        }
        let (p, a) = (nums[0], nums[1]);
        if a > 64 || nums.len() != a as usize + 3 {
            return Err(GfError::Descriptor(format!(
                "expected {} modulus coefficients",
                a + 1
            )));
        }
        let coeffs: Vec<u32> = nums[2..]
            .iter()
            .map(|&c| c.min(u32::MAX as u64) as u32)
            .collect();
        Field::new(p, a as u32, Some(&coeffs))
    }
}

/// An element tagged with its field; arithmetic checks that operands agree.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈GF({})", self.value, self.field.q())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    fn wrap(&self, value: u32) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }
    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }
    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }
    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.div(self.value, other.value)?))
    }
    pub fn neg(&self) -> FieldElement {
        self.wrap(self.field.neg(self.value))
    }
    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }
    pub fn pow(&self, e: u64) -> FieldElement {
        self.wrap(self.field.pow(self.value, e))
    }
    pub fn frobenius(&self, q_sub: u32, i: u32) -> Result<FieldElement> {
        Ok(self.wrap(self.field.frobenius(self.value, q_sub, i)?))
    }
}

/// GF(q) inside GF(q^m), with the basis `b_j = g^{j}` (`b_1 = 1`) of the big
/// field over the small one, `g` the big field's generator.
#[derive(Clone, Debug)]
pub struct SubfieldEmbedding {
    small: Field,
    big: Field,
    m: usize,
    inject: Vec<u32>,
    basis: Vec<u32>,
    /// `a_big × a_big` matrix over GF(p): big-field digits to (θ^i b_j) coordinates.
    to_coords: Vec<Vec<u32>>,
}

impl SubfieldEmbedding {
    pub fn new(small: &Field, big: &Field) -> Result<SubfieldEmbedding> {
        let (a_s, a_b) = (small.degree() as usize, big.degree() as usize);
        if small.p() != big.p() || a_b % a_s != 0 {
            return Err(GfError::NotSubfield(small.q(), big.q()));
        }
        let m = a_b / a_s;
        let p = big.p();
        // θ: a root of the small modulus among the powers of γ = g^{(Q-1)/(q-1)}.
        let theta = if a_s == 1 {
            0
        } else {
            let gamma = big.pow(big.generator(), ((big.q() - 1) / (small.q() - 1)) as u64);
            let eval = |z: u32| {
                small
                    .modulus()
                    .iter()
                    .rev()
                    .fold(0u32, |acc, &c| big.add(big.mul(acc, z), c))
            };
            let mut z = 1u32;
            let mut found = None;
            for _ in 0..small.q() - 1 {
                if eval(z) == 0 {
                    found = Some(z);
                    break;
                }
                z = big.mul(z, gamma);
            }
            found.expect("subfield contains a root of its own modulus")
        };
        let theta_pows: Vec<u32> = (0..a_s).map(|i| big.pow(theta, i as u64)).collect();
        let inject: Vec<u32> = (0..small.q())
            .map(|c| {
                small
                    .digits(c)
                    .iter()
                    .zip(&theta_pows)
                    .fold(0u32, |acc, (&d, &t)| big.add(acc, big.mul(d, t)))
            })
            .collect();
        let basis: Vec<u32> = (0..m).map(|j| big.pow(big.generator(), j as u64)).collect();
        // Column i + a_s·j holds the digits of θ^i b_j.
        let mut a_mat = vec![vec![0u32; a_b]; a_b];
        for (j, &b) in basis.iter().enumerate() {
            for (i, &t) in theta_pows.iter().enumerate() {
                let digits = big.digits(big.mul(t, b));
                for (r, &d) in digits.iter().enumerate() {
                    a_mat[r][i + a_s * j] = d;
                }
            }
        }
        let to_coords = invert_mod_p(a_mat, p).ok_or(GfError::NotSubfield(small.q(), big.q()))?;
        Ok(SubfieldEmbedding {
            small: small.clone(),
            big: big.clone(),
            m,
            inject,
            basis,
            to_coords,
        })
    }

    pub fn small(&self) -> &Field {
        &self.small
    }
    pub fn big(&self) -> &Field {
        &self.big
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn inject(&self, x: u32) -> u32 {
        self.inject[x as usize]
    }

    /// Coordinates over the small field: `Σ_j expand(x)_j · b_j = x`.
    pub fn expand(&self, x: u32) -> Vec<u32> {
        let a_s = self.small.degree() as usize;
        let p = self.big.p() as u64;
        let digits = self.big.digits(x);
        let coords: Vec<u32> = self
            .to_coords
            .iter()
            .map(|row| {
                (row.iter()
                    .zip(&digits)
                    .map(|(&r, &d)| r as u64 * d as u64)
                    .sum::<u64>()
                    % p) as u32
            })
            .collect();
        coords
            .chunks(a_s)
            .map(|c| self.small.from_digits(c))
            .collect()
    }

    pub fn recombine(&self, coords: &[u32]) -> u32 {
        coords.iter().zip(&self.basis).fold(0u32, |acc, (&c, &b)| {
            self.big.add(acc, self.big.mul(self.inject(c), b))
        })
    }
}

fn invert_mod_p(mut a: Vec<Vec<u32>>, p: u32) -> Option<Vec<Vec<u32>>> {
    let n = a.len();
    let p64 = p as u64;
    let mut inv: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let s = fp::inv(a[col][col], p) as u64;
        for j in 0..n {
            a[col][j] = (a[col][j] as u64 * s % p64) as u32;
            inv[col][j] = (inv[col][j] as u64 * s % p64) as u32;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col] as u64;
                for j in 0..n {
                    a[r][j] = ((a[r][j] as u64 + (p64 - f) * a[col][j] as u64) % p64) as u32;
                    inv[r][j] = ((inv[r][j] as u64 + (p64 - f) * inv[col][j] as u64) % p64) as u32;
                }
            }
        }
    }
    Some(inv)
}
