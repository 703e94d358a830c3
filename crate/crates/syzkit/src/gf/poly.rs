//! Univariate polynomials over a [`Field`], coefficients constant term first.
//! Every function returns trimmed vectors (no trailing zeros); the zero
//! polynomial is the empty vector.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Field, GfError, Result};

/// Which Goppa polynomials a family admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyMode {
    Irr,
    Sqfr,
    Any,
}

impl std::str::FromStr for PolyMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "irr" => Ok(PolyMode::Irr),
            "sqfr" => Ok(PolyMode::Sqfr),
            "any" => Ok(PolyMode::Any),
            other => Err(format!(
                "unknown polynomial mode `{other}` (irr, sqfr, any)"
            )),
        }
    }
}

const MAX_DRAWS: u64 = 1_000_000;

pub fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Degree, `None` for zero.
pub fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn add(field: &Field, f: &[u32], g: &[u32]) -> Vec<u32> {
    let n = f.len().max(g.len());
    trim(
        (0..n)
            .map(|i| field.add(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0)))
            .collect(),
    )
}

pub fn sub(field: &Field, f: &[u32], g: &[u32]) -> Vec<u32> {
    let n = f.len().max(g.len());
    trim(
        (0..n)
            .map(|i| field.sub(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0)))
            .collect(),
    )
}

pub fn mul(field: &Field, f: &[u32], g: &[u32]) -> Vec<u32> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(a, b));
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on a zero divisor.
pub fn divrem(field: &Field, f: &[u32], g: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let dg = degree(g).expect("division by the zero polynomial");
    let lead_inv = field.inv(g[dg]).expect("nonzero leading coefficient");
    let mut r = trim(f.to_vec());
    if r.len() <= dg {
        return (Vec::new(), r);
    }
    let mut quot = vec![0u32; r.len() - dg];
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = field.mul(r[dr], lead_inv);
        let shift = dr - dg;
        quot[shift] = c;
        for (j, &gj) in g[..=dg].iter().enumerate() {
            r[shift + j] = field.sub(r[shift + j], field.mul(c, gj));
        }
        r = trim(r);
    }
    (trim(quot), r)
}

pub fn rem(field: &Field, f: &[u32], g: &[u32]) -> Vec<u32> {
    divrem(field, f, g).1
}

pub fn make_monic(field: &Field, f: &[u32]) -> Vec<u32> {
    match degree(f) {
        None => Vec::new(),
        Some(d) => {
            let inv = field.inv(f[d]).expect("nonzero leading coefficient");
            f[..=d].iter().map(|&c| field.mul(c, inv)).collect()
        }
    }
}

/// Monic gcd.
pub fn gcd(field: &Field, f: &[u32], g: &[u32]) -> Vec<u32> {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let r = rem(field, &a, &b);
        a = b;
        b = r;
    }
    make_monic(field, &a)
}

pub fn derivative(field: &Field, f: &[u32]) -> Vec<u32> {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| {
                // i·c as a repeated sum; i reduces mod p.
                let k = (i as u64 % field.p() as u64) as u32;
                field.mul(c, k)
            })
            .collect(),
    )
}

pub fn eval(field: &Field, f: &[u32], x: u32) -> u32 {
    f.iter()
        .rev()
        .fold(0u32, |acc, &c| field.add(field.mul(acc, x), c))
}

pub fn mulmod(field: &Field, f: &[u32], g: &[u32], m: &[u32]) -> Vec<u32> {
    rem(field, &mul(field, f, g), m)
}

pub fn powmod(field: &Field, f: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut result = rem(field, &[1], m);
    let mut base = rem(field, f, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(field, &result, &base, m);
        }
        base = mulmod(field, &base, &base, m);
        e >>= 1;
    }
    result
}

/// `x^{Q^i} mod g` for `i = 0..=count`, `Q` the field order.
pub fn frobenius_powers_of_x(field: &Field, g: &[u32], count: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(count + 1);
    let mut h = rem(field, &[0, 1], g);
    out.push(h.clone());
    for _ in 0..count {
        h = powmod(field, &h, field.q() as u64, g);
        out.push(h.clone());
    }
    out
}

/// Ben-Or: `g` of degree `t` is irreducible iff `gcd(g, x^{Q^i} − x) = 1` for `1 ≤ i ≤ t/2`.
pub fn is_irreducible(field: &Field, g: &[u32]) -> bool {
    let Some(t) = degree(g) else {
        return false;
    };
    if t == 0 {
        return false;
    }
    let pows = frobenius_powers_of_x(field, g, t / 2);
    let x = [0u32, 1];
    pows.iter()
        .skip(1)
        .all(|h| gcd(field, g, &sub(field, h, &x)) == [1])
}

pub fn is_squarefree(field: &Field, g: &[u32]) -> bool {
    gcd(field, g, &derivative(field, g)) == [1]
}

/// A uniformly random monic polynomial of degree `t` satisfying `mode`,
/// drawn by rejection.
pub fn find_irreducible<R: Rng + ?Sized>(
    field: &Field,
    t: usize,
    mode: PolyMode,
    rng: &mut R,
) -> Result<Vec<u32>> {
    for _ in 0..MAX_DRAWS {
        let g: Vec<u32> = (0..t).map(|_| field.random(rng)).chain([1]).collect();
        let ok = match mode {
            PolyMode::Irr => is_irreducible(field, &g),
            PolyMode::Sqfr => is_squarefree(field, &g),
            PolyMode::Any => true,
        };
        if ok {
            return Ok(g);
        }
    }
    Err(GfError::RetryCap(MAX_DRAWS))
}
