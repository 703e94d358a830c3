//! Exact dense matrices over a [`Field`].
//!
//! Two stores share one interface. In characteristic 2 with `a ≤ 8` a row is
//! bit-sliced: plane `b` holds bit `b` of every entry, packed 64 per word, and
//! the planes of a row are contiguous. Every other field uses one `u32` per
//! entry. The dense store can be forced in characteristic 2 so that the fast
//! path can be checked against it.

use std::fmt::Write as _;
use std::io::BufRead;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::gf::{Field, GfError};

mod elim;
mod kernel;

pub use elim::Rref;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("malformed matrix text: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Store {
    Sliced {
        planes: usize,
        words: usize,
        data: Vec<u64>,
    },
    Dense(Vec<u32>),
}

#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    store: Store,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        if self.field != other.field || self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        if let (Store::Sliced { data: a, .. }, Store::Sliced { data: b, .. }) =
            (&self.store, &other.store)
        {
            return a == b;
        }
        (0..self.rows).all(|r| self.row(r) == other.row(r))
    }
}
impl Eq for Matrix {}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "Matrix {}x{} over GF({})",
            self.rows,
            self.cols,
            self.field.q()
        )?;
        for r in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", &self.row(r)[..self.cols.min(32)])?;
        }
        Ok(())
    }
}

pub(crate) fn sliceable(field: &Field) -> bool {
    field.p() == 2 && field.degree() <= 8
}

#[inline]
pub(crate) fn words_for(cols: usize) -> usize {
    cols.div_ceil(64)
}

impl Matrix {
    /// Zero matrix; bit-sliced when the field allows it.
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        if sliceable(field) {
            let planes = field.degree() as usize;
            let words = words_for(cols);
            Matrix {
                field: field.clone(),
                rows,
                cols,
                store: Store::Sliced {
                    planes,
                    words,
                    data: vec![0; rows * planes * words],
                },
            }
        } else {
            Self::zeros_dense(field, rows, cols)
        }
    }

    /// Zero matrix on the generic one-word-per-entry store.
    pub fn zeros_dense(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            store: Store::Dense(vec![0; rows * cols]),
        }
    }

    /// Zero matrix on the same kind of store as `self`.
    pub fn zeros_like(&self, rows: usize, cols: usize) -> Matrix {
        if self.is_sliced() {
            Self::zeros(&self.field, rows, cols)
        } else {
            Self::zeros_dense(&self.field, rows, cols)
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= field.q() {
                    return Err(GfError::NotAnElement(v as u64, field.q()).into());
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> u32,
    ) -> Matrix {
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if v != 0 {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
        let mut m = Self::zeros(field, rows, cols);
        m.fill_random(rng);
        m
    }

    pub(crate) fn fill_random<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let (rows, cols) = (self.rows, self.cols);
        let q = self.field.q();
        match &mut self.store {
            Store::Sliced {
                planes,
                words,
                data,
            } if cols > 0 => {
                let tail = if cols % 64 == 0 {
                    u64::MAX
                } else {
                    (1u64 << (cols % 64)) - 1
                };
                for r in 0..rows {
                    for b in 0..*planes {
                        let base = (r * *planes + b) * *words;
                        for w in 0..*words {
                            let mut x: u64 = rng.random();
                            if w + 1 == *words {
                                x &= tail;
                            }
                            data[base + w] = x;
                        }
                    }
                }
            }
            Store::Sliced { .. } => {}
            Store::Dense(d) => d.iter_mut().for_each(|x| *x = rng.random_range(0..q)),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_sliced(&self) -> bool {
        matches!(self.store, Store::Sliced { .. })
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        debug_assert!(r < self.rows && c < self.cols);
        match &self.store {
            Store::Sliced {
                planes,
                words,
                data,
            } => {
                let base = r * planes * words + c / 64;
                let bit = c % 64;
                let mut v = 0u32;
                for b in 0..*planes {
                    v |= (((data[base + b * words] >> bit) & 1) as u32) << b;
                }
                v
            }
            Store::Dense(d) => d[r * self.cols + c],
        }
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(r < self.rows && c < self.cols && v < self.field.q());
        let cols = self.cols;
        match &mut self.store {
            Store::Sliced {
                planes,
                words,
                data,
            } => {
                let base = r * *planes * *words + c / 64;
                let mask = 1u64 << (c % 64);
                for b in 0..*planes {
                    let w = &mut data[base + b * *words];
                    if (v >> b) & 1 == 1 {
                        *w |= mask;
                    } else {
                        *w &= !mask;
                    }
                }
            }
            Store::Dense(d) => d[r * cols + c] = v,
        }
    }

    pub fn row(&self, r: usize) -> Vec<u32> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.store {
            Store::Sliced { data, .. } => data.iter().all(|&w| w == 0),
            Store::Dense(d) => d.iter().all(|&x| x == 0),
        }
    }

    /// Number of nonzero entries in row `r`.
    pub fn row_weight(&self, r: usize) -> usize {
        match &self.store {
            Store::Sliced {
                planes,
                words,
                data,
            } => {
                let base = r * planes * words;
                (0..*words)
                    .map(|w| {
                        (0..*planes)
                            .fold(0u64, |acc, b| acc | data[base + b * words + w])
                            .count_ones() as usize
                    })
                    .sum()
            }
            Store::Dense(d) => d[r * self.cols..(r + 1) * self.cols]
                .iter()
                .filter(|&&x| x != 0)
                .count(),
        }
    }

    /// Copy on the generic store.
    pub fn to_dense(&self) -> Matrix {
        let mut m = Self::zeros_dense(&self.field, self.rows, self.cols);
        if let Store::Dense(d) = &mut m.store {
            for r in 0..self.rows {
                for c in 0..self.cols {
                    d[r * self.cols + c] = self.get(r, c);
                }
            }
        }
        m
    }

    /// Copy on the preferred store for the field.
    pub fn to_preferred(&self) -> Matrix {
        if self.is_sliced() || !sliceable(&self.field) {
            return self.clone();
        }
        let mut m = Self::zeros(&self.field, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if v != 0 {
                    m.set(r, c, v);
                }
            }
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = self.zeros_like(self.cols, self.rows);
        match &self.store {
            Store::Sliced {
                planes,
                words,
                data,
            } => {
                let Store::Sliced {
                    words: tw,
                    data: td,
                    ..
                } = &mut t.store
                else {
                    unreachable!()
                };
                let stride = planes * words;
                let tstride = planes * *tw;
                for r in 0..self.rows {
                    for b in 0..*planes {
                        let base = r * stride + b * words;
                        for w in 0..*words {
                            let mut x = data[base + w];
                            while x != 0 {
                                let c = w * 64 + x.trailing_zeros() as usize;
                                x &= x - 1;
                                td[c * tstride + b * *tw + r / 64] |= 1u64 << (r % 64);
                            }
                        }
                    }
                }
            }
            Store::Dense(d) => {
                let Store::Dense(td) = &mut t.store else {
                    unreachable!()
                };
                for r in 0..self.rows {
                    for c in 0..self.cols {
                        td[c * self.rows + r] = d[r * self.cols + c];
                    }
                }
            }
        }
        t
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut m = self.zeros_like(idx.len(), self.cols);
        match (&self.store, &mut m.store) {
            (
                Store::Sliced {
                    planes,
                    words,
                    data,
                },
                Store::Sliced { data: md, .. },
            ) => {
                let stride = planes * words;
                for (i, &r) in idx.iter().enumerate() {
                    md[i * stride..(i + 1) * stride]
                        .copy_from_slice(&data[r * stride..(r + 1) * stride]);
                }
            }
            (Store::Dense(d), Store::Dense(md)) => {
                let c = self.cols;
                for (i, &r) in idx.iter().enumerate() {
                    md[i * c..(i + 1) * c].copy_from_slice(&d[r * c..(r + 1) * c]);
                }
            }
            _ => unreachable!(),
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = self.zeros_like(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                let v = self.get(r, c);
                if v != 0 {
                    m.set(r, j, v);
                }
            }
        }
        m
    }

    /// Column range `[start, start + len)` as a new matrix.
    pub fn col_block(&self, start: usize, len: usize) -> Matrix {
        let mut m = self.zeros_like(self.rows, len);
        for r in 0..self.rows {
            m.xor_row_segment(r, 0, self, r, start, len);
        }
        m
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(LinalgError::Dimension("vstack column counts differ".into()));
        }
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        let mut m = self.zeros_like(self.rows + other.rows, self.cols);
        let other = if other.is_sliced() == self.is_sliced() {
            other.clone()
        } else if self.is_sliced() {
            other.to_preferred()
        } else {
            other.to_dense()
        };
        match (&mut m.store, &self.store, &other.store) {
            (
                Store::Sliced { data, .. },
                Store::Sliced { data: a, .. },
                Store::Sliced { data: b, .. },
            ) => {
                data[..a.len()].copy_from_slice(a);
                data[a.len()..].copy_from_slice(b);
            }
            (Store::Dense(data), Store::Dense(a), Store::Dense(b)) => {
                data[..a.len()].copy_from_slice(a);
                data[a.len()..].copy_from_slice(b);
            }
            _ => unreachable!(),
        }
        Ok(m)
    }

    /// Adds `len` entries of `src` row `src_row` starting at `src_col` into
    /// `self` row `dst_row` starting at `dst_col`. Bit offsets need not align.
    pub fn xor_row_segment(
        &mut self,
        dst_row: usize,
        dst_col: usize,
        src: &Matrix,
        src_row: usize,
        src_col: usize,
        len: usize,
    ) {
        debug_assert!(dst_col + len <= self.cols && src_col + len <= src.cols);
        let field = self.field.clone();
        let cols = self.cols;
        match (&mut self.store, &src.store) {
            (
                Store::Sliced {
                    planes,
                    words,
                    data,
                },
                Store::Sliced {
                    words: sw,
                    data: sd,
                    ..
                },
            ) => {
                let base = dst_row * *planes * *words;
                let sbase = src_row * *planes * *sw;
                for b in 0..*planes {
                    let dst = &mut data[base + b * *words..base + (b + 1) * *words];
                    let s = &sd[sbase + b * *sw..sbase + (b + 1) * *sw];
                    xor_bits(dst, dst_col, s, src_col, len);
                }
            }
            (Store::Dense(d), _) => {
                for i in 0..len {
                    let v = src.get(src_row, src_col + i);
                    if v != 0 {
                        let e = &mut d[dst_row * cols + dst_col + i];
                        *e = field.add(*e, v);
                    }
                }
            }
            (Store::Sliced { .. }, Store::Dense(_)) => {
                for i in 0..len {
                    let v = src.get(src_row, src_col + i);
                    if v != 0 {
                        let cur = self.get(dst_row, dst_col + i);
                        self.set(dst_row, dst_col + i, field.add(cur, v));
                    }
                }
            }
        }
    }

    /// `self · other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.is_sliced() && other.is_sliced() {
            Ok(elim::mul_sliced(self, other))
        } else {
            Ok(self.mul_dense(other))
        }
    }

    fn mul_dense(&self, other: &Matrix) -> Matrix {
        let f = &self.field;
        let (n, p) = (self.cols, other.cols);
        let a = self.to_dense();
        let b = other.to_dense();
        let (Store::Dense(ad), Store::Dense(bd)) = (&a.store, &b.store) else {
            unreachable!()
        };
        let mut out = vec![0u32; self.rows * p];
        out.par_chunks_mut(p.max(1))
            .enumerate()
            .for_each(|(i, row)| {
                for k in 0..n {
                    let x = ad[i * n + k];
                    if x == 0 {
                        continue;
                    }
                    for (j, o) in row.iter_mut().enumerate() {
                        let y = bd[k * p + j];
                        if y != 0 {
                            *o = f.add(*o, f.mul(x, y));
                        }
                    }
                }
            });
        let m = Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: p,
            store: Store::Dense(out),
        };
        if self.is_sliced() || other.is_sliced() {
            m.to_preferred()
        } else {
            m
        }
    }

    /// Text form: `q r c`, then `r` lines of `c` encoded entries.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.field.q(), self.rows, self.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{v}");
            }
            s.push('\n');
        }
        s
    }

    /// Parses the text form. The field is the canonical GF(q) unless given.
    pub fn from_text(text: &str, field: Option<&Field>) -> Result<Matrix> {
        Self::read_text(text.as_bytes(), field)
    }

    pub fn read_text<R: BufRead>(reader: R, field: Option<&Field>) -> Result<Matrix> {
        let mut lines = reader.lines().filter(|l| {
            l.as_ref()
                .map_or(true, |s| !s.trim().is_empty() && !s.starts_with('#'))
        });
        let header = lines
            .next()
            .ok_or_else(|| LinalgError::Parse("missing header".into()))??;
        let h: Vec<u64> = header
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| LinalgError::Parse(format!("header: {e}")))?;
        if h.len() != 3 {
            return Err(LinalgError::Parse("header must be `q r c`".into()));
        }
        let field = match field {
            Some(f) if f.q() as u64 == h[0] => f.clone(),
            Some(f) => {
                return Err(LinalgError::Parse(format!(
                    "header field order {} does not match GF({})",
                    h[0],
                    f.q()
                )))
            }
            None => Field::with_order(h[0])?,
        };
        let (rows, cols) = (h[1] as usize, h[2] as usize);
        let mut m = Self::zeros(&field, rows, cols);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| LinalgError::Parse(format!("missing row {r}")))??;
            let vals: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| LinalgError::Parse(format!("row {r}: {e}")))?;
            if vals.len() != cols {
                return Err(LinalgError::Parse(format!(
                    "row {r} has {} entries, expected {cols}",
                    vals.len()
                )));
            }
            for (c, &v) in vals.iter().enumerate() {
                if v >= field.q() {
                    return Err(GfError::NotAnElement(v as u64, field.q()).into());
                }
                if v != 0 {
                    m.set(r, c, v);
                }
            }
        }
        Ok(m)
    }

    /// Column of the first nonzero entry of each row.
    pub fn leading_cols(&self) -> Vec<Option<usize>> {
        match &self.store {
            Store::Sliced {
                planes,
                words,
                data,
            } => (0..self.rows)
                .map(|r| {
                    let base = r * planes * words;
                    (0..*words).find_map(|w| {
                        let x = (0..*planes).fold(0u64, |acc, b| acc | data[base + b * words + w]);
                        (x != 0).then(|| w * 64 + x.trailing_zeros() as usize)
                    })
                })
                .collect(),
            Store::Dense(d) => (0..self.rows)
                .map(|r| {
                    d[r * self.cols..(r + 1) * self.cols]
                        .iter()
                        .position(|&v| v != 0)
                })
                .collect(),
        }
    }

    /// `−self`; a copy in characteristic 2.
    pub fn neg(&self) -> Matrix {
        if self.field.p() == 2 {
            return self.clone();
        }
        let mut m = self.clone();
        if let Store::Dense(d) = &mut m.store {
            for v in d.iter_mut() {
                *v = self.field.neg(*v);
            }
        }
        m
    }

    pub fn rref(&self) -> Rref {
        elim::rref(self)
    }

    pub fn rank(&self) -> usize {
        elim::rank(self)
    }

    /// Canonical (RREF) basis of `{x : M xᵀ = 0}`, one vector per row.
    pub fn right_kernel(&self) -> Matrix {
        kernel::right_kernel(self)
    }

    /// Canonical (RREF) basis of `{y : y M = 0}`, one vector per row.
    pub fn left_kernel(&self) -> Matrix {
        kernel::right_kernel(&self.transpose())
    }
}

/// `dst[dst_bit..dst_bit+len] ^= src[src_bit..src_bit+len]` on packed bits.
pub(crate) fn xor_bits(dst: &mut [u64], dst_bit: usize, src: &[u64], src_bit: usize, len: usize) {
    let mut done = 0;
    while done < len {
        let s = src_bit + done;
        let d = dst_bit + done;
        let (sw, so) = (s / 64, s % 64);
        let (dw, doff) = (d / 64, d % 64);
        let take = (64 - so).min(64 - doff).min(len - done);
        let mut chunk = src[sw] >> so;
        if take < 64 {
            chunk &= (1u64 << take) - 1;
        }
        dst[dw] ^= chunk << doff;
        done += take;
    }
}
