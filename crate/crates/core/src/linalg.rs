//! Dense matrices over GF(q).
//!
//! Elimination and multiplication accumulate unreduced products in `u64` and
//! only reduce a row when its accumulation budget runs out (see
//! [`FieldModulus::lazy_budget`]). For the field sizes this crate selects
//! (q well below 2^20) that means one `%` per entry per operation instead of
//! one per multiply-add.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldModulus};
use crate::rng::SeededRng;
use crate::wire::{ParseError, Reader};

/// Upper bound on `q^(n*n)` accepted by [`enumerate_full_rank`].
pub const ENUMERATION_LIMIT: u64 = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    modulus: FieldModulus,
    data: Vec<u64>,
}

impl Matrix {
    /// Builds a matrix from row-major raw values, reducing each mod q.
    pub fn new(rows: usize, cols: usize, modulus: FieldModulus, mut data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                op: "new",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        for x in &mut data {
            *x = modulus.reduce(*x);
        }
        Ok(Self {
            rows,
            cols,
            modulus,
            data,
        })
    }

    pub fn from_rows<R: AsRef<[u64]>>(modulus: FieldModulus, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::ShapeMismatch {
                    op: "from_rows",
                    left: (rows.len(), cols),
                    right: (1, r.len()),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, modulus, data)
    }

    pub fn column(modulus: FieldModulus, values: &[u64]) -> Self {
        Self::new(values.len(), 1, modulus, values.to_vec()).expect("shape is consistent")
    }

    pub fn zeros(rows: usize, cols: usize, modulus: FieldModulus) -> Self {
        Self {
            rows,
            cols,
            modulus,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, modulus: FieldModulus) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus.value();
        }
        m
    }

    pub fn random(rows: usize, cols: usize, modulus: FieldModulus, rng: &mut SeededRng) -> Self {
        let data = (0..rows * cols).map(|_| rng.field_value(modulus)).collect();
        Self {
            rows,
            cols,
            modulus,
            data,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn modulus(&self) -> FieldModulus {
        self.modulus
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u64> {
        self.data
    }

    #[inline]
    pub fn raw(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.modulus.element(self.raw(i, j))
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.data[i * self.cols + j] = self.modulus.reduce(value);
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// `S[I, :]` for an index vector `I` (repeats allowed).
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            if i >= self.rows {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    limit: self.rows,
                });
            }
            data.extend_from_slice(self.row(i));
        }
        Ok(Self {
            rows: indices.len(),
            cols: self.cols,
            modulus: self.modulus,
            data,
        })
    }

    pub fn slice_rows(&self, range: Range<usize>) -> Result<Self> {
        if range.start > range.end || range.end > self.rows {
            return Err(Error::IndexOutOfRange {
                index: range.end,
                limit: self.rows,
            });
        }
        Ok(Self {
            rows: range.len(),
            cols: self.cols,
            modulus: self.modulus,
            data: self.data[range.start * self.cols..range.end * self.cols].to_vec(),
        })
    }

    pub fn slice_cols(&self, range: Range<usize>) -> Result<Self> {
        if range.start > range.end || range.end > self.cols {
            return Err(Error::IndexOutOfRange {
                index: range.end,
                limit: self.cols,
            });
        }
        let mut data = Vec::with_capacity(self.rows * range.len());
        for i in 0..self.rows {
            data.extend_from_slice(&self.row(i)[range.clone()]);
        }
        Ok(Self {
            rows: self.rows,
            cols: range.len(),
            modulus: self.modulus,
            data,
        })
    }

    pub fn vstack(parts: &[&Matrix]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidParams("vstack of nothing".into()))?;
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            first.check_same(p, "vstack", p.cols == first.cols)?;
            data.extend_from_slice(&p.data);
            rows += p.rows;
        }
        Ok(Self {
            rows,
            cols: first.cols,
            modulus: first.modulus,
            data,
        })
    }

    pub fn hstack(parts: &[&Matrix]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidParams("hstack of nothing".into()))?;
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut data = Vec::with_capacity(first.rows * cols);
        for p in parts {
            first.check_same(p, "hstack", p.rows == first.rows)?;
        }
        for i in 0..first.rows {
            for p in parts {
                data.extend_from_slice(p.row(i));
            }
        }
        Ok(Self {
            rows: first.rows,
            cols,
            modulus: first.modulus,
            data,
        })
    }

    fn check_same(&self, other: &Matrix, op: &'static str, shape_ok: bool) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.value(),
                right: other.modulus.value(),
            });
        }
        if !shape_ok {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Self> {
        self.check_same(other, "add", self.shape() == other.shape())?;
        let q = self.modulus;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| q.add(a, b)).collect();
        Ok(Self { data, ..self.clone() })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Self> {
        self.check_same(other, "sub", self.shape() == other.shape())?;
        let q = self.modulus;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| q.sub(a, b)).collect();
        Ok(Self { data, ..self.clone() })
    }

    pub fn scale(&self, factor: u64) -> Self {
        let q = self.modulus;
        let f = q.reduce(factor);
        let data = self.data.iter().map(|&a| q.mul(a, f)).collect();
        Self { data, ..self.clone() }
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Self> {
        self.check_same(other, "mat_mul", self.cols == other.rows)?;
        let q = self.modulus;
        let budget = q.lazy_budget();
        let n = other.cols;
        let mut out = vec![0u64; self.rows * n];
        for (i, out_row) in out.chunks_mut(n.max(1)).enumerate().take(self.rows) {
            let mut acc = 0u64;
            for (p, &f) in self.row(i).iter().enumerate() {
                if f == 0 {
                    continue;
                }
                let src = other.row(p);
                if budget == 0 {
                    for (t, &s) in out_row.iter_mut().zip(src) {
                        *t = q.add(*t, q.mul(f, s));
                    }
                    continue;
                }
                if acc >= budget {
                    reduce_slice(out_row, q);
                    acc = 0;
                }
                for (t, &s) in out_row.iter_mut().zip(src) {
                    *t += f * s;
                }
                acc += 1;
            }
            reduce_slice(out_row, q);
        }
        Ok(Self {
            rows: self.rows,
            cols: n,
            modulus: q,
            data: out,
        })
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.raw(i, j);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            modulus: self.modulus,
            data,
        }
    }

    /// Rank over GF(q) by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut work = Eliminator::new(self.clone());
        work.forward(self.cols).len()
    }

    pub fn invert(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch {
                op: "invert",
                left: self.shape(),
                right: (self.cols, self.rows),
            });
        }
        self.solve(&Self::identity(self.rows, self.modulus))
    }

    /// Solves `self * x = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &Matrix) -> Result<Self> {
        let n = self.rows;
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch {
                op: "solve",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        self.check_same(rhs, "solve", rhs.rows == n)?;
        let aug = Self::hstack(&[self, rhs])?;
        let mut work = Eliminator::new(aug);
        let pivots = work.forward(n);
        if pivots.len() < n {
            return Err(Error::Singular {
                rank: pivots.len(),
                expected: n,
            });
        }
        work.back_substitute(n);
        work.into_matrix().slice_cols(n..n + rhs.cols)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let w = self.modulus.width_bytes();
        let mut out = Vec::with_capacity(8 + self.data.len() * w);
        out.extend_from_slice(&(self.rows as u32).to_le_bytes());
        out.extend_from_slice(&(self.cols as u32).to_le_bytes());
        for &x in &self.data {
            self.modulus.encode_value(x, &mut out);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], modulus: FieldModulus) -> Result<Self, ParseError> {
        let mut r = Reader::new(bytes);
        let rows = r.u32()? as usize;
        let cols = r.u32()? as usize;
        let data = r.elements(rows * cols, modulus)?;
        r.finish()?;
        Ok(Self {
            rows,
            cols,
            modulus,
            data,
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.modulus)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

#[inline]
fn reduce_slice(xs: &mut [u64], q: FieldModulus) {
    for x in xs {
        *x = q.reduce(*x);
    }
}

/// Row-reduction workspace with per-row lazy-reduction counters.
struct Eliminator {
    m: Matrix,
    budget: u64,
    pending: Vec<u64>,
}

impl Eliminator {
    fn new(m: Matrix) -> Self {
        let budget = m.modulus.lazy_budget();
        let pending = vec![0; m.rows];
        Self { m, budget, pending }
    }

    fn reduce_row(&mut self, r: usize) {
        if self.pending[r] > 0 {
            let q = self.m.modulus;
            reduce_slice(self.m.row_mut(r), q);
            self.pending[r] = 0;
        }
    }

    /// `row[target][cols] += f * row[src][cols]`; `src` must be reduced.
    fn axpy(&mut self, target: usize, src: usize, f: u64, cols: Range<usize>) {
        if self.budget > 0 && self.pending[target] >= self.budget {
            self.reduce_row(target);
        }
        let q = self.m.modulus;
        let w = self.m.cols;
        let (t, s) = if target < src {
            let (lo, hi) = self.m.data.split_at_mut(src * w);
            (&mut lo[target * w..(target + 1) * w], &hi[..w])
        } else {
            let (lo, hi) = self.m.data.split_at_mut(target * w);
            (&mut hi[..w], &lo[src * w..(src + 1) * w])
        };
        let (t, s) = (&mut t[cols.clone()], &s[cols]);
        if self.budget == 0 {
            for (x, &y) in t.iter_mut().zip(s) {
                *x = q.add(*x, q.mul(f, y));
            }
        } else {
            for (x, &y) in t.iter_mut().zip(s) {
                *x += f * y;
            }
            self.pending[target] += 1;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.m.cols;
        for j in 0..w {
            self.m.data.swap(a * w + j, b * w + j);
        }
        self.pending.swap(a, b);
    }

    /// Forward elimination over the first `pivot_cols` columns. Pivot rows are
    /// fully reduced and normalized to a leading 1. Returns pivot columns;
    /// pivot `i` sits in row `i`.
    fn forward(&mut self, pivot_cols: usize) -> Vec<usize> {
        let q = self.m.modulus;
        let (rows, w) = (self.m.rows, self.m.cols);
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..pivot_cols {
            if next == rows {
                break;
            }
            let Some(p) = (next..rows).find(|&r| q.reduce(self.m.data[r * w + col]) != 0) else {
                continue;
            };
            self.swap_rows(next, p);
            self.reduce_row(next);
            let inv = q.inv(self.m.data[next * w + col]).expect("pivot is nonzero");
            for x in &mut self.m.row_mut(next)[col..] {
                *x = q.mul(*x, inv);
            }
            for r in next + 1..rows {
                let f = q.reduce(self.m.data[r * w + col]);
                if f != 0 {
                    self.axpy(r, next, q.value() - f, col + 1..w);
                    self.m.data[r * w + col] = 0;
                }
            }
            pivots.push(col);
            next += 1;
        }
        pivots
    }

    /// After `forward` with a full set of `n` pivots on the diagonal, clears the
    /// entries above each pivot so the left `n x n` block becomes the identity.
    fn back_substitute(&mut self, n: usize) {
        let q = self.m.modulus;
        let w = self.m.cols;
        for p in (0..n).rev() {
            self.reduce_row(p);
            for r in 0..p {
                let f = q.reduce(self.m.data[r * w + p]);
                if f != 0 {
                    self.axpy(r, p, q.value() - f, n..w);
                    self.m.data[r * w + p] = 0;
                }
            }
        }
    }

    fn into_matrix(mut self) -> Matrix {
        for r in 0..self.m.rows {
            self.reduce_row(r);
        }
        self.m
    }
}

/// Draws a matrix uniformly from GL(n, q).
///
/// Row `i` is drawn uniformly from the `q^n - q^i` vectors outside the span of
/// rows `0..i`: with the span kept as a reduced echelon basis, every vector is
/// uniquely `sum_p c_p b_p + r` where `r` vanishes on the pivot columns, and it
/// lies outside the span exactly when `r != 0`. So `c` is drawn uniformly and
/// `r` uniformly among nonzero vectors on the free columns.
pub fn sample_uniform_full_rank(n: usize, modulus: FieldModulus, rng: &mut SeededRng) -> Matrix {
    assert!(n >= 1, "GL(0, q) is not sampled");
    let q = modulus;
    let budget = q.lazy_budget();
    // Reduced echelon basis of the rows so far: (pivot column, row).
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::with_capacity(n);
    let mut is_pivot = vec![false; n];
    let mut out = Vec::with_capacity(n * n);

    for _ in 0..n {
        let coeffs: Vec<u64> = (0..basis.len()).map(|_| rng.field_value(q)).collect();
        let residual = loop {
            let r: Vec<u64> = (0..n)
                .map(|j| if is_pivot[j] { 0 } else { rng.field_value(q) })
                .collect();
            // Probability q^-(n-i); only the residual is redrawn.
            if r.iter().any(|&x| x != 0) {
                break r;
            }
        };

        let mut row = residual.clone();
        let mut pending = 0u64;
        for (c, (_, b)) in coeffs.iter().zip(&basis) {
            if *c == 0 {
                continue;
            }
            if budget == 0 {
                for (x, &y) in row.iter_mut().zip(b) {
                    *x = q.add(*x, q.mul(*c, y));
                }
                continue;
            }
            if pending >= budget {
                reduce_slice(&mut row, q);
                pending = 0;
            }
            for (x, &y) in row.iter_mut().zip(b) {
                *x += c * y;
            }
            pending += 1;
        }
        reduce_slice(&mut row, q);
        out.extend_from_slice(&row);

        // Extend the basis with the normalized residual, lowest column first.
        let pc = residual.iter().position(|&x| x != 0).expect("residual is nonzero");
        let inv = q.inv(residual[pc]).expect("nonzero");
        let fresh: Vec<u64> = residual.iter().map(|&x| q.mul(x, inv)).collect();
        for (_, b) in basis.iter_mut() {
            let f = b[pc];
            if f != 0 {
                let neg = q.neg(f);
                for (x, &y) in b.iter_mut().zip(&fresh) {
                    *x = q.add(*x, q.mul(neg, y));
                }
            }
        }
        is_pivot[pc] = true;
        basis.push((pc, fresh));
    }

    Matrix {
        rows: n,
        cols: n,
        modulus,
        data: out,
    }
}

/// Every element of GL(n, q), each exactly once, in lexicographic order of
/// their row-major entries. Brute force over all `q^(n^2)` matrices.
pub fn enumerate_full_rank(n: usize, modulus: FieldModulus) -> Result<Vec<Matrix>> {
    let q = modulus.value();
    let cells = (n * n) as u32;
    let total = q
        .checked_pow(cells)
        .filter(|&t| t <= ENUMERATION_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("GL({n}, {q}) enumeration exceeds 2^24 candidates")))?;
    let mut found = Vec::new();
    let mut digits = vec![0u64; n * n];
    for _ in 0..total {
        let m = Matrix {
            rows: n,
            cols: n,
            modulus,
            data: digits.clone(),
        };
        if m.rank() == n {
            found.push(m);
        }
        // Increment the base-q counter, last entry fastest.
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }
    Ok(found)
}
