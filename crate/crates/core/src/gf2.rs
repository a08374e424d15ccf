//! Bit-packed linear algebra over GF(2).
//!
//! Vectors are row vectors; a matrix acts on the right (`c·M`). Rows are
//! stored contiguously as `u64` words, least significant bit first.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector is not in the row space")]
    NotInRowSpace,
}

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVector::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        BitVector::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
    }

    fn from_words(len: usize, words: &[u64]) -> Self {
        BitVector {
            len,
            words: words.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Parity of the overlap `Σ_i a_i b_i mod 2`.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersects(&self, other: &BitVector) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Stacks row vectors, all of length `cols`.
    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = BitMatrix::zeros(0, cols);
        for r in rows {
            m.push_row(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        self.data[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        let mask = 1u64 << (c % WORD);
        let w = &mut self.data[r * self.stride + c / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector::from_words(self.cols, self.row_words(r))
    }

    pub fn row_vectors(&self) -> Vec<BitVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn push_row(&mut self, row: &BitVector) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(&row.words);
        self.rows += 1;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    /// `row[dst] ^= row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            for (d, a) in hi[..s].iter_mut().zip(&lo[src * s..src * s + s]) {
                *d ^= a;
            }
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            for (d, a) in lo[dst * s..dst * s + s].iter_mut().zip(&hi[..s]) {
                *d ^= a;
            }
        }
    }

    pub fn is_zero_row(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Row vector times matrix, `v·M`.
    pub fn left_mul(&self, v: &BitVector) -> Result<BitVector, Gf2Error> {
        if v.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows,
                got: v.len(),
            });
        }
        let mut out = BitVector::zeros(self.cols);
        for r in v.ones() {
            for (o, w) in out.words.iter_mut().zip(self.row_words(r)) {
                *o ^= w;
            }
        }
        Ok(out)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let prod = other.left_mul(&self.row(r))?;
            out.data[r * out.stride..(r + 1) * out.stride].copy_from_slice(&prod.words);
        }
        Ok(out)
    }

    /// Columns `cols` in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, k, true);
                }
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(0, self.cols);
        for &r in rows {
            out.push_row(&self.row(r));
        }
        out
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let mut out = self.clone();
        out.data.extend_from_slice(&other.data);
        out.rows += other.rows;
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "{}", self.row(r))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form `R = T·M`.
#[derive(Debug, Clone)]
pub struct Rref {
    /// Pivot rows first (in pivot discovery order), then zero rows.
    pub matrix: BitMatrix,
    /// Pivot column of row `i`, for `i < rank`.
    pub pivots: Vec<usize>,
    /// Invertible row transform with `transform · M = matrix`.
    pub transform: BitMatrix,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn eliminate(m: &BitMatrix, order: &[usize], track: bool) -> (BitMatrix, Vec<usize>, BitMatrix) {
    let mut a = m.clone();
    let mut t = if track {
        BitMatrix::identity(m.rows())
    } else {
        BitMatrix::zeros(0, 0)
    };
    let mut pivots = Vec::new();
    for &col in order {
        let r = pivots.len();
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| a.get(i, col)) else {
            continue;
        };
        a.swap_rows(p, r);
        if track {
            t.swap_rows(p, r);
        }
        for i in 0..a.rows() {
            if i != r && a.get(i, col) {
                a.add_row(r, i);
                if track {
                    t.add_row(r, i);
                }
            }
        }
        pivots.push(col);
    }
    (a, pivots, t)
}

fn column_order(cols: usize, preferred: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; cols];
    let mut order = Vec::with_capacity(cols);
    for &c in preferred {
        if c < cols && !seen[c] {
            seen[c] = true;
            order.push(c);
        }
    }
    order.extend((0..cols).filter(|&c| !seen[c]));
    order
}

/// RREF with lowest-index-first pivoting.
pub fn rref(m: &BitMatrix) -> Rref {
    rref_with_preference(m, &[])
}

/// RREF that tries the `preferred` columns (in order) as pivots before the
/// remaining columns in ascending order.
pub fn rref_with_preference(m: &BitMatrix, preferred: &[usize]) -> Rref {
    let order = column_order(m.cols(), preferred);
    let (matrix, pivots, transform) = eliminate(m, &order, true);
    Rref {
        matrix,
        pivots,
        transform,
    }
}

pub fn rank(m: &BitMatrix) -> usize {
    let order: Vec<usize> = (0..m.cols()).collect();
    eliminate(m, &order, false).1.len()
}

/// Finds `c` with `c·M = v`.
pub fn solve_membership(m: &BitMatrix, v: &BitVector) -> Result<BitVector, Gf2Error> {
    let r = rref(m);
    solve_with(&r, m.cols(), v)
}

/// Solves `c·M = v` against a precomputed RREF of `M`.
pub fn solve_with(r: &Rref, cols: usize, v: &BitVector) -> Result<BitVector, Gf2Error> {
    if v.len() != cols {
        return Err(Gf2Error::DimensionMismatch {
            expected: cols,
            got: v.len(),
        });
    }
    let mut residual = v.clone();
    let mut coeffs = BitVector::zeros(r.matrix.rows());
    for (i, &p) in r.pivots.iter().enumerate() {
        if residual.get(p) {
            residual.xor_assign(&r.matrix.row(i));
            coeffs.set(i, true);
        }
    }
    if !residual.is_zero() {
        return Err(Gf2Error::NotInRowSpace);
    }
    r.transform.left_mul(&coeffs)
}

/// Basis of `{x : x·M = 0}`; `rows(M) - rank(M)` rows of length `rows(M)`.
pub fn left_kernel(m: &BitMatrix) -> BitMatrix {
    let r = rref(m);
    let mut out = BitMatrix::zeros(0, m.rows());
    for i in r.rank()..m.rows() {
        out.push_row(&r.transform.row(i));
    }
    out
}

/// Basis of `{x : M·xᵀ = 0}`; `cols(M) - rank(M)` rows of length `cols(M)`.
pub fn right_kernel(m: &BitMatrix) -> BitMatrix {
    let r = rref(m);
    let mut is_pivot = vec![false; m.cols()];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let mut out = BitMatrix::zeros(0, m.cols());
    for free in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut x = BitVector::zeros(m.cols());
        x.set(free, true);
        for (i, &p) in r.pivots.iter().enumerate() {
            if r.matrix.get(i, free) {
                x.set(p, true);
            }
        }
        out.push_row(&x);
    }
    out
}

/// Indices of a maximal independent subset of rows, chosen greedily in row
/// order (each kept row increases the rank of the rows kept before it).
pub fn independent_rows(m: &BitMatrix) -> Vec<usize> {
    let mut basis: Vec<(usize, BitVector)> = Vec::new();
    let mut keep = Vec::new();
    for r in 0..m.rows() {
        let mut v = m.row(r);
        for (p, b) in &basis {
            if v.get(*p) {
                v.xor_assign(b);
            }
        }
        let lead = v.ones().next();
        if let Some(p) = lead {
            // keep the basis fully reduced on its pivot columns
            for (_, b) in basis.iter_mut() {
                if b.get(p) {
                    b.xor_assign(&v);
                }
            }
            basis.push((p, v));
            keep.push(r);
        }
    }
    keep
}
