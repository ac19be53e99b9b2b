//! Dense linear algebra over GF(2) with rows packed into 64-bit words.
//!
//! Matrices are row-major; every row occupies `ceil(cols / 64)` words and
//! the bits past `cols` in the last word are kept at zero, so derived
//! equality is matrix equality. Elimination always works on a private copy
//! and picks, for each column, the first remaining row that has a one there.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A bit vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Vector {
    len: usize,
    words: Vec<u64>,
}

impl GF2Vector {
    pub fn zeros(len: usize) -> Self {
        GF2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &GF2Vector) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        first_one(&self.words)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        ones(&self.words)
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The first `len` entries.
    pub fn truncated(&self, len: usize) -> GF2Vector {
        assert!(len <= self.len);
        let mut words = self.words[..words_for(len)].to_vec();
        if !len.is_multiple_of(WORD) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % WORD)) - 1;
            }
        }
        GF2Vector { len, words }
    }
}

impl fmt::Debug for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, "]")
    }
}

fn first_one(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
}

fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            }
        })
    })
}

/// A `rows x cols` matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        GF2Matrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Sums the listed entries: a coordinate that appears twice cancels.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c) in entries {
            m.toggle(r, c);
        }
        m
    }

    /// From 0/1 rows; panics on ragged input.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &b) in row.iter().enumerate() {
                if b & 1 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[GF2Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, v) in columns.iter().enumerate() {
            assert_eq!(v.len(), rows, "column length mismatch");
            for r in v.ones() {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn toggle(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) outside {}x{}", self.rows, self.cols);
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> GF2Vector {
        GF2Vector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> GF2Vector {
        let mut v = GF2Vector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    /// Column indices of the ones in row `r`.
    pub fn row_ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.row_words(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> GF2Matrix {
        let mut t = GF2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product `self * rhs`; panics on a shape mismatch.
    pub fn mul(&self, rhs: &GF2Matrix) -> GF2Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = GF2Matrix::zeros(self.rows, rhs.cols);
        let stride = out.stride;
        for r in 0..self.rows {
            let dst = &mut out.data[r * stride..(r + 1) * stride];
            for t in ones(&self.data[r * self.stride..(r + 1) * self.stride]) {
                for (d, s) in dst.iter_mut().zip(rhs.row_words(t)) {
                    *d ^= s;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &GF2Vector) -> GF2Vector {
        assert_eq!(self.cols, v.len, "cannot apply {}x{} to length {}", self.rows, self.cols, v.len);
        let mut out = GF2Vector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(&v.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                & 1;
            if parity == 1 {
                out.set(r, true);
            }
        }
        out
    }

    pub fn add(&self, rhs: &GF2Matrix) -> GF2Matrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in matrix sum");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a ^= b;
        }
        out
    }

    /// Kronecker product; the left factor indexes the most significant digit.
    pub fn kron(&self, rhs: &GF2Matrix) -> GF2Matrix {
        let mut out = GF2Matrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                for k in 0..rhs.rows {
                    for l in rhs.row_ones(k) {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, true);
                    }
                }
            }
        }
        out
    }

    /// In-place elimination. With `reduced`, pivot columns are cleared above
    /// the pivot as well (RREF). Returns the pivot column of each pivot row.
    fn eliminate(&mut self, reduced: bool) -> Vec<usize> {
        let stride = self.stride;
        let mut pivots = Vec::new();
        let mut scratch = vec![0u64; stride];
        for c in 0..self.cols {
            let rank = pivots.len();
            if rank == self.rows {
                break;
            }
            let (w, bit) = (c / WORD, 1u64 << (c % WORD));
            let Some(p) = (rank..self.rows).find(|&r| self.data[r * stride + w] & bit != 0) else {
                continue;
            };
            if p != rank {
                for k in 0..stride {
                    self.data.swap(p * stride + k, rank * stride + k);
                }
            }
            // Entries of the pivot row left of `c` are already zero.
            scratch[w..].copy_from_slice(&self.data[rank * stride + w..(rank + 1) * stride]);
            let start = if reduced { 0 } else { rank + 1 };
            for r in start..self.rows {
                if r != rank && self.data[r * stride + w] & bit != 0 {
                    for (d, s) in self.data[r * stride + w..(r + 1) * stride]
                        .iter_mut()
                        .zip(&scratch[w..])
                    {
                        *d ^= s;
                    }
                }
            }
            pivots.push(c);
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        // Eliminating along the shorter side keeps the pivot search short.
        if self.rows > self.cols {
            self.transpose().eliminate(false).len()
        } else {
            self.clone().eliminate(false).len()
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (GF2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        (m, pivots)
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column
    /// in increasing column order.
    pub fn nullspace_basis(&self) -> Vec<GF2Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = GF2Vector::unit(self.cols, f);
                for (row, &p) in pivots.iter().enumerate() {
                    if r.get(row, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// A basis of the column space, taken from the RREF of the transpose.
    pub fn column_space_basis(&self) -> Vec<GF2Vector> {
        let (r, pivots) = self.transpose().rref();
        (0..pivots.len()).map(|i| r.row(i)).collect()
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GF2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(32) {
            for c in 0..self.cols.min(64) {
                write!(f, "{}", self.get(r, c) as u8)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn rank(m: &GF2Matrix) -> usize {
    m.rank()
}

pub fn nullspace_basis(m: &GF2Matrix) -> Vec<GF2Vector> {
    m.nullspace_basis()
}

/// Coordinates for the quotient `span(cycles) / span(boundaries)`.
///
/// The complement of the boundary span is spanned by those cycles (in the
/// given order) that are independent of the boundaries and of the earlier
/// cycles; each such cycle is a class representative. Pivots are the lowest
/// set bit of each reduced vector.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    len: usize,
    /// Reduced vectors with their pivot and quotient coordinate tag.
    rows: Vec<(usize, GF2Vector, GF2Vector)>,
    representatives: Vec<GF2Vector>,
}

impl QuotientBasis {
    pub fn new(len: usize, cycles: &[GF2Vector], boundaries: &[GF2Vector]) -> Result<Self> {
        for v in cycles.iter().chain(boundaries) {
            if v.len() != len {
                return Err(Error::Precondition(format!(
                    "basis vector of length {} in an ambient space of dimension {len}",
                    v.len()
                )));
            }
        }
        // Tags start at the upper bound `cycles.len()` and are cut down to the
        // quotient dimension once the representatives are known.
        let bound = cycles.len();
        let mut rows: Vec<(usize, GF2Vector, GF2Vector)> = Vec::new();
        let mut representatives = Vec::new();
        for (v, is_cycle) in boundaries
            .iter()
            .map(|v| (v, false))
            .chain(cycles.iter().map(|v| (v, true)))
        {
            let mut w = v.clone();
            let mut tag = GF2Vector::zeros(bound);
            for (p, row, row_tag) in &rows {
                if w.get(*p) {
                    w.xor_assign(row);
                    tag.xor_assign(row_tag);
                }
            }
            if let Some(p) = w.first_one() {
                if is_cycle {
                    tag.toggle(representatives.len());
                    representatives.push(v.clone());
                }
                rows.push((p, w, tag));
            }
        }
        let dim = representatives.len();
        for (_, _, tag) in rows.iter_mut() {
            *tag = tag.truncated(dim);
        }
        Ok(QuotientBasis {
            len,
            rows,
            representatives,
        })
    }

    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Cycles chosen as class representatives, in coordinate order.
    pub fn representatives(&self) -> &[GF2Vector] {
        &self.representatives
    }

    pub fn coordinates(&self, v: &GF2Vector) -> Result<GF2Vector> {
        if v.len() != self.len {
            return Err(Error::Precondition(format!(
                "vector of length {} in an ambient space of dimension {}",
                v.len(),
                self.len
            )));
        }
        let mut w = v.clone();
        let mut coords = GF2Vector::zeros(self.dim());
        for (p, row, tag) in &self.rows {
            if w.get(*p) {
                w.xor_assign(row);
                coords.xor_assign(tag);
            }
        }
        if !w.is_zero() {
            return Err(Error::Membership(format!(
                "residual has {} nonzero entries after reduction",
                w.count_ones()
            )));
        }
        Ok(coords)
    }
}

/// Coordinates of the class of `v` in `span(cycles) / span(boundaries)`.
pub fn coset_coordinates(cycles: &[GF2Vector], boundaries: &[GF2Vector], v: &GF2Vector) -> Result<GF2Vector> {
    QuotientBasis::new(v.len(), cycles, boundaries)?.coordinates(v)
}
