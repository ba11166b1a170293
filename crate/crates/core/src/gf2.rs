//! Dense linear algebra over F2.
//!
//! Vectors are packed into 64-bit words. Every elimination routine pivots on
//! the lowest available index, so ranks, bases and solutions are reproducible
//! bit for bit. Indices are 0-based throughout the library; the text formats
//! and the CLI translate to 1-based labels.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("basis vector {index} is a combination of the earlier basis vectors")]
    DependentBasis { index: usize },
}

const WORD_BITS: usize = 64;

/// A fixed-length vector over F2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    /// Builds a vector with the given coordinates set to 1.
    ///
    /// # Panics
    /// Panics if an index is `>= len`.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    /// Parses a string of `0`/`1` characters, coordinate 0 first.
    ///
    /// # Panics
    /// Panics on any other character. Intended for tests and literals.
    pub fn from_bit_str(bits: &str) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => panic!("invalid bit character {c:?}"),
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
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Index of the highest set coordinate.
    pub fn last_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize))
    }

    /// Set coordinates in increasing order.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(k * WORD_BITS + bit)
            })
        })
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors of different length");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Parity of the inner product `self · other`.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors of different length");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// Keeps only the listed coordinates, in the listed order.
    pub fn select(&self, coords: &[usize]) -> BitVector {
        let mut out = BitVector::zeros(coords.len());
        for (j, &c) in coords.iter().enumerate() {
            if self.get(c) {
                out.set(j, true);
            }
        }
        out
    }

    /// Low 64 coordinates as a machine word (coordinate `i` is bit `i`).
    pub(crate) fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
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

/// Rows of equal length over F2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    n_cols: usize,
}

impl BitMatrix {
    pub fn new(n_cols: usize) -> Self {
        Self {
            rows: Vec::new(),
            n_cols,
        }
    }

    pub fn from_rows(n_cols: usize, rows: Vec<BitVector>) -> Result<Self, Gf2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Gf2Error::DimensionMismatch {
                expected: n_cols,
                found: bad.len(),
            });
        }
        Ok(Self { rows, n_cols })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
            n_cols: n,
        }
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<(), Gf2Error> {
        if row.len() != self.n_cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.n_cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_indices(
            self.rows.len(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.get(j))
                .map(|(i, _)| i),
        )
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix {
            rows: (0..self.n_cols).map(|j| self.column(j)).collect(),
            n_cols: self.rows.len(),
        }
    }

    /// `self · x` over F2.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector, Gf2Error> {
        if x.len() != self.n_cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.n_cols,
                found: x.len(),
            });
        }
        Ok(BitVector::from_indices(
            self.rows.len(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.dot(x))
                .map(|(i, _)| i),
        ))
    }
}

/// Row echelon form built column by column, lowest column first.
struct Echelon {
    /// `(pivot column, reduced row)` in increasing pivot order.
    pivots: Vec<(usize, BitVector)>,
}

impl Echelon {
    fn of(m: &BitMatrix) -> Self {
        let mut rows: Vec<BitVector> = m.rows.iter().filter(|r| !r.is_zero()).cloned().collect();
        let mut pivots = Vec::new();
        for col in 0..m.n_cols {
            let Some(pos) = rows.iter().position(|r| r.get(col)) else {
                continue;
            };
            let pivot = rows.swap_remove(pos);
            for r in rows.iter_mut().filter(|r| r.get(col)) {
                r.xor_assign(&pivot);
            }
            rows.retain(|r| !r.is_zero());
            pivots.push((col, pivot));
            if rows.is_empty() {
                break;
            }
        }
        Self { pivots }
    }
}

/// Row rank of `m` over F2.
pub fn rank(m: &BitMatrix) -> usize {
    Echelon::of(m).pivots.len()
}

/// The lexicographically first column basis of `m` (greedy, lowest index
/// first). Its size equals `rank(m)`.
pub fn independent_columns(m: &BitMatrix) -> Vec<usize> {
    Echelon::of(m).pivots.into_iter().map(|(c, _)| c).collect()
}

/// Indices of a maximal linearly independent subset of `m`'s rows, chosen
/// greedily in row order.
pub fn independent_rows(m: &BitMatrix) -> Vec<usize> {
    let mut basis = Basis::new(m.n_cols);
    m.rows
        .iter()
        .enumerate()
        .filter(|(_, r)| basis.insert(r))
        .map(|(i, _)| i)
        .collect()
}

/// Incremental span of vectors. Each reduced row remembers which inserted
/// vectors it combines, so membership queries can return a representation.
#[derive(Debug, Clone)]
pub(crate) struct Basis {
    dim: usize,
    /// `(pivot coordinate, reduced vector, combination of inserted vectors)`.
    rows: Vec<(usize, BitVector, Vec<usize>)>,
    inserted: usize,
}

impl Basis {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
            inserted: 0,
        }
    }

    /// Reduces `v` against the basis. Returns the residual and the
    /// combination of inserted vectors that was subtracted.
    fn reduce(&self, v: &BitVector) -> (BitVector, Vec<usize>) {
        let mut residual = v.clone();
        let mut combo: Vec<usize> = Vec::new();
        for (pivot, row, row_combo) in &self.rows {
            if residual.get(*pivot) {
                residual.xor_assign(row);
                symmetric_difference(&mut combo, row_combo);
            }
        }
        (residual, combo)
    }

    /// Inserts `v`; returns false (and leaves the basis unchanged) when `v`
    /// is already in the span.
    pub(crate) fn insert(&mut self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.dim);
        let (residual, mut combo) = self.reduce(v);
        let id = self.inserted;
        self.inserted += 1;
        let Some(pivot) = residual.first_one() else {
            return false;
        };
        symmetric_difference(&mut combo, &[id]);
        self.rows.push((pivot, residual, combo));
        true
    }

    /// Subset of inserted-vector ids summing to `v`, or `None` outside the span.
    /// Ids count every `insert` call, including rejected ones.
    pub(crate) fn represent(&self, v: &BitVector) -> Option<Vec<usize>> {
        let (residual, mut combo) = self.reduce(v);
        if !residual.is_zero() {
            return None;
        }
        combo.sort_unstable();
        Some(combo)
    }
}

fn symmetric_difference(acc: &mut Vec<usize>, other: &[usize]) {
    for &x in other {
        if let Some(pos) = acc.iter().position(|&y| y == x) {
            acc.swap_remove(pos);
        } else {
            acc.push(x);
        }
    }
}

/// Finds `S ⊆ {0..basis.len()}` with `⊕_{i∈S} basis[i] = target`.
///
/// Returns `Ok(None)` when `target` lies outside the span, and the empty set
/// for the zero vector. The basis must be linearly independent.
pub fn express_in_basis(
    target: &BitVector,
    basis: &[BitVector],
) -> Result<Option<Vec<usize>>, Gf2Error> {
    let dim = target.len();
    let mut span = Basis::new(dim);
    for (i, b) in basis.iter().enumerate() {
        if b.len() != dim {
            return Err(Gf2Error::DimensionMismatch {
                expected: dim,
                found: b.len(),
            });
        }
        if !span.insert(b) {
            return Err(Gf2Error::DependentBasis { index: i });
        }
    }
    Ok(span.represent(target))
}

/// Solves `m · y = rhs` for square `m`.
///
/// Returns `Ok(None)` when the system is inconsistent. Singular consistent
/// systems get their free variables set to 0.
pub fn solve_square(m: &BitMatrix, rhs: &BitVector) -> Result<Option<BitVector>, Gf2Error> {
    let n = m.n_cols;
    if m.n_rows() != n {
        return Err(Gf2Error::NotSquare {
            rows: m.n_rows(),
            cols: n,
        });
    }
    if rhs.len() != n {
        return Err(Gf2Error::DimensionMismatch {
            expected: n,
            found: rhs.len(),
        });
    }
    // Augment each row with its right-hand side in coordinate n.
    let mut rows: Vec<BitVector> = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = BitVector::zeros(n + 1);
            for j in r.ones_iter() {
                a.set(j, true);
            }
            a.set(n, rhs.get(i));
            a
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut next = 0;
    for col in 0..n {
        let Some(pos) = (next..rows.len()).find(|&i| rows[i].get(col)) else {
            continue;
        };
        rows.swap(next, pos);
        let pivot = rows[next].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != next && r.get(col) {
                r.xor_assign(&pivot);
            }
        }
        pivot_cols.push(col);
        next += 1;
    }
    if rows[next..].iter().any(|r| r.get(n)) {
        return Ok(None);
    }
    let mut y = BitVector::zeros(n);
    for (i, &col) in pivot_cols.iter().enumerate() {
        y.set(col, rows[i].get(n));
    }
    Ok(Some(y))
}
