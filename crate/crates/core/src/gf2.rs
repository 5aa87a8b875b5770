//! Dense bit-packed linear algebra over GF(2).
//!
//! Vectors and matrices are packed into 64-bit words, least significant bit
//! first. Row and column indices are 0-based. All targets in this crate have a
//! few hundred columns at most, so nothing here tries to be sparse.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_len, Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// The unit vector with a single set bit at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector of length `len` with the given positions set.
    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        (self.words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.words[index / WORD_BITS] ^= 1u64 << (index % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// In-place XOR. Panics on length mismatch; use [`BitVec::xor`] for a
    /// checked variant.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> Result<BitVec> {
        check_len("xor", self.len, other.len)?;
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        self.words.iter().zip(&other.words).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1 == 1
    }

    /// Indices of the set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Lexicographic comparison reading bit 0 first, with `0 < 1`.
    pub fn lex_cmp(&self, other: &BitVec) -> Ordering {
        let n = self.len.min(other.len);
        for i in 0..n {
            match (self.get(i), other.get(i)) {
                (false, true) => return Ordering::Less,
                (true, false) => return Ordering::Greater,
                _ => {}
            }
        }
        self.len.cmp(&other.len)
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    /// Parses a string of `0`/`1` characters, index 0 leftmost.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            }
        }
        Ok(v)
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self { cols: n, rows: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    /// Builds a matrix from its rows. All rows must share the length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        for r in &rows {
            check_len("matrix row", cols, r.len())?;
        }
        Ok(Self { cols, rows })
    }

    /// Convenience constructor from nested 0/1 literals.
    pub fn from_dense(rows: &[&[u8]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                check_len("matrix row", cols, r.len())?;
                Ok(BitVec::from_indices(cols, r.iter().enumerate().filter(|(_, &b)| b != 0).map(|(i, _)| i)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { cols, rows })
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].get(col)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.rows[row].set(col, value)
    }

    pub fn row(&self, index: usize) -> &BitVec {
        &self.rows[index]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<()> {
        check_len("matrix row", self.cols, row.len())?;
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.n_rows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Matrix-vector product `H·v`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        check_len("matrix-vector product", self.cols, v.len())?;
        let mut out = BitVec::zeros(self.n_rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        EchelonForm::new(self).rank()
    }

    /// Some `x` with `H·x = s`, or `None` if the system is inconsistent.
    ///
    /// The returned solution is the one obtained by back-substitution with all
    /// free variables fixed to zero.
    pub fn solve(&self, s: &BitVec) -> Result<Option<BitVec>> {
        EchelonForm::new(self).solve(s)
    }

    /// A basis of the kernel `{x : H·x = 0}`.
    pub fn nullspace_basis(&self) -> Vec<BitVec> {
        EchelonForm::new(self).nullspace_basis()
    }

    /// Whether `r` is a GF(2) combination of the rows of `H`.
    pub fn in_rowspace(&self, r: &BitVec) -> Result<bool> {
        EchelonForm::new(self).in_rowspace(r)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.n_rows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// Text format: one row per line of `0`/`1` characters.
impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(BitVec::from_str)
            .collect::<Result<Vec<_>>>()?;
        let cols = rows.first().map_or(0, BitVec::len);
        BitMatrix::from_rows(cols, rows)
    }
}

/// Reduced row echelon form of a matrix together with the row transform that
/// produced it, so that repeated solves and rowspace tests against the same
/// matrix skip the elimination.
#[derive(Clone, Debug)]
pub struct EchelonForm {
    cols: usize,
    n_rows: usize,
    /// Nonzero reduced rows; row `i` has its leading one at `pivots[i]`.
    reduced: Vec<BitVec>,
    pivots: Vec<usize>,
    /// `transform[i]` combines original rows into reduced row `i` (for
    /// `i < rank`); the remaining entries span the left kernel.
    transform: Vec<BitVec>,
}

impl EchelonForm {
    pub fn new(matrix: &BitMatrix) -> Self {
        let n_rows = matrix.n_rows();
        let mut rows: Vec<BitVec> = matrix.rows.clone();
        let mut transform: Vec<BitVec> = (0..n_rows).map(|i| BitVec::unit(n_rows, i)).collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..matrix.cols {
            let Some(p) = (rank..n_rows).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            transform.swap(rank, p);
            for r in 0..n_rows {
                if r != rank && rows[r].get(col) {
                    let (pivot_row, pivot_t) = (rows[rank].clone(), transform[rank].clone());
                    rows[r].xor_assign(&pivot_row);
                    transform[r].xor_assign(&pivot_t);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        Self { cols: matrix.cols, n_rows, reduced: rows, pivots, transform }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn solve(&self, s: &BitVec) -> Result<Option<BitVec>> {
        check_len("solve right-hand side", self.n_rows, s.len())?;
        // Rows past the rank must map s to zero for consistency.
        if self.transform[self.rank()..].iter().any(|t| t.dot(s)) {
            return Ok(None);
        }
        let mut x = BitVec::zeros(self.cols);
        for (i, &p) in self.pivots.iter().enumerate() {
            if self.transform[i].dot(s) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }

    pub fn nullspace_basis(&self) -> Vec<BitVec> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::unit(self.cols, free);
                for (row, &p) in self.reduced.iter().zip(&self.pivots) {
                    if row.get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Reduces `r` against the echelon rows; the remainder is zero iff `r` is
    /// in the rowspace.
    pub fn in_rowspace(&self, r: &BitVec) -> Result<bool> {
        Ok(self.remainder(r)?.is_zero())
    }

    /// Remainder of `r` after eliminating the pivot columns. The map is
    /// linear and vanishes exactly on the rowspace.
    pub fn remainder(&self, r: &BitVec) -> Result<BitVec> {
        check_len("rowspace membership", self.cols, r.len())?;
        let mut rem = r.clone();
        for (row, &p) in self.reduced.iter().zip(&self.pivots) {
            if rem.get(p) {
                rem.xor_assign(row);
            }
        }
        Ok(rem)
    }
}
