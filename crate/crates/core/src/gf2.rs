//! Bit-packed vectors and matrices over GF(2).
//!
//! Bit `i` of a [`BitVec`] lives in bit `i % 64` of word `i / 64`. The textual
//! form is a fixed-width string of `'0'`/`'1'` with index 0 first; it is the
//! format used by dataset files and the external decoder protocol.
//!
//! Elimination routines always work on copies, so shared matrices are never
//! mutated.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};
use std::str::FromStr;

use crate::error::{check_len, Error, Result};

const WORD: usize = 64;

/// Largest rank for which [`BitMat::enumerate_span`] agrees to run.
pub const MAX_SPAN_RANK: usize = 24;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    /// Vector with a single set bit.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    /// Low `len` bits of `word`, bit 0 first. `len` must be at most 64.
    pub fn from_u64(len: usize, word: u64) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 bits");
        let mut v = BitVec {
            len,
            words: if len == 0 { vec![] } else { vec![word] },
        };
        v.clear_tail();
        v
    }

    /// Packs the vector into one word. Panics if `len > 64`.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "to_u64 supports at most 64 bits");
        self.words.first().copied().unwrap_or(0)
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

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the bitwise AND, i.e. the GF(2) inner product.
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Number of positions where both vectors have a set bit.
    pub fn overlap(&self, other: &BitVec) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Bits `start..end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        assert!(start <= end && end <= self.len, "slice {start}..{end} out of range");
        let mut out = BitVec::zeros(end - start);
        for i in self.iter_ones().filter(|&i| i >= start && i < end) {
            out.set(i - start, true);
        }
        out
    }

    /// Cyclic rotation towards higher indices: bit `i` moves to `(i + k) % len`.
    pub fn rotate_right(&self, k: usize) -> BitVec {
        if self.len == 0 {
            return self.clone();
        }
        BitVec::from_indices(self.len, self.iter_ones().map(|i| (i + k) % self.len))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl BitXorAssign<&BitVec> for BitVec {
    fn bitxor_assign(&mut self, rhs: &BitVec) {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor for &BitVec {
    type Output = BitVec;

    fn bitxor(self, rhs: &BitVec) -> BitVec {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => v.set(i, true),
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected character {:?} at position {i}",
                        other as char
                    )))
                }
            }
        }
        Ok(v)
    }
}

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMat {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMat {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMat {
            cols: n,
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from rows that all have length `cols`.
    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Result<Self> {
        for r in &rows {
            check_len(cols, r.len())?;
        }
        Ok(BitMat { cols, rows })
    }

    /// Parses rows written as `'0'`/`'1'` strings.
    pub fn from_strs<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.as_ref().parse::<BitVec>())
            .collect::<Result<Vec<_>>>()?;
        let cols = parsed.first().map_or(0, BitVec::len);
        Self::from_rows(parsed, cols)
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_indices(
            self.rows.len(),
            self.rows.iter().enumerate().filter(|(_, r)| r.get(c)).map(|(i, _)| i),
        )
    }

    /// `M · v`: bit `i` of the result is the parity of `row_i AND v`.
    pub fn mat_vec_mul(&self, v: &BitVec) -> Result<BitVec> {
        check_len(self.cols, v.len())?;
        Ok(self.mul_unchecked(v))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// `cᵀ · M`: the XOR of the rows selected by `coeffs`.
    pub fn combine(&self, coeffs: &BitVec) -> Result<BitVec> {
        check_len(self.rows.len(), coeffs.len())?;
        let mut out = BitVec::zeros(self.cols);
        for i in coeffs.iter_ones() {
            out ^= &self.rows[i];
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BitMat {
        let rows = (0..self.cols).map(|c| self.column(c)).collect();
        BitMat {
            cols: self.rows.len(),
            rows,
        }
    }

    /// `M · Nᵀ`, whose entry `(i, j)` is `row_i(M) · row_j(N)`.
    pub fn mul_transpose(&self, other: &BitMat) -> Result<BitMat> {
        check_len(self.cols, other.cols)?;
        let rows = self
            .rows
            .iter()
            .map(|a| {
                BitVec::from_indices(
                    other.rows.len(),
                    (0..other.rows.len()).filter(|&j| a.dot(&other.rows[j])),
                )
            })
            .collect();
        Ok(BitMat {
            cols: other.rows.len(),
            rows,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMat) -> Result<BitMat> {
        check_len(self.cols, other.cols)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMat { cols: self.cols, rows })
    }

    pub fn echelon(&self) -> RowEchelon {
        RowEchelon::new(self)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Coefficients `c` with `cᵀ · M = v`, or `None` when `v` is outside the row space.
    pub fn solve_in_rowspace(&self, v: &BitVec) -> Result<Option<BitVec>> {
        check_len(self.cols, v.len())?;
        Ok(self.echelon().solve(v))
    }

    /// Every vector of the row space, each exactly once, in Gray-code order
    /// starting from zero.
    pub fn enumerate_span(&self) -> Result<SpanIter> {
        let ech = self.echelon();
        let rank = ech.rank();
        if rank > MAX_SPAN_RANK {
            return Err(Error::RankTooLarge {
                rank,
                limit: MAX_SPAN_RANK,
            });
        }
        Ok(SpanIter {
            basis: ech.basis,
            current: BitVec::zeros(self.cols),
            step: 0,
            total: 1u64 << rank,
        })
    }

    /// Basis of `{v : M·v = 0}`, one vector per non-pivot column.
    pub fn kernel_basis(&self) -> BitMat {
        let ech = self.echelon();
        let pivot_of: Vec<Option<usize>> = {
            let mut p = vec![None; self.cols];
            for (k, &c) in ech.pivots.iter().enumerate() {
                p[c] = Some(k);
            }
            p
        };
        let rows = (0..self.cols)
            .filter(|&c| pivot_of[c].is_none())
            .map(|free| {
                let mut v = BitVec::unit(self.cols, free);
                for (k, &pc) in ech.pivots.iter().enumerate() {
                    if ech.basis[k].get(free) {
                        v.set(pc, true);
                    }
                }
                v
            })
            .collect();
        BitMat { cols: self.cols, rows }
    }
}

impl fmt::Display for BitMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMat {}x{}", self.rows.len(), self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

/// Reduced row echelon form of a matrix together with the row combinations
/// that produced each basis row.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    cols: usize,
    source_rows: usize,
    pivots: Vec<usize>,
    basis: Vec<BitVec>,
    combos: Vec<BitVec>,
}

impl RowEchelon {
    pub fn new(m: &BitMat) -> Self {
        let n = m.rows.len();
        let mut work: Vec<(BitVec, BitVec)> = m
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), BitVec::unit(n, i)))
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(p) = (rank..n).find(|&i| work[i].0.get(col)) else {
                continue;
            };
            work.swap(rank, p);
            let (pivot_row, pivot_combo) = work[rank].clone();
            for (i, (row, combo)) in work.iter_mut().enumerate() {
                if i != rank && row.get(col) {
                    *row ^= &pivot_row;
                    *combo ^= &pivot_combo;
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == n {
                break;
            }
        }
        work.truncate(rank);
        let (basis, combos) = work.into_iter().unzip();
        RowEchelon {
            cols: m.cols,
            source_rows: n,
            pivots,
            basis,
            combos,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Rows of the reduced basis.
    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    /// Reduces `v` against the basis; returns what is left over.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            if r.get(pc) {
                r ^= row;
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        self.reduce(v).is_zero()
    }

    /// Combination of the original rows that sums to `v`, if one exists.
    pub fn solve(&self, v: &BitVec) -> Option<BitVec> {
        let mut r = v.clone();
        let mut c = BitVec::zeros(self.source_rows);
        for ((row, combo), &pc) in self.basis.iter().zip(&self.combos).zip(&self.pivots) {
            if r.get(pc) {
                r ^= row;
                c ^= combo;
            }
        }
        r.is_zero().then_some(c)
    }
}

/// Iterator over a row space produced by [`BitMat::enumerate_span`].
pub struct SpanIter {
    basis: Vec<BitVec>,
    current: BitVec,
    step: u64,
    total: u64,
}

impl Iterator for SpanIter {
    type Item = BitVec;

    fn next(&mut self) -> Option<BitVec> {
        if self.step == self.total {
            return None;
        }
        let out = self.current.clone();
        self.step += 1;
        if self.step < self.total {
            let flip = self.step.trailing_zeros() as usize;
            self.current ^= &self.basis[flip];
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.step) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for SpanIter {}

/// All `k`-subsets of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        match (0..k).rev().find(|&i| self.idx[i] < self.n - k + i) {
            Some(i) => {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}

/// Every length-`n` vector of weight at most `max_weight`, by increasing weight.
pub fn low_weight_vectors(n: usize, max_weight: usize) -> impl Iterator<Item = BitVec> {
    (0..=max_weight.min(n)).flat_map(move |w| Combinations::new(n, w).map(move |c| BitVec::from_indices(n, c)))
}
