//! Dense GF(2) vectors and matrices.
//!
//! Everything in the toolkit (Pauli operators, Majorana monomials, check
//! matrices, syndromes) bottoms out in [`Bits`], a fixed-length bit vector
//! packed into `u64` words.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// Fixed-length bit vector over GF(2).
///
/// Bits past `len` in the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut bits = Self::zeros(len);
        for i in indices {
            bits.flip(i);
        }
        bits
    }

    pub fn from_bools(bools: &[bool]) -> Self {
        Self::from_indices(
            bools.len(),
            bools.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
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
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn or(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the inner product `<self, other>`.
    #[inline]
    pub fn dot(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Number of positions set in both vectors.
    #[inline]
    pub fn overlap(&self, other: &Bits) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let tz = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    /// Concatenate two vectors: `self` occupies the low indices.
    pub fn concat(&self, other: &Bits) -> Bits {
        let mut out = Bits::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Copy of the bit range `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> Bits {
        let mut out = Bits::zeros(len);
        for i in self.iter_ones().filter(|&i| i >= start && i < start + len) {
            out.set(i - start, true);
        }
        out
    }

    /// Lexicographic comparison of the bit patterns read from index 0
    /// upward; a 0 at the first differing position sorts first.
    pub fn lex_cmp(&self, other: &Bits) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let low = diff.trailing_zeros();
                return if (a >> low) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row-major binary matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryMatrix {
    cols: usize,
    rows: Vec<Bits>,
}

impl BinaryMatrix {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Bits>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        Self { cols, rows }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows(n, (0..n).map(|i| Bits::from_indices(n, [i])).collect())
    }

    pub fn push_row(&mut self, row: Bits) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Bits] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        RowReducer::new(self.cols, self.rows.iter().cloned()).rank()
    }

    /// GF(2) rank plus, when `target` is given, a coefficient vector `c`
    /// (one bit per row) with `sum_i c_i * row_i = target`. `None` means
    /// the target is outside the row space.
    pub fn rank_and_solve(&self, target: Option<&Bits>) -> (usize, Option<Bits>) {
        let reducer = RowReducer::new(self.cols, self.rows.iter().cloned());
        let solution = target.and_then(|t| reducer.solve(t));
        (reducer.rank(), solution)
    }

    /// Basis of `{v : M v = 0}`.
    pub fn nullspace(&self) -> Vec<Bits> {
        // Reduce to RREF, then read off one kernel vector per free column.
        let mut rows: Vec<Bits> = self.rows.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        let is_pivot = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = Bits::zeros(self.cols);
                v.set(free, true);
                for (i, &p) in pivots.iter().enumerate() {
                    if rows[i].get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }
}

/// Incremental echelon form that remembers how each reduced row was built
/// from the input rows, and optionally carries a payload vector alongside.
///
/// Build once, then answer many membership/decomposition queries in
/// `O(rank * words)` each.
#[derive(Clone, Debug)]
pub struct RowReducer {
    cols: usize,
    n_inputs: usize,
    /// Reduced rows, each with a distinct pivot column.
    rows: Vec<Bits>,
    pivots: Vec<usize>,
    /// For each reduced row, the combination of inputs that produced it.
    combos: Vec<Bits>,
    /// Payload of each reduced row (XOR of the input payloads in `combos`).
    payloads: Vec<Bits>,
    payload_len: usize,
}

impl RowReducer {
    pub fn new<I: IntoIterator<Item = Bits>>(cols: usize, rows: I) -> Self {
        let rows: Vec<Bits> = rows.into_iter().collect();
        let n = rows.len();
        Self::with_payloads(cols, rows.into_iter().map(|r| (r, Bits::zeros(0))), n)
    }

    /// `rows` yields `(row, payload)`; payloads must share one length.
    pub fn with_payloads<I>(cols: usize, rows: I, n_hint: usize) -> Self
    where
        I: IntoIterator<Item = (Bits, Bits)>,
    {
        let mut reducer = Self {
            cols,
            n_inputs: 0,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            payloads: Vec::new(),
            payload_len: 0,
        };
        let inputs: Vec<(Bits, Bits)> = rows.into_iter().collect();
        reducer.n_inputs = inputs.len().max(n_hint);
        reducer.payload_len = inputs.first().map(|(_, p)| p.len()).unwrap_or(0);
        for (index, (row, payload)) in inputs.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "row length mismatch");
            reducer.insert(index, row, payload);
        }
        reducer
    }

    fn insert(&mut self, index: usize, mut row: Bits, mut payload: Bits) {
        let mut combo = Bits::zeros(self.n_inputs);
        combo.set(index, true);
        for (k, &p) in self.pivots.iter().enumerate() {
            if row.get(p) {
                row.xor_assign(&self.rows[k]);
                combo.xor_assign(&self.combos[k]);
                payload.xor_assign(&self.payloads[k]);
            }
        }
        if let Some(p) = row.first_one() {
            // Keep existing rows reduced at the new pivot so `solve` can
            // do a single pass in any order.
            for k in 0..self.rows.len() {
                if self.rows[k].get(p) {
                    self.rows[k].xor_assign(&row);
                    self.combos[k].xor_assign(&combo);
                    self.payloads[k].xor_assign(&payload);
                }
            }
            self.rows.push(row);
            self.pivots.push(p);
            self.combos.push(combo);
            self.payloads.push(payload);
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    /// Reduce `target`; returns the residual (zero iff in the row space),
    /// the input combination used, and the accumulated payload.
    pub fn reduce(&self, target: &Bits) -> (Bits, Bits, Bits) {
        let mut residual = target.clone();
        let mut combo = Bits::zeros(self.n_inputs);
        let mut payload = Bits::zeros(self.payload_len);
        for (k, &p) in self.pivots.iter().enumerate() {
            if residual.get(p) {
                residual.xor_assign(&self.rows[k]);
                combo.xor_assign(&self.combos[k]);
                payload.xor_assign(&self.payloads[k]);
            }
        }
        (residual, combo, payload)
    }

    pub fn contains(&self, target: &Bits) -> bool {
        let mut residual = target.clone();
        for (k, &p) in self.pivots.iter().enumerate() {
            if residual.get(p) {
                residual.xor_assign(&self.rows[k]);
            }
        }
        residual.is_zero()
    }

    pub fn solve(&self, target: &Bits) -> Option<Bits> {
        let (residual, combo, _) = self.reduce(target);
        residual.is_zero().then_some(combo)
    }

    /// Like [`solve`](Self::solve) but returns the accumulated payload.
    pub fn solve_payload(&self, target: &Bits) -> Option<Bits> {
        let (residual, _, payload) = self.reduce(target);
        residual.is_zero().then_some(payload)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Bits {
        Bits::from_bools(&s.chars().map(|c| c == '1').collect::<Vec<_>>())
    }

    #[test]
    fn identity_solve() {
        let m = BinaryMatrix::identity(3);
        let (rank, sol) = m.rank_and_solve(Some(&bits("101")));
        assert_eq!(rank, 3);
        assert_eq!(sol.unwrap(), bits("101"));
    }

    #[test]
    fn xor_of_two_rows() {
        let m = BinaryMatrix::from_rows(3, vec![bits("110"), bits("011")]);
        let (rank, sol) = m.rank_and_solve(Some(&bits("101")));
        assert_eq!(rank, 2);
        assert_eq!(sol.unwrap(), bits("11"));
    }

    #[test]
    fn infeasible_target() {
        let m = BinaryMatrix::from_rows(3, vec![bits("110"), bits("011")]);
        let (rank, sol) = m.rank_and_solve(Some(&bits("100")));
        assert_eq!(rank, 2);
        assert!(sol.is_none());
    }

    #[test]
    fn dependent_rows_rank() {
        let m = BinaryMatrix::from_rows(4, vec![bits("1100"), bits("0110"), bits("1010")]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let m = BinaryMatrix::from_rows(5, vec![bits("11010"), bits("01101"), bits("10111")]);
        let kernel = m.nullspace();
        assert_eq!(kernel.len(), 5 - m.rank());
        for v in &kernel {
            for r in m.rows() {
                assert!(!r.dot(v));
            }
        }
    }

    #[test]
    fn lex_order_prefers_zero_first() {
        assert_eq!(bits("0100").lex_cmp(&bits("1000")), Ordering::Less);
        assert_eq!(bits("0011").lex_cmp(&bits("0011")), Ordering::Equal);
    }

    #[test]
    fn iter_ones_across_words() {
        let b = Bits::from_indices(200, [0, 63, 64, 130, 199]);
        assert_eq!(b.iter_ones().collect::<Vec<_>>(), vec![0, 63, 64, 130, 199]);
        assert_eq!(b.count_ones(), 5);
    }

    #[test]
    fn payload_tracks_combination() {
        let rows = vec![
            (bits("110"), bits("10")),
            (bits("011"), bits("01")),
        ];
        let r = RowReducer::with_payloads(3, rows, 2);
        assert_eq!(r.solve_payload(&bits("101")).unwrap(), bits("11"));
        assert!(r.solve_payload(&bits("111")).is_none());
    }
}
