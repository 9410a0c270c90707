//! Bit-packed linear algebra over GF(2).
//!
//! Vectors pack one coordinate per bit into `u64` words. [`DecoderState`]
//! keeps an incremental row-echelon basis where every basis row's pivot is
//! its lowest set column; this is what the RLNC receivers use to track rank
//! and to recover payloads once the basis is complete.

use std::fmt;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("not decodable: rank {rank} < {cols} columns")]
    NotDecodable { rank: usize, cols: usize },
    #[error("right-hand side has {actual} entries for {expected} rows")]
    RhsLength { expected: usize, actual: usize },
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector in GF(2)^len, also used as a fixed-size bit set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    /// The `i`-th standard basis vector.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(len: usize, bits: I) -> Self {
        let mut v = Self::zeros(len);
        for (i, b) in bits.into_iter().enumerate().take(len) {
            v.set(i, b);
        }
        v
    }

    /// Parses a string of `0`/`1` characters, coordinate 0 first.
    ///
    /// Panics on any other character; intended for fixtures and tests.
    pub fn from_str_bits(s: &str) -> Self {
        let bits: Vec<bool> = s
            .chars()
            .map(|c| match c {
                '0' => false,
                '1' => true,
                other => panic!("invalid bit character {other:?}"),
            })
            .collect();
        Self::from_bits(bits.len(), bits)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
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
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set coordinate at or after `from`.
    pub fn first_one_from(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut wi = from / WORD_BITS;
        let mut word = self.words[wi] & (u64::MAX << (from % WORD_BITS));
        loop {
            if word != 0 {
                return Some(wi * WORD_BITS + word.trailing_zeros() as usize);
            }
            wi += 1;
            if wi == self.words.len() {
                return None;
            }
            word = self.words[wi];
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        self.first_one_from(0)
    }

    /// Iterates set coordinates in increasing order.
    pub fn iter_ones(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn and_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len, "length mismatch in and");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn or_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len, "length mismatch in or");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    /// Clears every coordinate set in `other`.
    pub fn and_not_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len, "length mismatch in and_not");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    /// Number of coordinates set in both vectors.
    pub fn and_count(&self, other: &Gf2Vector) -> usize {
        assert_eq!(self.len, other.len, "length mismatch in and_count");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Gf2Vector) -> bool {
        self.and_count(other) % 2 == 1
    }

    /// XOR of `payloads[i]` over all set coordinates `i`.
    pub fn select_xor(&self, payloads: &[u64]) -> u64 {
        self.iter_ones().fold(0, |acc, i| acc ^ payloads[i])
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector(")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// Dense GF(2) matrix stored as rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<Gf2Vector>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![Gf2Vector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| Gf2Vector::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Gf2Vector>) -> Result<Self, Gf2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::DimensionMismatch {
                expected: cols,
                actual: bad.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    /// Builds a matrix from `0`/`1` strings, one per row.
    pub fn from_str_rows(rows: &[&str]) -> Result<Self, Gf2Error> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| Gf2Vector::from_str_bits(r)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &Gf2Vector {
        &self.rows[i]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &Gf2Vector> {
        self.rows.iter()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn push_row(&mut self, row: Gf2Vector) -> Result<(), Gf2Error> {
        if row.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                actual: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        let mut dec = DecoderState::new(self.cols);
        for row in &self.rows {
            dec.insert_reduced(row.clone(), 0);
        }
        dec.rank()
    }

    /// `self · x` over GF(2).
    pub fn mat_vec_mul(&self, x: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        if x.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                actual: x.len(),
            });
        }
        Ok(Gf2Vector::from_bits(
            self.rows.len(),
            self.rows.iter().map(|r| r.dot(x)),
        ))
    }

    /// True iff `x` lies in the kernel.
    pub fn annihilates(&self, x: &Gf2Vector) -> Result<bool, Gf2Error> {
        Ok(self.mat_vec_mul(x)?.is_zero())
    }

    /// Applies each row as a payload selector.
    pub fn encode(&self, payloads: &[u64]) -> Result<Vec<u64>, Gf2Error> {
        if payloads.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                actual: payloads.len(),
            });
        }
        Ok(self.rows.iter().map(|r| r.select_xor(payloads)).collect())
    }

    /// Recovers the per-column payloads from `rhs[i] = row_i · payloads`.
    pub fn solve(&self, rhs: &[u64]) -> Result<Vec<u64>, Gf2Error> {
        if rhs.len() != self.rows.len() {
            return Err(Gf2Error::RhsLength {
                expected: self.rows.len(),
                actual: rhs.len(),
            });
        }
        let mut dec = DecoderState::new(self.cols);
        for (row, &payload) in self.rows.iter().zip(rhs) {
            dec.insert_reduced(row.clone(), payload);
        }
        dec.solve()
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.rows).finish()
    }
}

/// Incremental row-echelon basis with an attached payload per basis row.
///
/// `pivots[c]` holds the basis row whose lowest set column is `c`.
#[derive(Clone, Debug)]
pub struct DecoderState {
    dim: usize,
    pivots: Vec<Option<(Gf2Vector, u64)>>,
    rank: usize,
}

impl DecoderState {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            pivots: vec![None; dim],
            rank: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.dim
    }

    /// Pivot columns currently occupied, ascending.
    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.as_ref().map(|_| c))
    }

    pub fn basis(&self) -> impl Iterator<Item = &Gf2Vector> {
        self.pivots.iter().filter_map(|p| p.as_ref().map(|(r, _)| r))
    }

    /// Inserts a coefficient row without a payload.
    pub fn insert(&mut self, row: Gf2Vector) -> Result<bool, Gf2Error> {
        self.insert_with_payload(row, 0)
    }

    /// Inserts a coefficient row and the payload it encodes. Returns whether
    /// the row was outside the current span.
    pub fn insert_with_payload(&mut self, row: Gf2Vector, payload: u64) -> Result<bool, Gf2Error> {
        if row.len() != self.dim {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.dim,
                actual: row.len(),
            });
        }
        Ok(self.insert_reduced(row, payload))
    }

    /// Same as [`insert_with_payload`](Self::insert_with_payload) but borrows
    /// the row, copying it only when it is accepted.
    pub fn insert_ref(
        &mut self,
        row: &Gf2Vector,
        payload: u64,
        scratch: &mut Gf2Vector,
    ) -> Result<bool, Gf2Error> {
        if row.len() != self.dim {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.dim,
                actual: row.len(),
            });
        }
        if self.is_full_rank() {
            return Ok(false);
        }
        scratch.words.clone_from(&row.words);
        scratch.len = row.len;
        let mut payload = payload;
        match self.reduce(scratch, &mut payload) {
            Some(pivot) => {
                self.pivots[pivot] = Some((scratch.clone(), payload));
                self.rank += 1;
                Ok(true)
            }
            None => Ok(false),
        }
    }

    /// True iff `row` lies in the span of the basis.
    pub fn contains(&self, row: &Gf2Vector) -> bool {
        let mut r = row.clone();
        let mut dummy = 0;
        self.reduce(&mut r, &mut dummy).is_none()
    }

    fn insert_reduced(&mut self, mut row: Gf2Vector, mut payload: u64) -> bool {
        match self.reduce(&mut row, &mut payload) {
            Some(pivot) => {
                self.pivots[pivot] = Some((row, payload));
                self.rank += 1;
                true
            }
            None => false,
        }
    }

    /// Eliminates existing pivots from `row`. Returns the first free pivot
    /// column if the reduced row is nonzero.
    fn reduce(&self, row: &mut Gf2Vector, payload: &mut u64) -> Option<usize> {
        let mut from = 0;
        while let Some(c) = row.first_one_from(from) {
            match &self.pivots[c] {
                Some((basis_row, basis_payload)) => {
                    // basis_row has no bits below c, so lower columns stay clear.
                    for (a, b) in row.words.iter_mut().zip(&basis_row.words).skip(c / WORD_BITS) {
                        *a ^= *b;
                    }
                    *payload ^= *basis_payload;
                    from = c + 1;
                }
                None => return Some(c),
            }
        }
        None
    }

    /// Back-substitutes the full-rank basis into one payload per column.
    pub fn solve(&self) -> Result<Vec<u64>, Gf2Error> {
        if !self.is_full_rank() {
            return Err(Gf2Error::NotDecodable {
                rank: self.rank,
                cols: self.dim,
            });
        }
        let mut values = vec![0u64; self.dim];
        for c in (0..self.dim).rev() {
            let (row, payload) = self.pivots[c].as_ref().expect("full rank has every pivot");
            let mut v = *payload;
            for j in row.iter_ones().skip(1) {
                v ^= values[j];
            }
            values[c] = v;
        }
        Ok(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(Gf2Matrix::identity(3).rank(), 3);
        assert_eq!(Gf2Matrix::zeros(2, 4).rank(), 0);
        let m = Gf2Matrix::from_str_rows(&["110", "011", "101"]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn mat_vec_examples() {
        let x = Gf2Vector::from_str_bits("1011");
        assert_eq!(Gf2Matrix::identity(4).mat_vec_mul(&x).unwrap(), x);
        let m = Gf2Matrix::from_str_rows(&["110", "011"]).unwrap();
        assert!(m.mat_vec_mul(&Gf2Vector::zeros(3)).unwrap().is_zero());
        let y = m.mat_vec_mul(&Gf2Vector::from_str_bits("111")).unwrap();
        assert_eq!(y, Gf2Vector::from_str_bits("00"));
        assert!(matches!(
            m.mat_vec_mul(&Gf2Vector::zeros(4)),
            Err(Gf2Error::DimensionMismatch { expected: 3, actual: 4 })
        ));
    }

    #[test]
    fn decoder_insert_examples() {
        let mut d = DecoderState::new(3);
        assert!(d.insert(Gf2Vector::unit(3, 0)).unwrap());
        assert!(d.insert(Gf2Vector::unit(3, 1)).unwrap());
        assert_eq!(d.rank(), 2);
        assert!(!d.insert(Gf2Vector::from_str_bits("110")).unwrap());
        assert_eq!(d.rank(), 2);
        assert!(!d.insert(Gf2Vector::zeros(3)).unwrap());
        assert_eq!(d.rank(), 2);
        assert!(d.insert(Gf2Vector::zeros(4)).is_err());
    }

    #[test]
    fn pivots_are_lowest_columns() {
        let mut d = DecoderState::new(4);
        d.insert(Gf2Vector::from_str_bits("0110")).unwrap();
        d.insert(Gf2Vector::from_str_bits("0101")).unwrap();
        assert_eq!(d.pivot_columns().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn solve_examples() {
        let (a, b, c) = (0xAAu64, 0x5Bu64, 0x1234u64);
        assert_eq!(Gf2Matrix::identity(3).solve(&[a, b, c]).unwrap(), vec![a, b, c]);
        let m = Gf2Matrix::from_str_rows(&["10", "11"]).unwrap();
        assert_eq!(m.solve(&[a, a ^ b]).unwrap(), vec![a, b]);
        let under = Gf2Matrix::from_str_rows(&["11"]).unwrap();
        let err = under.solve(&[a]).unwrap_err();
        assert!(err.to_string().contains("not decodable"));
    }

    #[test]
    fn bit_iteration_across_words() {
        let v = Gf2Vector::from_indices(200, [0, 63, 64, 130, 199]);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 63, 64, 130, 199]);
        assert_eq!(v.first_one_from(65), Some(130));
        assert_eq!(v.first_one_from(200), None);
        assert_eq!(Gf2Vector::ones(70).count_ones(), 70);
    }

    #[test]
    fn self_xor_is_zero() {
        let mut v = Gf2Vector::from_str_bits("1011001");
        let w = v.clone();
        v.xor_assign(&w);
        assert!(v.is_zero());
    }
}
