//! Dense bit-packed linear algebra over GF(2).
//!
//! Rows are stored as runs of 64-bit words; bits past `cols` in the last
//! word of each row are always zero. Elimination picks pivots left to
//! right and takes the first row with a nonzero entry, so every basis
//! this module returns is deterministic.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: {op} got {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("packed size overflow in {0}")]
    SizeOverflow(&'static str),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

fn tail_mask(bits: usize) -> u64 {
    match bits % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Builds a vector of `len` bits from the low bits of `mask` (bit `i` of the
    /// mask is entry `i`).
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD, "mask vectors hold at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = mask & tail_mask(len);
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
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let bit = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= bit;
        } else {
            self.words[i / WORD] &= !bit;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Low 64 bits as a mask; only meaningful for vectors of length ≤ 64.
    pub fn to_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

/// Row-major bit-packed matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
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

    /// Builds a matrix from rows of 0/1 entries. All rows must share a length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self, Gf2Error> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Gf2Error::DimensionMismatch {
                    op: "from_rows",
                    left: (i, row.len()),
                    right: (0, cols),
                });
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(i, j, true),
                    other => {
                        return Err(Gf2Error::Parse {
                            line: i + 1,
                            msg: format!("entry {other} is not a bit"),
                        })
                    }
                }
            }
        }
        Ok(m)
    }

    /// Stacks vectors as rows. An empty list yields a 0×`cols` matrix.
    pub fn from_vectors(cols: usize, vectors: &[BitVector]) -> Self {
        let mut m = Self::zeros(vectors.len(), cols);
        for (i, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), cols);
            m.row_words_mut(i).copy_from_slice(&v.words);
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
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let bit = 1u64 << (c % WORD);
        let w = &mut self.data[r * self.stride + c / WORD];
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.stride, dst * self.stride);
        for k in 0..self.stride {
            let w = self.data[s + k];
            self.data[d + k] ^= w;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Entrywise sum (XOR).
    pub fn add(&self, other: &Self) -> Result<Self, Gf2Error> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Gf2Error::DimensionMismatch {
                op: "add",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                op: "matmul",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        // Row i of the product is the XOR of rows of `other` selected by row i of `self`.
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let src = other.row_words(k);
                    for (d, s) in out.data[i * out.stride..(i + 1) * out.stride]
                        .iter_mut()
                        .zip(src)
                    {
                        *d ^= s;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector, Gf2Error> {
        if self.cols != v.len {
            return Err(Gf2Error::DimensionMismatch {
                op: "mul_vec",
                left: (self.rows, self.cols),
                right: (v.len, 1),
            });
        }
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(&v.words)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    pub fn kron(&self, other: &Self) -> Result<Self, Gf2Error> {
        let rows = self
            .rows
            .checked_mul(other.rows)
            .ok_or(Gf2Error::SizeOverflow("kron rows"))?;
        let cols = self
            .cols
            .checked_mul(other.cols)
            .ok_or(Gf2Error::SizeOverflow("kron cols"))?;
        rows.checked_mul(words_for(cols))
            .ok_or(Gf2Error::SizeOverflow("kron storage"))?;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.get(i, j) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        if other.get(k, l) {
                            out.set(i * other.rows + k, j * other.cols + l, true);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &Self) -> Result<Self, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch {
                op: "vstack",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Self) -> Result<Self, Gf2Error> {
        if self.rows != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                op: "hstack",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(r, c, true);
                }
            }
            for c in 0..other.cols {
                if other.get(r, c) {
                    out.set(r, self.cols + c, true);
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..m.cols {
            if next == m.rows {
                break;
            }
            let Some(p) = (next..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(p, next);
            for r in 0..m.rows {
                if r != next && m.get(r, c) {
                    m.xor_row_into(next, r);
                }
            }
            pivots.push(c);
            next += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column in
    /// ascending column order.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::zeros(self.cols);
                v.set(f, true);
                for (row, &p) in pivots.iter().enumerate() {
                    if r.get(row, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Basis of `ker(self) ∩ ker(other)`, the kernel of the stacked matrix.
    pub fn kernel_intersection(&self, other: &Self) -> Result<Vec<BitVector>, Gf2Error> {
        Ok(self.vstack(other)?.kernel_basis())
    }

    pub fn row_space_contains(&self, v: &BitVector) -> Result<bool, Gf2Error> {
        if v.len != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                op: "row_space_contains",
                left: (self.rows, self.cols),
                right: (1, v.len),
            });
        }
        Ok(RowReducer::new(self).contains(v))
    }
}

/// Echelon basis of a row space, kept around for repeated membership tests.
#[derive(Debug, Clone)]
pub struct RowReducer {
    basis: Vec<BitVector>,
    pivots: Vec<usize>,
    cols: usize,
}

impl RowReducer {
    pub fn new(m: &BinaryMatrix) -> Self {
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i)).collect();
        Self {
            basis,
            pivots,
            cols: m.cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the row space.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols);
        let mut out = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if out.get(p) {
                out.xor_assign(b);
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("\n")?;
            }
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        write!(f, "{self}")
    }
}

impl FromStr for BinaryMatrix {
    type Err = Gf2Error;

    /// Parses newline-separated rows of `0`/`1`. Blank lines are skipped.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rows = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    other => Err(Gf2Error::Parse {
                        line: i + 1,
                        msg: format!("unexpected character {other:?}"),
                    }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(first) = rows.first().map(|r: &Vec<u8>| r.len()) {
                if first != row.len() {
                    return Err(Gf2Error::Parse {
                        line: i + 1,
                        msg: format!("row has {} columns, expected {first}", row.len()),
                    });
                }
            }
            rows.push(row);
        }
        Self::from_rows(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(s: &str) -> BinaryMatrix {
        s.replace(' ', "\n").parse().unwrap()
    }

    fn random_matrix(rows: usize, cols: usize, bits: &[bool]) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.set(r, c, bits[(r * cols + c) % bits.len()]);
            }
        }
        out
    }

    #[test]
    fn identity_is_neutral_for_matmul() {
        let x = m("101 011 111");
        assert_eq!(BinaryMatrix::identity(3).matmul(&x).unwrap(), x);
    }

    #[test]
    fn one_plus_one_is_zero() {
        let a = m("11");
        let p = a.matmul(&a.transpose()).unwrap();
        assert_eq!(p, m("0"));
    }

    #[test]
    fn matmul_rejects_mismatch() {
        let err = m("11").matmul(&m("11")).unwrap_err();
        assert!(matches!(err, Gf2Error::DimensionMismatch { op: "matmul", .. }));
    }

    #[test]
    fn kron_examples() {
        let x = m("101 011");
        assert_eq!(BinaryMatrix::identity(1).kron(&x).unwrap(), x);
        assert_eq!(
            BinaryMatrix::identity(2).kron(&m("11")).unwrap(),
            m("1100 0011")
        );
        assert_eq!(
            m("11").kron(&BinaryMatrix::identity(2)).unwrap(),
            m("1010 0101")
        );
    }

    #[test]
    fn kron_overflow_is_reported() {
        let big = BinaryMatrix::zeros(0, usize::MAX / 2);
        let err = big.kron(&BinaryMatrix::zeros(0, 4)).unwrap_err();
        assert_eq!(err, Gf2Error::SizeOverflow("kron cols"));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BinaryMatrix::identity(3).rank(), 3);
        assert_eq!(m("11 11").rank(), 1);
        assert_eq!(BinaryMatrix::zeros(0, 0).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(m("11").kernel_basis(), vec![BitVector::from_bits(&[true, true])]);
        assert!(BinaryMatrix::identity(2).kernel_basis().is_empty());
        assert_eq!(BinaryMatrix::zeros(1, 3).kernel_basis().len(), 3);
    }

    #[test]
    fn kernel_intersection_examples() {
        assert_eq!(m("11").kernel_intersection(&m("11")).unwrap().len(), 1);
        assert!(m("10").kernel_intersection(&m("01")).unwrap().is_empty());
        assert!(m("10").kernel_intersection(&m("011")).is_err());
    }

    #[test]
    fn row_space_examples() {
        let a = m("110 011");
        assert!(a.row_space_contains(&a.row(0)).unwrap());
        assert!(a.row_space_contains(&a.row(1)).unwrap());
        assert!(a.row_space_contains(&BitVector::zeros(3)).unwrap());
        assert!(a.row_space_contains(&BitVector::from_bits(&[true, false, true])).unwrap());
        assert!(!m("11")
            .row_space_contains(&BitVector::from_bits(&[true, false]))
            .unwrap());
        assert!(a.row_space_contains(&BitVector::zeros(2)).is_err());
    }

    #[test]
    fn serialization_round_trip_and_errors() {
        let x = m("1010 0111");
        assert_eq!(x.to_string(), "1010\n0111");
        assert_eq!(x.to_string().parse::<BinaryMatrix>().unwrap(), x);
        assert!("10\n1".parse::<BinaryMatrix>().is_err());
        assert!("1x".parse::<BinaryMatrix>().is_err());
        let empty: BinaryMatrix = "".parse().unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 0));
    }

    #[test]
    fn padding_stays_zero_across_words() {
        let mut x = BinaryMatrix::zeros(2, 70);
        x.set(0, 69, true);
        x.set(1, 0, true);
        let t = x.transpose().transpose();
        assert_eq!(t, x);
        assert_eq!(x.row_weight(0), 1);
        let k = x.kernel_basis();
        assert_eq!(k.len(), 68);
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 0usize..64, cols in 0usize..64, bits in proptest::collection::vec(any::<bool>(), 1..512)) {
            let a = random_matrix(rows, cols, &bits);
            let r = a.rank();
            prop_assert!(r <= rows.min(cols));
            let ker = a.kernel_basis();
            prop_assert_eq!(r + ker.len(), cols);
            for v in &ker {
                prop_assert!(a.mul_vec(v).unwrap().is_zero());
            }
        }

        #[test]
        fn kron_rank_is_multiplicative(r1 in 1usize..6, c1 in 1usize..6, r2 in 1usize..6, c2 in 1usize..6,
                                       b1 in proptest::collection::vec(any::<bool>(), 36),
                                       b2 in proptest::collection::vec(any::<bool>(), 36)) {
            let a = random_matrix(r1, c1, &b1);
            let b = random_matrix(r2, c2, &b2);
            prop_assert_eq!(a.kron(&b).unwrap().rank(), a.rank() * b.rank());
        }

        #[test]
        fn transpose_of_product(bits in proptest::collection::vec(any::<bool>(), 64)) {
            let a = random_matrix(5, 7, &bits);
            let b = random_matrix(7, 3, &bits[7..]);
            let lhs = a.matmul(&b).unwrap().transpose();
            let rhs = b.transpose().matmul(&a.transpose()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
