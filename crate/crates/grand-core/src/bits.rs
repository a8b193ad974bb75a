//! Packed GF(2) vectors and matrices.
//!
//! Codewords, syndromes and parity-check/generator matrices are all bit
//! vectors packed into 64-bit words. Bits beyond the logical length are kept
//! zero so that equality and hashing agree with bitwise content; syndrome
//! checks and duplicate-candidate detection rely on that canonical form.

use std::fmt;
use thiserror::Error;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

#[inline]
fn tail_mask(len: usize) -> u64 {
    let rem = len % WORD_BITS;
    if rem == 0 {
        u64::MAX
    } else {
        (1u64 << rem) - 1
    }
}

/// Dense bit vector over GF(2). Bit `i` is `(words[i/64] >> (i%64)) & 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    /// Zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    /// Unit vector with a single bit set at `pos`.
    pub fn unit(len: usize, pos: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(pos, true);
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

    /// Bits given as 0/1 integers; anything nonzero counts as 1.
    pub fn from_bits<T: Copy + Into<u64>>(bits: &[T]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b.into() != 0 {
                v.set(i, true);
            }
        }
        v
    }

    /// Build from packed words; bits beyond `len` are masked off.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(words_for(len), 0);
        if !words.is_empty() {
            let last = words.len() - 1;
            words[last] &= tail_mask(len);
        }
        Self { words, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Number of set bits; `a.xor(&b).weight()` is the Hamming distance.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True iff the Hamming weight is odd.
    pub fn parity(&self) -> bool {
        self.words.iter().fold(0u64, |acc, w| acc ^ w).count_ones() & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Elementwise XOR (addition and subtraction over GF(2)).
    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(
            self.len, other.len,
            "xor: length mismatch ({} vs {})",
            self.len, other.len
        );
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Positions of the set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    /// Hex string with bit 0 as the most significant bit of the leading
    /// digit; a trailing partial nibble is padded with zeros.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut s = String::with_capacity(digits + 2);
        s.push_str("0x");
        for d in 0..digits {
            let mut nibble = 0u8;
            for b in 0..4 {
                let i = 4 * d + b;
                if i < self.len && self.get(i) {
                    nibble |= 1 << (3 - b);
                }
            }
            s.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        s
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

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Dense GF(2) matrix, row-major with packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = words_for(cols);
        Self {
            rows,
            cols,
            words_per_row: wpr,
            words: vec![0; rows * wpr],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Rows must all have the same length.
    pub fn from_rows(rows: &[BitVector]) -> Self {
        assert!(!rows.is_empty(), "from_rows: no rows");
        let cols = rows[0].len();
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "from_rows: ragged row {r}");
            let start = r * m.words_per_row;
            m.words[start..start + m.words_per_row].copy_from_slice(row.words());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        (self.words[r * self.words_per_row + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let w = r * self.words_per_row + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            self.words[w] |= mask;
        } else {
            self.words[w] &= !mask;
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector::from_words(self.row_words(r).to_vec(), self.cols)
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix-vector product over GF(2): output bit r is the inner product of
    /// row r with `v`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(
            self.cols,
            v.len(),
            "mul_vec: matrix has {} columns, vector has {} bits",
            self.cols,
            v.len()
        );
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.row_words(r).iter().zip(v.words()) {
                acc ^= a & b;
            }
            if acc.count_ones() & 1 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Flags the columns equal to `s`: output bit r is 1 iff column r of the
    /// matrix equals `s` bitwise. Equivalently, bit r is 1 iff
    /// `self.mul_vec(e_r) == s`.
    pub fn column_match(&self, s: &BitVector) -> BitVector {
        assert_eq!(
            self.rows,
            s.len(),
            "column_match: matrix has {} rows, syndrome has {} bits",
            self.rows,
            s.len()
        );
        let mut g = BitVector::zeros(self.cols);
        for c in 0..self.cols {
            let mut equal = true;
            for r in 0..self.rows {
                if self.get(r, c) != s.get(r) {
                    equal = false;
                    break;
                }
            }
            if equal {
                g.set(c, true);
            }
        }
        g
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            if let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, c)) {
                m.swap_rows(rank, pivot);
                for r in 0..m.rows {
                    if r != rank && m.get(r, c) {
                        m.xor_row(r, rank);
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words_per_row {
            self.words.swap(a * self.words_per_row + w, b * self.words_per_row + w);
        }
    }

    /// XORs row `src` into row `dst`.
    fn xor_row(&mut self, dst: usize, src: usize) {
        for w in 0..self.words_per_row {
            let x = self.words[src * self.words_per_row + w];
            self.words[dst * self.words_per_row + w] ^= x;
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parity-check matrix is rank deficient: rank {rank} < {rows} rows")]
pub struct RankDeficient {
    pub rank: usize,
    pub rows: usize,
}

/// Generator matrix derived from a full-row-rank parity-check matrix.
#[derive(Debug, Clone)]
pub struct Systematized {
    /// Basis of the null space of H; one row per information position.
    pub generator: BitMatrix,
    /// Pivot columns of H followed by the information columns. Reordering
    /// H's columns by this permutation puts it in `[I | P]` form.
    pub permutation: Vec<usize>,
}

/// Computes a generator matrix for the code `{v : H v = 0}` by GF(2)
/// Gaussian elimination. Requires H to have full row rank; the same routine
/// derives H from a full-rank generator matrix by duality.
pub fn systematize(h: &BitMatrix) -> Result<Systematized, RankDeficient> {
    let (rows, cols) = (h.rows(), h.cols());
    let mut m = h.clone();
    let mut pivot_cols = Vec::with_capacity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        if let Some(pivot) = (r..rows).find(|&i| m.get(i, c)) {
            m.swap_rows(r, pivot);
            for i in 0..rows {
                if i != r && m.get(i, c) {
                    m.xor_row(i, r);
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
    }
    if r < rows {
        return Err(RankDeficient { rank: r, rows });
    }

    let mut is_pivot = vec![false; cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    let info_cols: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();

    // Row gi sets information bit f and cancels it on every pivot column:
    // after reduction, row pi of m has its leading 1 at pivot_cols[pi], so
    // the parity contribution of column f on check pi is m[pi][f].
    let mut generator = BitMatrix::zeros(info_cols.len(), cols);
    for (gi, &f) in info_cols.iter().enumerate() {
        generator.set(gi, f, true);
        for (pi, &p) in pivot_cols.iter().enumerate() {
            if m.get(pi, f) {
                generator.set(gi, p, true);
            }
        }
    }

    let mut permutation = pivot_cols;
    permutation.extend_from_slice(&info_cols);
    Ok(Systematized {
        generator,
        permutation,
    })
}
