//! Binary linear code construction: BCH codes over GF(2^m), the extended
//! (even-weight) variants, encoding, and code metadata.
//!
//! A `LinearCode` carries both the parity-check matrix H and a generator
//! matrix G, validated against each other at construction, plus a
//! precomputed syndrome-to-column index used by the decoder's candidate
//! search.

use std::collections::HashMap;

use thiserror::Error;

use crate::bits::{systematize, BitMatrix, BitVector, RankDeficient};
use crate::galois::{GaloisError, GaloisField2m};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    RankDeficient(#[from] RankDeficient),
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error("extension degree m={0} must be at least 3 for BCH construction")]
    DegreeTooSmall(u32),
    #[error("designed correction capability t={t} leaves no data bits for length {n}")]
    CapabilityTooLarge { t: usize, n: usize },
    #[error("alist parse error at line {line}: {reason}")]
    AlistParse { line: usize, reason: String },
    #[error("generator/parity-check mismatch: H G^T has a nonzero entry")]
    Inconsistent,
    #[error("unknown code name '{0}' (known: hamming-8-4, ebch-32-21, ebch-256-239)")]
    UnknownCode(String),
}

/// Syndrome-to-column lookup: for a syndrome s, the ascending positions p
/// with H column p equal to s. Dense-indexed for small redundancy, hashed
/// otherwise.
#[derive(Debug, Clone)]
enum SyndromeIndex {
    Dense(Vec<Vec<u32>>),
    Hashed(HashMap<Vec<u64>, Vec<u32>>),
}

const DENSE_INDEX_MAX_BITS: usize = 20;
const EMPTY_POSITIONS: &[u32] = &[];

impl SyndromeIndex {
    fn build(h: &BitMatrix) -> Self {
        let m = h.rows();
        if m <= DENSE_INDEX_MAX_BITS {
            let mut table = vec![Vec::new(); 1usize << m];
            for c in 0..h.cols() {
                let key = h.column(c).words().first().copied().unwrap_or(0) as usize;
                table[key].push(c as u32);
            }
            SyndromeIndex::Dense(table)
        } else {
            let mut map: HashMap<Vec<u64>, Vec<u32>> = HashMap::new();
            for c in 0..h.cols() {
                map.entry(h.column(c).words().to_vec())
                    .or_default()
                    .push(c as u32);
            }
            SyndromeIndex::Hashed(map)
        }
    }

    #[inline]
    fn lookup(&self, syndrome_words: &[u64]) -> &[u32] {
        match self {
            SyndromeIndex::Dense(table) => {
                let key = syndrome_words.first().copied().unwrap_or(0) as usize;
                &table[key]
            }
            SyndromeIndex::Hashed(map) => map
                .get(syndrome_words)
                .map(Vec::as_slice)
                .unwrap_or(EMPTY_POSITIONS),
        }
    }
}

/// BCH construction metadata kept on codes built by `build_bch`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BchMeta {
    pub field_degree: u32,
    pub designed_t: usize,
    pub primitive_poly: u32,
    /// Generator polynomial coefficients, bit i = coefficient of x^i.
    pub generator_poly: BitVector,
}

/// An (n, k) binary linear code with validated H and G.
#[derive(Debug, Clone)]
pub struct LinearCode {
    n: usize,
    k: usize,
    h: BitMatrix,
    g: BitMatrix,
    even_weight: bool,
    label: String,
    bch: Option<BchMeta>,
    // Column c of H packed at [c*sw .. (c+1)*sw]; syndrome of the unit
    // vector e_c, consumed by the decoder's incremental syndrome updates.
    column_syndromes: Vec<u64>,
    syndrome_words: usize,
    index: SyndromeIndex,
}

impl LinearCode {
    /// Builds a code from its parity-check matrix; G is derived by
    /// GF(2) elimination. Fails if H is rank deficient.
    pub fn from_parity_check(h: BitMatrix, label: impl Into<String>) -> Result<Self, CodeError> {
        let sys = systematize(&h)?;
        Self::from_parts(h, sys.generator, label.into(), None)
    }

    /// Builds a code from a full-row-rank generator matrix; H is the null
    /// space basis of G.
    pub fn from_generator(g: BitMatrix, label: impl Into<String>) -> Result<Self, CodeError> {
        let sys = systematize(&g)?;
        Self::from_parts(sys.generator, g, label.into(), None)
    }

    fn from_parts(
        h: BitMatrix,
        g: BitMatrix,
        label: String,
        bch: Option<BchMeta>,
    ) -> Result<Self, CodeError> {
        let n = h.cols();
        let k = g.rows();
        assert_eq!(g.cols(), n, "generator width {} != code length {n}", g.cols());
        assert_eq!(h.rows(), n - k, "H must have n-k rows");
        if h.rank() != n - k {
            return Err(RankDeficient {
                rank: h.rank(),
                rows: n - k,
            }
            .into());
        }
        if g.rank() != k {
            return Err(RankDeficient { rank: g.rank(), rows: k }.into());
        }
        for r in 0..k {
            if !h.mul_vec(&g.row(r)).is_zero() {
                return Err(CodeError::Inconsistent);
            }
        }
        let even_weight = (0..k).all(|r| g.row(r).weight().is_multiple_of(2));

        let syndrome_words = h.rows().div_ceil(64).max(1);
        let mut column_syndromes = vec![0u64; n * syndrome_words];
        for c in 0..n {
            let col = h.column(c);
            column_syndromes[c * syndrome_words..c * syndrome_words + col.words().len()]
                .copy_from_slice(col.words());
        }
        let index = SyndromeIndex::build(&h);
        Ok(Self {
            n,
            k,
            h,
            g,
            even_weight,
            label,
            bch,
            column_syndromes,
            syndrome_words,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Redundancy n - k.
    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    /// True iff every codeword has even Hamming weight (equivalently, every
    /// generator row does; even-weight vectors are closed under XOR).
    pub fn even_weight(&self) -> bool {
        self.even_weight
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn bch_meta(&self) -> Option<&BchMeta> {
        self.bch.as_ref()
    }

    /// Encodes a k-bit message: XOR of the generator rows selected by u.
    pub fn encode(&self, u: &BitVector) -> BitVector {
        assert_eq!(u.len(), self.k, "message has {} bits, expected k={}", u.len(), self.k);
        let mut words = vec![0u64; self.n.div_ceil(64)];
        for r in u.iter_ones() {
            for (w, g) in words.iter_mut().zip(self.g.row_words(r)) {
                *w ^= g;
            }
        }
        BitVector::from_words(words, self.n)
    }

    /// Syndrome H y; zero iff y is a codeword.
    pub fn syndrome(&self, y: &BitVector) -> BitVector {
        self.h.mul_vec(y)
    }

    pub fn is_codeword(&self, y: &BitVector) -> bool {
        self.syndrome(y).is_zero()
    }

    /// Words per packed syndrome.
    pub fn syndrome_words(&self) -> usize {
        self.syndrome_words
    }

    /// Packed column c of H (the syndrome of e_c).
    #[inline]
    pub fn column_syndrome(&self, c: usize) -> &[u64] {
        &self.column_syndromes[c * self.syndrome_words..(c + 1) * self.syndrome_words]
    }

    /// Ascending positions whose H column equals the packed syndrome; the
    /// same relation `BitMatrix::column_match` computes, served from the
    /// precomputed index.
    #[inline]
    pub fn matching_columns(&self, syndrome_words: &[u64]) -> &[u32] {
        self.index.lookup(syndrome_words)
    }
}

/// Narrow-sense binary BCH code of length 2^m - 1 with designed distance
/// 2t + 1. The generator polynomial is the LCM of the minimal polynomials of
/// alpha, alpha^2, ..., alpha^2t; G is the polynomial-multiplication encoder
/// and H its null-space basis.
pub fn build_bch(m: u32, t: usize) -> Result<LinearCode, CodeError> {
    if m < 3 {
        return Err(CodeError::DegreeTooSmall(m));
    }
    let field = GaloisField2m::new(m)?;
    let n = field.order();

    let mut seen_cosets: Vec<u64> = Vec::new();
    // generator polynomial over GF(2), index = power of x
    let mut g_poly: Vec<u8> = vec![1];
    for i in 1..=(2 * t as u64) {
        let rep = coset_representative(i, n as u64);
        if seen_cosets.contains(&rep) {
            continue;
        }
        seen_cosets.push(rep);
        let mp = minimal_polynomial(&field, i);
        g_poly = gf2_poly_mul(&g_poly, &mp);
        if g_poly.len() > n {
            return Err(CodeError::CapabilityTooLarge { t, n });
        }
    }
    let deg = g_poly.len() - 1;
    if deg >= n {
        return Err(CodeError::CapabilityTooLarge { t, n });
    }
    let k = n - deg;

    let g = BitMatrix::from_fn(k, n, |r, c| {
        c >= r && c - r < g_poly.len() && g_poly[c - r] == 1
    });
    let meta = BchMeta {
        field_degree: m,
        designed_t: t,
        primitive_poly: field.polynomial(),
        generator_poly: BitVector::from_bits(&g_poly),
    };
    let sys = systematize(&g)?;
    let code = LinearCode::from_parts(sys.generator, g, format!("bch-{n}-{k}"), Some(meta))?;
    Ok(code)
}

/// Smallest element of the 2-cyclotomic coset of i modulo n.
fn coset_representative(i: u64, n: u64) -> u64 {
    let mut rep = i % n;
    let mut cur = (i * 2) % n;
    while cur != i % n {
        rep = rep.min(cur);
        cur = (cur * 2) % n;
    }
    rep
}

/// Minimal polynomial of alpha^i over GF(2): the product of (x + alpha^s)
/// over the cyclotomic coset of i. Coefficients land in {0, 1}.
fn minimal_polynomial(field: &GaloisField2m, i: u64) -> Vec<u8> {
    let n = field.order() as u64;
    let mut exponents = vec![i % n];
    let mut cur = (i * 2) % n;
    while cur != i % n {
        exponents.push(cur);
        cur = (cur * 2) % n;
    }
    // poly over GF(2^m), index = power of x
    let mut poly: Vec<u16> = vec![1];
    for e in exponents {
        let root = field.alpha_pow(e);
        let mut next = vec![0u16; poly.len() + 1];
        for (j, &coeff) in poly.iter().enumerate() {
            next[j + 1] ^= coeff;
            next[j] ^= field.mul(coeff, root);
        }
        poly = next;
    }
    poly.iter()
        .map(|&c| {
            assert!(c <= 1, "minimal polynomial coefficient {c:#x} outside GF(2)");
            c as u8
        })
        .collect()
}

fn gf2_poly_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] ^= y;
        }
    }
    out
}

/// Appends an overall parity bit: every codeword of the result has even
/// weight, dimension is unchanged.
pub fn extend_parity(code: &LinearCode) -> LinearCode {
    let n = code.n();
    let k = code.k();
    let h = code.parity_check();
    let g = code.generator();
    let h_ext = BitMatrix::from_fn(n - k + 1, n + 1, |r, c| {
        if r < n - k {
            c < n && h.get(r, c)
        } else {
            true // all-ones row: overall parity check
        }
    });
    let g_ext = BitMatrix::from_fn(k, n + 1, |r, c| {
        if c < n {
            g.get(r, c)
        } else {
            g.row(r).weight() % 2 == 1
        }
    });
    LinearCode::from_parts(h_ext, g_ext, format!("{}-ext", code.label()), None)
        .expect("parity extension preserves rank and orthogonality")
}

/// Rate of the nonlinear code formed by the union of radius-1 Hamming
/// spheres around the codewords: (k + log2(n+1)) / n. Diagnostic companion
/// to the expected first-candidate guesswork reduction factor log2(n+1).
pub fn sphere_union_rate(n: usize, k: usize) -> f64 {
    assert!(n >= 1, "sphere_union_rate: n must be positive");
    (k as f64 + ((n + 1) as f64).log2()) / n as f64
}

/// Codes addressable by name from the CLI.
pub fn by_name(name: &str) -> Result<LinearCode, CodeError> {
    match name {
        "hamming-8-4" | "ebch-8-4" => {
            Ok(extend_parity(&build_bch(3, 1)?).with_label("hamming-8-4"))
        }
        "ebch-32-21" => Ok(extend_parity(&build_bch(5, 2)?).with_label("ebch-32-21")),
        "ebch-256-239" => Ok(extend_parity(&build_bch(8, 2)?).with_label("ebch-256-239")),
        other => Err(CodeError::UnknownCode(other.to_string())),
    }
}
