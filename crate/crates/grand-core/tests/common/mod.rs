//! Shared test oracles.

use grand_core::bits::BitVector;
use grand_core::channel::{sequence_log_likelihood, LlrVector};
use grand_core::code::LinearCode;

/// All 2^k codewords, message order. Only for small k.
pub fn enumerate_codebook(code: &LinearCode) -> Vec<BitVector> {
    assert!(code.k() <= 16, "codebook enumeration only for small k");
    (0u64..1 << code.k())
        .map(|u| code.encode(&BitVector::from_words(vec![u], code.k())))
        .collect()
}

/// Exhaustive maximum-likelihood decoding over the full codebook;
/// independent of every decoder code path.
pub fn ml_decode<'a>(codebook: &'a [BitVector], llr: &LlrVector) -> &'a BitVector {
    let mut best = &codebook[0];
    let mut best_ll = f64::NEG_INFINITY;
    for c in codebook {
        let ll = sequence_log_likelihood(c, llr);
        if ll > best_ll {
            best_ll = ll;
            best = c;
        }
    }
    best
}
