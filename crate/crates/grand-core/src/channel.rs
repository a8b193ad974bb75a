//! BPSK over the binary-input AWGN channel: noise variance from Eb/N0,
//! transmission, LLR computation, hard decisions and sequence likelihoods.
//!
//! All likelihood arithmetic stays in the log domain; probabilities are
//! exponentiated only where the soft-output accumulators need them.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bits::BitVector;

/// LLR magnitudes are clamped so exp(|l|) cannot overflow an f64.
pub const LLR_MAX: f64 = 700.0;

/// Channel operating point. `sigma2 = 1 / (2 * rate * 10^(ebn0_db/10))`,
/// with `rate` the rate of the linear code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    pub rate: f64,
    pub sigma2: f64,
}

impl ChannelParams {
    pub fn new(rate: f64, ebn0_db: f64) -> Self {
        Self {
            ebn0_db,
            rate,
            sigma2: noise_sigma2(rate, ebn0_db),
        }
    }
}

/// Noise variance of the BIAWGN channel at a given code rate and Eb/N0.
pub fn noise_sigma2(rate: f64, ebn0_db: f64) -> f64 {
    assert!(
        rate > 0.0 && rate <= 1.0,
        "code rate {rate} outside (0, 1]"
    );
    1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))
}

/// Per-bit log-likelihood ratios in natural log; positive favors bit 0.
/// Values are clamped to [-LLR_MAX, LLR_MAX] and must be finite.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector {
    values: Vec<f64>,
}

impl LlrVector {
    pub fn new(values: Vec<f64>) -> Self {
        let values = values
            .into_iter()
            .map(|l| {
                assert!(!l.is_nan(), "LLR must not be NaN");
                l.clamp(-LLR_MAX, LLR_MAX)
            })
            .collect();
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }
}

/// Transmits a codeword as BPSK symbols x_i = (-1)^{c_i} plus i.i.d.
/// zero-mean Gaussian noise of variance `sigma2`. Deterministic given the
/// rng stream: exactly one standard-normal draw per bit, in bit order.
pub fn transmit<R: Rng + ?Sized>(c: &BitVector, params: &ChannelParams, rng: &mut R) -> Vec<f64> {
    let sigma = params.sigma2.sqrt();
    (0..c.len())
        .map(|i| {
            let x = if c.get(i) { -1.0 } else { 1.0 };
            let z: f64 = StandardNormal.sample(rng);
            x + sigma * z
        })
        .collect()
}

/// LLRs for BPSK over AWGN: l_i = 2 y_i / sigma^2, clamped.
pub fn compute_llrs(y: &[f64], params: &ChannelParams) -> LlrVector {
    assert!(params.sigma2 > 0.0, "sigma2 must be positive");
    LlrVector::new(y.iter().map(|&yi| 2.0 * yi / params.sigma2).collect())
}

/// Hard decision: bit i is 1 iff l_i <= 0 (ties resolve to 1).
pub fn hard_decision(llr: &LlrVector) -> BitVector {
    let mut v = BitVector::zeros(llr.len());
    for (i, &l) in llr.as_slice().iter().enumerate() {
        if l <= 0.0 {
            v.set(i, true);
        }
    }
    v
}

/// log(1 + exp(x)) with large-|x| asymptotics.
#[inline]
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 34.0 {
        // log1p(exp(-34)) < 2e-15: below f64 resolution of x
        x
    } else if x < -37.0 {
        x.exp()
    } else {
        x.exp().ln_1p()
    }
}

/// Log of the a posteriori sequence probability of the word w given the
/// LLRs: sum of -log(1 + exp(l_i)) for w_i = 1 and -log(1 + exp(-l_i)) for
/// w_i = 0.
pub fn sequence_log_likelihood(w: &BitVector, llr: &LlrVector) -> f64 {
    assert_eq!(
        w.len(),
        llr.len(),
        "word has {} bits, LLR vector has {}",
        w.len(),
        llr.len()
    );
    let mut sum = 0.0;
    for (i, &l) in llr.as_slice().iter().enumerate() {
        sum -= if w.get(i) { softplus(l) } else { softplus(-l) };
    }
    sum
}

/// Log-likelihood of the hard-decision word, the maximum over all words.
pub fn hard_decision_log_likelihood(llr: &LlrVector) -> f64 {
    llr.as_slice().iter().map(|&l| -softplus(-l.abs())).sum()
}

/// Probability that a word drawn from the per-bit posterior has even
/// Hamming weight: (1 + prod_i tanh(l_i / 2)) / 2.
pub fn even_parity_mass(llr: &LlrVector) -> f64 {
    let prod: f64 = llr.as_slice().iter().map(|&l| (l / 2.0).tanh()).product();
    0.5 * (1.0 + prod)
}
