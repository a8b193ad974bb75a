//! GRAND-family decoding for binary linear codes.
//!
//! The crate provides ORBGRAND pattern generation in logistic-weight order,
//! soft-output list decoding, a syndrome-assisted dynamic-list decoder that
//! finds candidate codewords one bit flip away from each guess, eBCH code
//! construction over GF(2^m) with alist import/export, a BPSK/AWGN channel
//! model, and a deterministic Monte Carlo harness measuring block error
//! rate and average guesswork.
//!
//! The Monte Carlo inner loops run data-parallel on rayon by default; build
//! with `--no-default-features` for a purely sequential core. Results are
//! bit-identical either way.

pub mod alist;
pub mod bits;
pub mod channel;
pub mod code;
pub mod decoder;
pub mod galois;
pub mod pattern;
pub mod sim;

pub use bits::{BitMatrix, BitVector};
pub use channel::{ChannelParams, LlrVector};
pub use code::LinearCode;
pub use decoder::{DecodeOutcome, DecodeStatus, DecoderConfig, DecoderVariant};
pub use sim::{SimPoint, StoppingRule, SweepConfig, SweepResult};
