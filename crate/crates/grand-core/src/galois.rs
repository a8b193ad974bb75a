//! GF(2^m) arithmetic for BCH code construction.
//!
//! Field elements are bitmasks of polynomials over GF(2) modulo a primitive
//! polynomial. Primitivity is verified at construction by walking the powers
//! of alpha = x and requiring the multiplicative group to have order
//! 2^m - 1, which also rules out reducible moduli (their unit groups are
//! strictly smaller).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("extension degree m={0} out of supported range 2..=16")]
    DegreeOutOfRange(u32),
    #[error("polynomial {poly:#x} is not primitive over GF(2) for m={m}")]
    NotPrimitive { m: u32, poly: u32 },
}

/// The field GF(2^m) with log/antilog tables over a primitive polynomial.
#[derive(Debug, Clone)]
pub struct GaloisField2m {
    m: u32,
    poly: u32,
    log: Vec<u16>,
    antilog: Vec<u16>,
}

impl GaloisField2m {
    /// Field over the lexicographically smallest primitive polynomial of
    /// degree m (x^3+x+1, x^4+x+1, x^5+x^2+1, ..., x^8+x^4+x^3+x^2+1, ...).
    pub fn new(m: u32) -> Result<Self, GaloisError> {
        if !(2..=16).contains(&m) {
            return Err(GaloisError::DegreeOutOfRange(m));
        }
        // Constant term must be 1, otherwise x is a zero divisor.
        let base = 1u32 << m;
        for low in (1..base).step_by(2) {
            if let Ok(field) = Self::with_polynomial(m, base | low) {
                return Ok(field);
            }
        }
        unreachable!("a primitive polynomial exists for every m");
    }

    /// Field over an explicit polynomial (bitmask including the x^m term).
    pub fn with_polynomial(m: u32, poly: u32) -> Result<Self, GaloisError> {
        if !(2..=16).contains(&m) {
            return Err(GaloisError::DegreeOutOfRange(m));
        }
        let order = (1usize << m) - 1;
        let mut antilog = vec![0u16; order];
        let mut log = vec![0u16; 1 << m];
        let mut cur: u32 = 1;
        for (i, slot) in antilog.iter_mut().enumerate() {
            *slot = cur as u16;
            log[cur as usize] = i as u16;
            cur <<= 1;
            if cur & (1 << m) != 0 {
                cur ^= poly;
            }
            // Returning to 1 early means ord(x) < 2^m - 1.
            if cur == 1 && i + 1 < order {
                return Err(GaloisError::NotPrimitive { m, poly });
            }
        }
        if cur != 1 {
            return Err(GaloisError::NotPrimitive { m, poly });
        }
        Ok(Self {
            m,
            poly,
            log,
            antilog,
        })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn polynomial(&self) -> u32 {
        self.poly
    }

    /// Order of the multiplicative group, 2^m - 1.
    pub fn order(&self) -> usize {
        (1 << self.m) - 1
    }

    /// Product in GF(2^m) by carry-less multiplication with reduction; the
    /// log/antilog tables provide an independent check in tests.
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        debug_assert!((a as u32) < (1 << self.m) && (b as u32) < (1 << self.m));
        let mut a = a as u32;
        let mut b = b as u32;
        let mut acc = 0u32;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & (1 << self.m) != 0 {
                a ^= self.poly;
            }
        }
        acc as u16
    }

    /// alpha^i with the exponent reduced modulo 2^m - 1.
    pub fn alpha_pow(&self, i: u64) -> u16 {
        self.antilog[(i % self.order() as u64) as usize]
    }

    /// Discrete log base alpha; zero has no logarithm.
    pub fn log(&self, a: u16) -> u16 {
        assert!(a != 0, "log of zero");
        self.log[a as usize]
    }

    /// Product via the log/antilog tables (test oracle route).
    pub fn mul_via_tables(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.antilog[(self.log(a) as usize + self.log(b) as usize) % self.order()]
    }
}
