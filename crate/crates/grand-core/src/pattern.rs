//! Noise-effect pattern stream in nondecreasing logistic weight (1-line
//! ORBGRAND order), with an optional pattern-weight parity constraint.
//!
//! The logistic weight of a pattern is the sum of the reliability ranks
//! (1 = least reliable) of its flipped positions. The canonical order is:
//! weight ascending from 0; within a weight, subsets of distinct ranks by
//! increasing cardinality, then lexicographically ascending on the sorted
//! rank list. Rank subsets are realized as partitions of the weight into
//! distinct parts, advanced in place without recursion.

use crate::bits::BitVector;
use crate::channel::LlrVector;

/// Positions ordered by ascending |LLR|; ties break on ascending position,
/// so the ranking is a deterministic function of the LLR vector.
#[derive(Debug, Clone)]
pub struct ReliabilityRanking {
    /// perm[r] = bit position holding rank r+1.
    perm: Vec<u32>,
    /// inv[pos] = 0-based rank of bit position pos.
    inv: Vec<u32>,
}

impl ReliabilityRanking {
    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Bit position holding the given 1-based rank.
    #[inline]
    pub fn position(&self, rank: u32) -> usize {
        self.perm[(rank - 1) as usize] as usize
    }

    /// 1-based rank of a bit position.
    #[inline]
    pub fn rank_of(&self, pos: usize) -> u32 {
        self.inv[pos] + 1
    }

    /// Positions in rank order, least reliable first.
    pub fn positions(&self) -> &[u32] {
        &self.perm
    }
}

/// Sorts positions by ascending |LLR| with stable position tie-break.
pub fn rank_reliabilities(llr: &LlrVector) -> ReliabilityRanking {
    let n = llr.len();
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.sort_by(|&a, &b| {
        let (ma, mb) = (llr.get(a as usize).abs(), llr.get(b as usize).abs());
        ma.partial_cmp(&mb).unwrap().then(a.cmp(&b))
    });
    let mut inv = vec![0u32; n];
    for (r, &p) in perm.iter().enumerate() {
        inv[p as usize] = r as u32;
    }
    ReliabilityRanking { perm, inv }
}

/// Constraint on the Hamming weight parity of emitted patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityFilter {
    None,
    EvenOnly,
    OddOnly,
}

/// Filter such that codeword guesses y_hd XOR pattern keep even parity on an
/// even-weight code: the pattern weight parity must equal the parity of
/// weight(y_hd). Codes with odd-weight codewords get no filter.
pub fn required_pattern_parity(code_even_weight: bool, y_hd: &BitVector) -> ParityFilter {
    if !code_even_weight {
        ParityFilter::None
    } else if y_hd.parity() {
        ParityFilter::OddOnly
    } else {
        ParityFilter::EvenOnly
    }
}

/// Stateful iterator over rank subsets in the canonical order. Patterns
/// failing the parity filter are never produced (and are not counted).
#[derive(Debug, Clone)]
pub struct PatternStream {
    ranking: ReliabilityRanking,
    filter: ParityFilter,
    n: u64,
    max_weight: u64,
    weight: u64,
    parts: Vec<u32>,
    started: bool,
    exhausted: bool,
    emitted: u64,
}

impl PatternStream {
    pub fn new(ranking: ReliabilityRanking, filter: ParityFilter) -> Self {
        let n = ranking.len() as u64;
        assert!(n >= 1, "pattern stream needs at least one position");
        Self {
            ranking,
            filter,
            n,
            max_weight: n * (n + 1) / 2,
            weight: 0,
            parts: Vec::new(),
            started: false,
            exhausted: false,
            emitted: 0,
        }
    }

    pub fn ranking(&self) -> &ReliabilityRanking {
        &self.ranking
    }

    /// Patterns emitted so far.
    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Logistic weight of the current pattern.
    pub fn current_weight(&self) -> u64 {
        self.weight
    }

    /// Ranks (1-based, ascending) flipped by the current pattern.
    pub fn current_ranks(&self) -> &[u32] {
        &self.parts
    }

    /// Advances to the next pattern; false once the stream is exhausted.
    pub fn advance(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        if !self.started {
            self.started = true;
            // the empty pattern has even weight
            if self.filter != ParityFilter::OddOnly {
                self.emitted += 1;
                return true;
            }
        } else if self.next_same_cardinality() || self.next_cardinality() {
            self.emitted += 1;
            return true;
        }
        // advance the logistic weight
        loop {
            self.weight += 1;
            if self.weight > self.max_weight {
                self.exhausted = true;
                return false;
            }
            let mut c = match self.filter {
                ParityFilter::None | ParityFilter::OddOnly => 1,
                ParityFilter::EvenOnly => 2,
            };
            let step = self.cardinality_step();
            while min_sum(c) <= self.weight {
                if self.fill_from(0, 0, self.weight, 1, c) {
                    self.emitted += 1;
                    return true;
                }
                c += step;
            }
        }
    }

    fn cardinality_step(&self) -> usize {
        if self.filter == ParityFilter::None {
            1
        } else {
            2
        }
    }

    /// Lexicographic successor within the current (weight, cardinality).
    fn next_same_cardinality(&mut self) -> bool {
        let c = self.parts.len();
        if c < 2 {
            return false;
        }
        for i in (0..c - 1).rev() {
            let lo = if i == 0 { 0 } else { self.parts[i - 1] };
            let min_first = self.parts[i] + 1;
            let prefix_sum: u64 = self.parts[..i].iter().map(|&p| p as u64).sum();
            let rem = self.weight - prefix_sum;
            if self.fill_from(i, lo, rem, min_first, c) {
                return true;
            }
        }
        false
    }

    /// First partition at the next feasible cardinality for this weight.
    fn next_cardinality(&mut self) -> bool {
        if self.weight == 0 {
            return false;
        }
        let step = self.cardinality_step();
        let mut c = self.parts.len() + step;
        while min_sum(c) <= self.weight {
            if self.fill_from(0, 0, self.weight, 1, c) {
                return true;
            }
            c += step;
        }
        false
    }

    /// Greedily fills parts[idx..c] with the lexicographically smallest
    /// distinct ascending ranks summing to `rem`, each > `lo`, the first at
    /// least `min_first`, all at most n. The reachable sums of j distinct
    /// ranks in an interval form a contiguous range, so per-position bound
    /// checks suffice. On failure parts[idx..] is left unspecified; callers
    /// only rely on the prefix below idx.
    fn fill_from(&mut self, idx: usize, lo: u32, rem: u64, min_first: u32, c: usize) -> bool {
        let n = self.n;
        self.parts.resize(c, 0);
        let mut lo = lo as u64;
        let mut rem = rem;
        let mut min_next = min_first as u64;
        for slot in idx..c {
            let j = (c - slot - 1) as u64; // parts still to place after this one
            let max_rest = j * n - j.saturating_sub(1) * j / 2;
            let min_rest_budget = j * (j + 1) / 2; // minimum excess over j*a
            if rem < min_rest_budget {
                return false;
            }
            let a_low = (lo + 1).max(min_next).max(rem.saturating_sub(max_rest));
            // rem - a >= j*a + j(j+1)/2  =>  a <= (rem - j(j+1)/2) / (j+1)
            let a_high = ((rem - min_rest_budget) / (j + 1)).min(n - j);
            if a_low > a_high {
                return false;
            }
            self.parts[slot] = a_low as u32;
            rem -= a_low;
            lo = a_low;
            min_next = 0;
        }
        debug_assert_eq!(rem, 0);
        true
    }

    /// Spec-facing iteration: the next pattern as a bit vector over
    /// positions, or None once exhausted.
    pub fn next_pattern(&mut self) -> Option<BitVector> {
        if !self.advance() {
            return None;
        }
        let mut v = BitVector::zeros(self.ranking.len());
        for &r in &self.parts {
            v.set(self.ranking.position(r), true);
        }
        Some(v)
    }
}

#[inline]
fn min_sum(c: usize) -> u64 {
    let c = c as u64;
    c * (c + 1) / 2
}
