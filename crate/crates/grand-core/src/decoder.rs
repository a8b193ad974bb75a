//! GRAND query loop with syndrome check, soft output, and the
//! syndrome-assisted dynamic-list variants.
//!
//! All three decoders share one loop: guesses come from the logistic-weight
//! pattern stream, every guess updates the accumulated noise probability
//! before its syndrome check, and a guess whose syndrome is all-zero is
//! returned immediately. The list-extension variants additionally match the
//! syndrome against the columns of H; a match at position p makes
//! `guess XOR e_p` a valid codeword, which joins the dynamic list unless
//! already present. SyGRAND stops once the estimated probability that the
//! correct codeword is missing from the list falls below theta or the list
//! is full; the fixed-budget baseline stops on query count or list size
//! alone.

use std::collections::HashSet;

use crate::bits::BitVector;
use crate::channel::{self, LlrVector};
use crate::code::LinearCode;
use crate::pattern::{rank_reliabilities, required_pattern_parity, ParityFilter, PatternStream, ReliabilityRanking};

/// Default query budget; decoding is abandoned beyond it.
pub const DEFAULT_MAX_QUERIES: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoderVariant {
    /// Plain ORBGRAND: first syndrome-zero guess wins.
    OrbGrand,
    /// Dynamic-list decoding terminated by the soft-output estimate.
    /// theta = 0 disables the soft-output termination (list-size and budget
    /// limits still apply).
    SyGrand { theta: f64, l_max: usize },
    /// Fixed-budget baseline: same candidate discovery as SyGrand, stops on
    /// query count t_budget or list size c_max only.
    Ordept { t_budget: u64, c_max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    pub variant: DecoderVariant,
    pub max_queries: u64,
    pub use_parity_constraint: bool,
}

impl DecoderConfig {
    pub fn orbgrand() -> Self {
        Self {
            variant: DecoderVariant::OrbGrand,
            max_queries: DEFAULT_MAX_QUERIES,
            use_parity_constraint: true,
        }
    }

    pub fn sygrand(theta: f64, l_max: usize) -> Self {
        assert!((0.0..=1.0).contains(&theta), "theta {theta} outside [0, 1]");
        assert!(l_max >= 1, "l_max must be at least 1");
        Self {
            variant: DecoderVariant::SyGrand { theta, l_max },
            max_queries: DEFAULT_MAX_QUERIES,
            use_parity_constraint: true,
        }
    }

    pub fn ordept(t_budget: u64, c_max: usize) -> Self {
        assert!(t_budget >= 1, "t_budget must be at least 1");
        assert!(c_max >= 1, "c_max must be at least 1");
        Self {
            variant: DecoderVariant::Ordept { t_budget, c_max },
            max_queries: DEFAULT_MAX_QUERIES,
            use_parity_constraint: true,
        }
    }

    pub fn with_max_queries(mut self, max_queries: u64) -> Self {
        assert!(max_queries >= 1, "max_queries must be at least 1");
        self.max_queries = max_queries;
        self
    }

    pub fn with_parity_constraint(mut self, on: bool) -> Self {
        self.use_parity_constraint = on;
        self
    }

    pub fn name(&self) -> &'static str {
        match self.variant {
            DecoderVariant::OrbGrand => "orbgrand",
            DecoderVariant::SyGrand { .. } => "sygrand",
            DecoderVariant::Ordept { .. } => "ordept",
        }
    }

    /// Compact parameter string for reports; semicolon-separated so it stays
    /// a single CSV field.
    pub fn params_string(&self) -> String {
        let mut s = match self.variant {
            DecoderVariant::OrbGrand => String::new(),
            DecoderVariant::SyGrand { theta, l_max } => format!("theta={theta};lmax={l_max}"),
            DecoderVariant::Ordept { t_budget, c_max } => format!("t={t_budget};cmax={c_max}"),
        };
        if !self.use_parity_constraint {
            if !s.is_empty() {
                s.push(';');
            }
            s.push_str("noparity");
        }
        s
    }
}

/// Compensated (Kahan) accumulator for the probability sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ListEntry {
    pub codeword: BitVector,
    pub log_likelihood: f64,
    pub found_at_query: u64,
}

/// Dynamic candidate list with duplicate suppression (bit-flip candidates
/// can be rediscovered) and the accumulated list probability.
#[derive(Debug, Clone, Default)]
pub struct CandidateList {
    entries: Vec<ListEntry>,
    members: HashSet<BitVector>,
    p_list: KahanSum,
}

impl CandidateList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, w: &BitVector) -> bool {
        self.members.contains(w)
    }

    /// Appends a candidate; returns false when it was already present.
    pub fn insert(&mut self, codeword: BitVector, log_likelihood: f64, found_at_query: u64) -> bool {
        if !self.members.insert(codeword.clone()) {
            return false;
        }
        self.p_list.add(log_likelihood.exp());
        self.entries.push(ListEntry {
            codeword,
            log_likelihood,
            found_at_query,
        });
        true
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ListEntry] {
        &self.entries
    }

    /// Accumulated probability mass of the list entries.
    pub fn p_list(&self) -> f64 {
        self.p_list.value()
    }

    fn into_entries(self) -> Vec<ListEntry> {
        self.entries
    }
}

/// Most likely list entry; ties go to the earliest discovery.
pub fn select_best(list: &CandidateList) -> &ListEntry {
    let entries = list.entries();
    assert!(!entries.is_empty(), "select_best on an empty list");
    let mut best = &entries[0];
    for e in &entries[1..] {
        if e.log_likelihood > best.log_likelihood {
            best = e;
        }
    }
    best
}

/// Estimated probability that the correct codeword is not in the list, from
/// the accumulated guess probability `p_noise` and list probability
/// `p_list`, with A = 2^(k-n):
///
///   A (1 - mass) / (p_list + A (1 - mass))
///
/// where mass = p_noise + p_list when `include_list_in_noise` (list entries
/// found by bit flips were never guessed as noise patterns) and
/// mass = p_noise otherwise (the plain soft-output form, where list entries
/// were themselves guesses). Inputs are clamped to [0, 1].
pub fn p_not_in_list(p_noise: f64, p_list: f64, n: usize, k: usize, include_list_in_noise: bool) -> f64 {
    let p_noise = p_noise.clamp(0.0, 1.0);
    let p_list = p_list.clamp(0.0, 1.0);
    if p_list == 0.0 {
        return 1.0;
    }
    let mass = if include_list_in_noise {
        (p_noise + p_list).min(1.0)
    } else {
        p_noise
    };
    let a = ((k as f64) - (n as f64)).exp2();
    let t = a * (1.0 - mass);
    t / (p_list + t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    /// A guess itself had zero syndrome and was returned directly.
    CodewordHit,
    /// The soft-output estimate crossed theta (or the budget ran out with a
    /// nonempty list; see `terminated_by_budget`).
    ListTerminated,
    /// The list reached its size cap.
    ListFull,
    /// Budget exhausted with nothing found; the hard decision is returned.
    Abandoned,
}

impl DecodeStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecodeStatus::CodewordHit => "codeword_hit",
            DecodeStatus::ListTerminated => "list_terminated",
            DecodeStatus::ListFull => "list_full",
            DecodeStatus::Abandoned => "abandoned",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    pub codeword: BitVector,
    /// Guesswork: queries until a decoding was returned or abandoned.
    pub queries: u64,
    pub status: DecodeStatus,
    /// Final candidate list (a direct hit is included).
    pub list: Vec<ListEntry>,
    /// Estimated probability that the correct codeword is not in the list.
    /// On even-weight codes this is computed against the even-parity class
    /// (see `class_missing_estimate`); elsewhere it is `p_not_in_list`.
    pub p_not_in_list: Option<f64>,
    pub queries_to_first_candidate: Option<u64>,
    /// Accumulated probability of all guesses made.
    pub p_noise: f64,
    /// True when the loop ended on the query budget (or pattern exhaustion)
    /// rather than a decoder rule.
    pub terminated_by_budget: bool,
    /// Soft-output evaluations whose inputs exceeded 1 and were clamped.
    pub clamp_events: u32,
}

impl DecodeOutcome {
    pub fn list_size(&self) -> usize {
        self.list.len()
    }
}

/// Which parity class of guesses a decoder should spend queries on when the
/// constraint is enabled on an even-weight code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum QueryClass {
    /// Even-parity guesses: the class containing the codewords. Plain
    /// GRAND's direct syndrome check can only succeed here.
    Codeword,
    /// Odd-parity guesses: one flip away from the codeword class, the only
    /// class where the column match (and so candidate discovery) can fire.
    CandidateShell,
    /// Both classes; the fixed-budget baseline needs direct hits to
    /// terminate early and candidates to build its list.
    Both,
}

struct Policy {
    extension: bool,
    theta: Option<f64>,
    list_cap: usize,
    budget: u64,
    query_class: QueryClass,
}

/// Decodes with the variant selected by the config.
pub fn decode(code: &LinearCode, llr: &LlrVector, cfg: &DecoderConfig) -> DecodeOutcome {
    match cfg.variant {
        DecoderVariant::OrbGrand => grand_decode(code, llr, cfg),
        DecoderVariant::SyGrand { .. } => sygrand_decode(code, llr, cfg),
        DecoderVariant::Ordept { .. } => ordept_decode(code, llr, cfg),
    }
}

/// Plain ORBGRAND: returns the first guess whose syndrome is zero, with the
/// soft-output estimate for the single-entry list.
pub fn grand_decode(code: &LinearCode, llr: &LlrVector, cfg: &DecoderConfig) -> DecodeOutcome {
    assert!(matches!(cfg.variant, DecoderVariant::OrbGrand), "config variant mismatch");
    run(
        code,
        llr,
        cfg,
        Policy {
            extension: false,
            theta: None,
            list_cap: usize::MAX,
            budget: cfg.max_queries,
            query_class: QueryClass::Codeword,
        },
    )
}

/// Syndrome-assisted dynamic-list decoding with soft-output termination.
pub fn sygrand_decode(code: &LinearCode, llr: &LlrVector, cfg: &DecoderConfig) -> DecodeOutcome {
    let DecoderVariant::SyGrand { theta, l_max } = cfg.variant else {
        panic!("config variant mismatch");
    };
    run(
        code,
        llr,
        cfg,
        Policy {
            extension: true,
            // theta = 0 means no soft-output termination
            theta: (theta > 0.0).then_some(theta),
            list_cap: l_max,
            budget: cfg.max_queries,
            query_class: QueryClass::CandidateShell,
        },
    )
}

/// Fixed-budget baseline: identical candidate discovery, termination on
/// query budget or list size only.
pub fn ordept_decode(code: &LinearCode, llr: &LlrVector, cfg: &DecoderConfig) -> DecodeOutcome {
    let DecoderVariant::Ordept { t_budget, c_max } = cfg.variant else {
        panic!("config variant mismatch");
    };
    run(
        code,
        llr,
        cfg,
        Policy {
            extension: true,
            theta: None,
            list_cap: c_max,
            budget: t_budget.min(cfg.max_queries),
            query_class: QueryClass::Both,
        },
    )
}

fn materialize(y_hd: &BitVector, ranks: &[u32], ranking: &ReliabilityRanking) -> BitVector {
    let mut y = y_hd.clone();
    for &r in ranks {
        y.flip(ranking.position(r));
    }
    y
}

/// Pattern filter realizing the decoder's query class. On an even-weight
/// code the all-ones vector lies in the dual, so an even-parity guess's
/// syndrome can never equal a column of H and an odd-parity guess can never
/// be a codeword; restricting each decoder to the class it can use skips
/// provably useless queries.
fn query_filter(
    code: &LinearCode,
    y_hd: &BitVector,
    cfg: &DecoderConfig,
    class: QueryClass,
) -> ParityFilter {
    if !cfg.use_parity_constraint || class == QueryClass::Both {
        return ParityFilter::None;
    }
    let codeword_class = required_pattern_parity(code.even_weight(), y_hd);
    match (class, codeword_class) {
        (QueryClass::Codeword, f) => f,
        (_, ParityFilter::None) => ParityFilter::None,
        (QueryClass::CandidateShell, ParityFilter::EvenOnly) => ParityFilter::OddOnly,
        (QueryClass::CandidateShell, ParityFilter::OddOnly) => ParityFilter::EvenOnly,
        (QueryClass::Both, _) => unreachable!(),
    }
}

#[inline]
fn note_clamp(counter: &mut u32, total_mass: f64) {
    if total_mass > 1.0 + 1e-9 {
        *counter += 1;
    }
}

/// Reported list-error estimate for even-weight codes. All codewords live
/// in the even-parity class, where their density is 2^(k-n+1), so the mass
/// of codewords not yet seen is that density times the unexplored class
/// mass. `explored` counts every even-parity guess plus, under candidate
/// search, the even neighbors that each odd-parity guess implicitly checks;
/// the plain formula's 1 - P_noise would count the codeword-free odd class
/// as codeword-bearing and turn sharply pessimistic under parity-restricted
/// querying.
fn class_missing_estimate(
    class_mass: f64,
    explored: f64,
    p_list_total: f64,
    n: usize,
    k: usize,
) -> f64 {
    if p_list_total <= 0.0 {
        return 1.0;
    }
    let density = ((k + 1) as f64 - n as f64).exp2();
    let missing = density * (class_mass - explored).max(0.0);
    missing / (p_list_total + missing)
}

fn run(code: &LinearCode, llr: &LlrVector, cfg: &DecoderConfig, policy: Policy) -> DecodeOutcome {
    let n = code.n();
    let k = code.k();
    assert_eq!(llr.len(), n, "LLR vector length {} != code length {n}", llr.len());

    let y_hd = channel::hard_decision(llr);
    let filter = query_filter(code, &y_hd, cfg, policy.query_class);
    let ranking = rank_reliabilities(llr);
    // |LLR| by rank: flipping the bit at rank r scales the sequence
    // likelihood by exp(-sorted_abs[r-1]) relative to the hard decision.
    let sorted_abs: Vec<f64> = ranking
        .positions()
        .iter()
        .map(|&p| llr.get(p as usize).abs())
        .collect();
    let base_ll = channel::hard_decision_log_likelihood(llr);
    let s_hd = code.syndrome(&y_hd);
    let mut s_buf = vec![0u64; code.syndrome_words()];

    // class-mass bookkeeping for the reported estimate on even-weight codes
    let class_report = code.even_weight();
    let class_mass = if class_report {
        channel::even_parity_mass(llr)
    } else {
        0.0
    };
    // flipping the bit at rank r+1 scales a guess's likelihood by
    // exp(-+ sorted_abs[r]); neighbor_gain[r] is the net sphere contribution
    let neighbor_base: f64 = if class_report && policy.extension {
        sorted_abs.iter().map(|a| (-a).exp()).sum()
    } else {
        0.0
    };
    let neighbor_gain: Vec<f64> = if class_report && policy.extension {
        sorted_abs.iter().map(|a| a.exp() - (-a).exp()).collect()
    } else {
        Vec::new()
    };
    let y_hd_odd = y_hd.parity();
    let mut explored_class = KahanSum::default();

    let mut stream = PatternStream::new(ranking, filter);
    let mut p_noise = KahanSum::default();
    let mut list = CandidateList::new();
    let mut last_p_hat: Option<f64> = None;
    let mut first_candidate_q: Option<u64> = None;
    let mut clamp_events = 0u32;
    let mut queries = 0u64;
    let mut rule_status: Option<DecodeStatus> = None;

    'outer: while queries < policy.budget {
        if !stream.advance() {
            break; // every pattern has been tried
        }
        queries += 1;
        let ranks = stream.current_ranks();
        let ranking = stream.ranking();

        let mut ll = base_ll;
        for &r in ranks {
            ll -= sorted_abs[(r - 1) as usize];
        }
        let p_guess = ll.exp();
        // noise probability accumulates before the syndrome check
        p_noise.add(p_guess);
        debug_assert!(p_noise.value() <= 1.0 + 1e-9, "guess probabilities exceeded 1");

        if class_report && p_guess > 0.0 {
            let guess_odd = y_hd_odd ^ (ranks.len() % 2 == 1);
            if !guess_odd {
                explored_class.add(p_guess);
            } else if policy.extension {
                let mut sphere = neighbor_base;
                for &r in ranks {
                    sphere += neighbor_gain[(r - 1) as usize];
                }
                explored_class.add(p_guess * sphere);
            }
        }

        s_buf.copy_from_slice(s_hd.words());
        for &r in ranks {
            let col = code.column_syndrome(ranking.position(r));
            for (b, c) in s_buf.iter_mut().zip(col) {
                *b ^= c;
            }
        }

        if s_buf.iter().all(|&w| w == 0) {
            let y = materialize(&y_hd, ranks, ranking);
            debug_assert!(code.is_codeword(&y));
            let p_hit = p_guess;
            let p_hat = if class_report {
                class_missing_estimate(class_mass, explored_class.value(), list.p_list() + p_hit, n, k)
            } else if policy.extension {
                // the hit was itself a guess: move its mass from the noise
                // total to the list before evaluating the soft output
                note_clamp(&mut clamp_events, p_noise.value() + list.p_list());
                p_not_in_list(p_noise.value() - p_hit, list.p_list() + p_hit, n, k, true)
            } else {
                note_clamp(&mut clamp_events, p_noise.value());
                p_not_in_list(p_noise.value(), p_hit, n, k, false)
            };
            let first_q = first_candidate_q.unwrap_or(queries);
            let mut final_list = list.into_entries();
            final_list.push(ListEntry {
                codeword: y.clone(),
                log_likelihood: ll,
                found_at_query: queries,
            });
            return DecodeOutcome {
                codeword: y,
                queries,
                status: DecodeStatus::CodewordHit,
                list: final_list,
                p_not_in_list: Some(p_hat),
                queries_to_first_candidate: Some(first_q),
                p_noise: p_noise.value(),
                terminated_by_budget: false,
                clamp_events,
            };
        }

        if policy.extension {
            // ascending positions whose H column equals the syndrome
            for &pos in code.matching_columns(&s_buf) {
                let pos = pos as usize;
                let mut w_hat = materialize(&y_hd, ranks, ranking);
                w_hat.flip(pos);
                if list.contains(&w_hat) {
                    continue;
                }
                debug_assert!(code.is_codeword(&w_hat), "bit-flip candidate failed a parity check");
                let rank_pos = ranking.rank_of(pos);
                let delta = sorted_abs[(rank_pos - 1) as usize];
                // flipping pos either restores the hard decision there
                // (pos was in the pattern) or moves one bit further away
                let ll_w = if ranks.contains(&rank_pos) {
                    ll + delta
                } else {
                    ll - delta
                };
                debug_assert!(
                    (ll_w - channel::sequence_log_likelihood(&w_hat, llr)).abs()
                        <= 1e-7 * (1.0 + ll_w.abs()),
                    "incremental log-likelihood diverged from direct evaluation"
                );
                first_candidate_q.get_or_insert(queries);
                list.insert(w_hat, ll_w, queries);
                note_clamp(&mut clamp_events, p_noise.value() + list.p_list());
                // the termination rule stays on the plain soft-output form
                let p_term = p_not_in_list(p_noise.value(), list.p_list(), n, k, true);
                last_p_hat = Some(if class_report {
                    class_missing_estimate(class_mass, explored_class.value(), list.p_list(), n, k)
                } else {
                    p_term
                });
                if let Some(theta) = policy.theta {
                    if p_term <= theta {
                        rule_status = Some(DecodeStatus::ListTerminated);
                        break 'outer;
                    }
                }
                if list.len() >= policy.list_cap {
                    rule_status = Some(DecodeStatus::ListFull);
                    break 'outer;
                }
            }
        }
    }

    let terminated_by_budget = rule_status.is_none();
    let (codeword, status) = if let Some(status) = rule_status {
        (select_best(&list).codeword.clone(), status)
    } else if !list.is_empty() {
        (select_best(&list).codeword.clone(), DecodeStatus::ListTerminated)
    } else {
        (y_hd.clone(), DecodeStatus::Abandoned)
    };
    let p_hat = last_p_hat.unwrap_or_else(|| {
        if class_report {
            class_missing_estimate(class_mass, explored_class.value(), list.p_list(), n, k)
        } else {
            p_not_in_list(p_noise.value(), list.p_list(), n, k, policy.extension)
        }
    });
    DecodeOutcome {
        codeword,
        queries,
        status,
        list: list.into_entries(),
        p_not_in_list: Some(p_hat),
        queries_to_first_candidate: first_candidate_q,
        p_noise: p_noise.value(),
        terminated_by_budget,
        clamp_events,
    }
}
