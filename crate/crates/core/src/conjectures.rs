//! Decision procedures for the 1/3-2/3 conjecture and the gold partition
//! conjecture, the optimal sorting cost `C(P)`, and the bound
//! `C(P) <= log_phi e(P)`.
//!
//! A gold partition witness is a first comparison `(a, b)` and, for each of its
//! two results, a second comparison, such that `t0 >= t1 + t2` where `t0 = e(P)`,
//! `t1` counts the extensions left after the first result and `t2` is the
//! larger count left after the second comparison. When the first result already
//! leaves a chain, no second comparison is needed and `t2` takes the value
//! selected by [`ChainBranch`].

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::canon::{canonical_key, CanonicalKey};
use crate::error::{PosetError, Result};
use crate::linext::{self, count_extensions, BalancedPair, Count, Delta};
use crate::poset::Poset;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// The second comparison may depend on the first result.
    #[default]
    Adaptive,
    /// One second comparison serves both results.
    NonAdaptive,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Inequality {
    /// `t0 >= t1 + t2`.
    #[default]
    NonStrict,
    /// `t0 > t1 + t2`.
    Strict,
}

impl Inequality {
    fn holds(self, t0: &Count, t1: &Count, t2: &Count) -> bool {
        let rhs = t1 + t2;
        match self {
            Inequality::NonStrict => *t0 >= rhs,
            Inequality::Strict => *t0 > rhs,
        }
    }
}

/// Value of `t2` when the first result already leaves a chain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum ChainBranch {
    #[default]
    Zero,
    /// The single remaining extension.
    One,
}

impl ChainBranch {
    fn value(self) -> Count {
        match self {
            ChainBranch::Zero => Count::zero(),
            ChainBranch::One => Count::one(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GpcOptions {
    pub mode: Mode,
    pub inequality: Inequality,
    pub chain_branch: ChainBranch,
}

/// One result of the first comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GpcBranch {
    /// The first comparison's result, as `(lo, hi)` meaning `lo < hi`.
    pub result: (usize, usize),
    #[serde(serialize_with = "crate::linext::decimal::serialize")]
    pub t1: Count,
    /// `None` when no second comparison is made: the branch is a chain, or
    /// (for lifted witnesses) the comparison is forced.
    pub second: Option<(usize, usize)>,
    #[serde(serialize_with = "crate::linext::decimal::serialize")]
    pub t2: Count,
}

impl GpcBranch {
    /// Extensions left, in the worst case, once both comparisons are made.
    /// Differs from `t2` only on chain branches under [`ChainBranch::Zero`].
    pub fn remaining(&self) -> Count {
        match self.second {
            Some(_) => self.t2.clone(),
            None => self.t1.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GpcWitness {
    pub first: (usize, usize),
    #[serde(serialize_with = "crate::linext::decimal::serialize")]
    pub t0: Count,
    /// Results `first.0 < first.1`, then `first.1 < first.0`.
    pub branches: Vec<GpcBranch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GpcFailure {
    #[serde(serialize_with = "crate::linext::decimal::serialize")]
    pub t0: Count,
    pub pairs_tried: usize,
    pub delta: Delta,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GpcVerdict {
    Witness(GpcWitness),
    Failure(GpcFailure),
}

impl GpcVerdict {
    pub fn witness(&self) -> Option<&GpcWitness> {
        match self {
            GpcVerdict::Witness(w) => Some(w),
            GpcVerdict::Failure(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OneThirdVerdict {
    Balanced(BalancedPair),
    /// No pair with probability in `[1/3, 2/3]`; carries the full delta report.
    Failure(Delta),
}

pub fn check_one_third(p: &Poset) -> Result<OneThirdVerdict> {
    let counts = linext::pair_counts(p);
    match linext::balanced_pair_from_counts(p, &counts)? {
        Some(b) => Ok(OneThirdVerdict::Balanced(b)),
        None => Ok(OneThirdVerdict::Failure(linext::delta_from_counts(
            p, &counts,
        )?)),
    }
}

/// `t2` for a second comparison `(c, d)` on `branch`, which has `t1` extensions.
fn second_t2(branch: &Poset, t1: &Count, c: usize, d: usize) -> Count {
    if branch.comparable(c, d) {
        return t1.clone();
    }
    let low = count_extensions(&branch.with_relation_unchecked(c, d));
    let high = t1 - &low;
    low.max(high)
}

/// Searches first pairs in index order; returns the first witness found.
pub fn check_gpc(p: &Poset, opts: GpcOptions) -> Result<GpcVerdict> {
    let pairs = p.incomparable_pairs();
    if pairs.is_empty() {
        return Err(PosetError::Chain);
    }
    let t0 = count_extensions(p);
    for &(a, b) in &pairs {
        let found = match opts.mode {
            Mode::Adaptive => adaptive_for_first(p, &t0, a, b, opts),
            Mode::NonAdaptive => nonadaptive_for_first(p, &pairs, &t0, a, b, opts),
        };
        if let Some(branches) = found {
            return Ok(GpcVerdict::Witness(GpcWitness {
                first: (a, b),
                t0,
                branches,
            }));
        }
    }
    Ok(GpcVerdict::Failure(GpcFailure {
        t0,
        pairs_tried: pairs.len(),
        delta: linext::delta(p)?,
    }))
}

fn adaptive_for_first(
    p: &Poset,
    t0: &Count,
    a: usize,
    b: usize,
    opts: GpcOptions,
) -> Option<Vec<GpcBranch>> {
    let mut branches = Vec::with_capacity(2);
    for (lo, hi) in [(a, b), (b, a)] {
        let branch = p.with_relation_unchecked(lo, hi);
        let t1 = count_extensions(&branch);
        if branch.is_chain() {
            let t2 = opts.chain_branch.value();
            if !opts.inequality.holds(t0, &t1, &t2) {
                return None;
            }
            branches.push(GpcBranch {
                result: (lo, hi),
                t1,
                second: None,
                t2,
            });
            continue;
        }
        let second = branch.incomparable_pairs().into_iter().find_map(|(c, d)| {
            let t2 = second_t2(&branch, &t1, c, d);
            opts.inequality.holds(t0, &t1, &t2).then_some(((c, d), t2))
        })?;
        branches.push(GpcBranch {
            result: (lo, hi),
            t1,
            second: Some(second.0),
            t2: second.1,
        });
    }
    Some(branches)
}

fn nonadaptive_for_first(
    p: &Poset,
    pairs: &[(usize, usize)],
    t0: &Count,
    a: usize,
    b: usize,
    opts: GpcOptions,
) -> Option<Vec<GpcBranch>> {
    let outcomes: Vec<(usize, usize, Poset, Count)> = [(a, b), (b, a)]
        .into_iter()
        .map(|(lo, hi)| {
            let branch = p.with_relation_unchecked(lo, hi);
            let t1 = count_extensions(&branch);
            (lo, hi, branch, t1)
        })
        .collect();
    // With both branches chains, no second comparison is needed at all.
    let candidates: Vec<Option<(usize, usize)>> = if outcomes.iter().all(|o| o.2.is_chain()) {
        vec![None]
    } else {
        pairs
            .iter()
            .filter(|&&pair| pair != (a, b))
            .map(|&pair| Some(pair))
            .collect()
    };
    'candidates: for second in candidates {
        let mut branches = Vec::with_capacity(2);
        for (lo, hi, branch, t1) in &outcomes {
            let (second_used, t2) = if branch.is_chain() {
                (None, opts.chain_branch.value())
            } else {
                let (c, d) = second.expect("non-chain branch has candidates");
                (Some((c, d)), second_t2(branch, t1, c, d))
            };
            if !opts.inequality.holds(t0, t1, &t2) {
                continue 'candidates;
            }
            branches.push(GpcBranch {
                result: (*lo, *hi),
                t1: t1.clone(),
                second: second_used,
                t2,
            });
        }
        return Some(branches);
    }
    None
}

/// Recomputes every count of `w` on `p` and checks the inequality per branch.
pub fn verify_witness(p: &Poset, w: &GpcWitness, opts: GpcOptions) -> Result<()> {
    let invalid = |msg: String| Err(PosetError::InvalidWitness(msg));
    let (a, b) = w.first;
    if a >= p.len() || b >= p.len() || p.comparable(a, b) {
        return invalid(format!("first pair ({a}, {b}) is not an incomparable pair"));
    }
    let t0 = count_extensions(p);
    if t0 != w.t0 {
        return invalid(format!("t0 is {t0}, witness says {}", w.t0));
    }
    if w.branches.len() != 2 || w.branches[0].result != (a, b) || w.branches[1].result != (b, a) {
        return invalid("branches must cover both results of the first comparison".into());
    }
    if opts.mode == Mode::NonAdaptive {
        let seconds: Vec<(usize, usize)> = w.branches.iter().filter_map(|br| br.second).collect();
        if seconds.windows(2).any(|s| s[0] != s[1]) {
            return invalid("non-adaptive witness uses two different second comparisons".into());
        }
    }
    let mut t1_sum = Count::zero();
    for br in &w.branches {
        let branch = p.with_relation_unchecked(br.result.0, br.result.1);
        let t1 = count_extensions(&branch);
        if t1 != br.t1 {
            return invalid(format!(
                "t1 for {:?} is {t1}, witness says {}",
                br.result, br.t1
            ));
        }
        let t2 = match br.second {
            Some((c, d)) => {
                if c >= p.len() || d >= p.len() || c == d {
                    return invalid(format!("bad second pair ({c}, {d})"));
                }
                second_t2(&branch, &t1, c, d)
            }
            None if branch.is_chain() => opts.chain_branch.value(),
            // A forced comparison leaves every extension.
            None => t1.clone(),
        };
        if t2 != br.t2 {
            return invalid(format!(
                "t2 for {:?} is {t2}, witness says {}",
                br.result, br.t2
            ));
        }
        if !opts.inequality.holds(&t0, &t1, &t2) {
            return invalid(format!("{t0} vs {t1} + {t2} fails for {:?}", br.result));
        }
        t1_sum += t1;
    }
    if t1_sum != t0 {
        return invalid(format!("t1 values sum to {t1_sum}, not {t0}"));
    }
    Ok(())
}

/// Largest poset for which the comparison game tree is searched.
pub const SORT_COST_CAP: usize = 8;

/// `ceil(log2 e)`, the information-theoretic lower bound on comparisons.
pub fn information_bound(e: &Count) -> u32 {
    if e.is_zero() {
        0
    } else {
        (e - 1u32).bits() as u32
    }
}

/// Minimax comparison counts, memoized on isomorphism class.
#[derive(Default, Debug)]
pub struct SortCostSolver {
    memo: HashMap<CanonicalKey, u32>,
}

impl SortCostSolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// `C(P)`: fewest comparisons that always suffice to sort `P`.
    pub fn sort_cost(&mut self, p: &Poset) -> Result<u32> {
        if p.len() > SORT_COST_CAP {
            return Err(PosetError::SizeCap {
                n: p.len(),
                cap: SORT_COST_CAP,
            });
        }
        Ok(self.solve(p))
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn solve(&mut self, p: &Poset) -> u32 {
        let pairs = p.incomparable_pairs();
        if pairs.is_empty() {
            return 0;
        }
        let key = canonical_key(p).expect("size checked against the cap");
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let bound = small_bound(p);
        let mut best = u32::MAX;
        for (a, b) in pairs {
            let below = p.with_relation_unchecked(a, b);
            let above = p.with_relation_unchecked(b, a);
            let child_bound = small_bound(&below).max(small_bound(&above));
            if 1 + child_bound >= best {
                continue;
            }
            let first = self.solve(&below);
            if 1 + first >= best {
                continue;
            }
            let second = self.solve(&above);
            best = best.min(1 + first.max(second));
            if best == bound {
                break;
            }
        }
        self.memo.insert(key, best);
        best
    }
}

fn small_bound(p: &Poset) -> u32 {
    let e = linext::count_small(p).expect("sort cost posets are small");
    if e <= 1 {
        0
    } else {
        u128::BITS - (e - 1).leading_zeros()
    }
}

pub fn sort_cost(p: &Poset) -> Result<u32> {
    SortCostSolver::new().sort_cost(p)
}

/// Fibonacci pair `(F(c), F(c-1))` with `F(-1) = 1`, `F(0) = 0`, `F(1) = 1`.
fn fibonacci_pair(c: u32) -> (BigUint, BigUint) {
    let (mut cur, mut prev) = (BigUint::zero(), BigUint::one());
    for _ in 0..c {
        let next = &cur + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    (cur, prev)
}

/// Exact test of `phi^c <= e`, using `phi^c = F(c) phi + F(c-1)`:
/// with `L = 2e - 2F(c-1) - F(c)`, it holds iff `L >= 0` and `L^2 >= 5 F(c)^2`.
pub fn golden_power_at_most(c: u32, e: &Count) -> bool {
    let (f, g) = fibonacci_pair(c);
    let f = BigInt::from(f);
    let lhs: BigInt = BigInt::from(e.clone()) * 2u32 - BigInt::from(g) * 2u32 - &f;
    !lhs.is_negative() && &lhs * &lhs >= &f * &f * 5u32
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldBound {
    pub sort_cost: u32,
    #[serde(serialize_with = "crate::linext::decimal::serialize")]
    pub extensions: Count,
    pub holds: bool,
}

/// `C(P) <= log_phi e(P)`, decided exactly.
pub fn gold_bound(p: &Poset, solver: &mut SortCostSolver) -> Result<GoldBound> {
    let sort_cost = solver.sort_cost(p)?;
    let extensions = count_extensions(p);
    let holds = golden_power_at_most(sort_cost, &extensions);
    Ok(GoldBound {
        sort_cost,
        extensions,
        holds,
    })
}

pub fn gold_bound_holds(p: &Poset) -> Result<bool> {
    Ok(gold_bound(p, &mut SortCostSolver::new())?.holds)
}
