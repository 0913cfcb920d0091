//! Linear extensions: exact counting over the lattice of down-sets,
//! enumeration, pairwise order counts, and the balance constant `delta`.
//!
//! A linear extension is a maximal chain `{} = I_0 < I_1 < ... < I_n = P` of
//! down-sets, so `e(P)` is the number of such chains. Counting runs forward
//! from the empty down-set; pair counts combine forward and backward counts:
//! the extensions placing `x` directly after the down-set `J` contribute
//! `fwd(J) * bwd(J + x)`, and `x` precedes `y` in all of them iff `y` is not in `J`.

use std::collections::HashMap;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{PosetError, Result};
use crate::poset::{bit, bits, Mask, Poset};
use crate::ratio::Ratio;

pub type Count = BigUint;

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Largest size whose `n!` fits in `u128`.
const U128_LIMIT: usize = 34;
/// Up to this size the down-set table is a dense array over all masks.
const DENSE_LIMIT: usize = 14;

/// Counts serialize as decimal strings.
pub(crate) mod decimal {
    use num_bigint::BigUint;
    use serde::ser::{SerializeSeq, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn option<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn matrix<S: Serializer>(m: &[Vec<BigUint>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect())
            .collect();
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for r in &rows {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}

/// An order-preserving bijection `P -> [1, n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LinearExtension {
    labels: Vec<usize>,
}

impl LinearExtension {
    /// From the elements listed bottom to top.
    pub fn from_sequence(sequence: &[usize]) -> Self {
        let mut labels = vec![0; sequence.len()];
        for (rank, &e) in sequence.iter().enumerate() {
            labels[e] = rank + 1;
        }
        LinearExtension { labels }
    }

    /// From labels in `1..=n`, one per element. Panics unless a bijection.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let n = labels.len();
        let mut seen = vec![false; n];
        for &l in &labels {
            assert!(
                (1..=n).contains(&l) && !seen[l - 1],
                "labels must be a bijection onto 1..=n"
            );
            seen[l - 1] = true;
        }
        LinearExtension { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, e: usize) -> usize {
        self.labels[e]
    }

    /// Elements listed bottom to top.
    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = vec![0; self.labels.len()];
        for (e, &l) in self.labels.iter().enumerate() {
            seq[l - 1] = e;
        }
        seq
    }

    pub fn precedes(&self, x: usize, y: usize) -> bool {
        self.labels[x] < self.labels[y]
    }

    pub fn is_extension_of(&self, p: &Poset) -> bool {
        self.labels.len() == p.len()
            && p.elements()
                .all(|b| bits(p.below_mask(b)).all(|a| self.labels[a] < self.labels[b]))
    }
}

/// `counts[x][y]` = number of extensions with `x` before `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCountMatrix {
    #[serde(serialize_with = "decimal::matrix")]
    pub counts: Vec<Vec<Count>>,
    #[serde(serialize_with = "crate::linext::decimal::serialize")]
    pub total: Count,
}

impl PairCountMatrix {
    pub fn count(&self, x: usize, y: usize) -> &Count {
        &self.counts[x][y]
    }

    /// `P(x < y)`.
    pub fn prob(&self, x: usize, y: usize) -> Ratio {
        Ratio::new(self.counts[x][y].clone(), self.total.clone())
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Delta {
    pub value: Ratio,
    /// Achieving pair, `x < y` by index.
    pub pair: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancedPair {
    pub pair: (usize, usize),
    /// `P(pair.0 < pair.1)`.
    pub prob: Ratio,
}

trait Counter: Clone + Zero + One + for<'a> std::ops::AddAssign<&'a Self> {
    fn into_big(self) -> BigUint;
    fn times(&self, other: &Self) -> Self;
}

impl Counter for u128 {
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

impl Counter for BigUint {
    fn into_big(self) -> BigUint {
        self
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

/// Elements that can be appended to the down-set `ideal`.
#[inline]
fn addable(p: &Poset, ideal: Mask) -> Mask {
    let mut out = 0;
    for v in bits(p.all_mask() & !ideal) {
        if p.below_mask(v) & !ideal == 0 {
            out |= bit(v);
        }
    }
    out
}

fn count_generic<T: Counter>(p: &Poset) -> T {
    let n = p.len();
    let all = p.all_mask();
    if n <= DENSE_LIMIT {
        let mut table = vec![T::zero(); 1 << n];
        table[0] = T::one();
        for m in 0..all {
            if table[m as usize].is_zero() {
                continue;
            }
            let c = table[m as usize].clone();
            for v in bits(addable(p, m)) {
                table[(m | bit(v)) as usize] += &c;
            }
        }
        return table[all as usize].clone();
    }
    let mut layer: HashMap<Mask, T> = HashMap::from([(0, T::one())]);
    for _ in 0..n {
        let mut next: HashMap<Mask, T> = HashMap::with_capacity(layer.len() * 2);
        for (m, c) in &layer {
            for v in bits(addable(p, *m)) {
                *next.entry(m | bit(v)).or_insert_with(T::zero) += c;
            }
        }
        layer = next;
    }
    layer.remove(&all).expect("the full set is a down-set")
}

/// Exact `e(P)`.
pub fn count_extensions(p: &Poset) -> Count {
    if p.len() <= U128_LIMIT {
        count_generic::<u128>(p).into_big()
    } else {
        count_generic::<BigUint>(p)
    }
}

/// `e(P)` as a `u128` when `|P| <= 34`; used by the search kernels.
pub(crate) fn count_small(p: &Poset) -> Option<u128> {
    (p.len() <= U128_LIMIT).then(|| count_generic::<u128>(p))
}

/// Every down-set with its forward count (ways to build it) and backward
/// count (ways to complete it), ordered by size then mask.
fn ideal_table<T: Counter>(p: &Poset) -> Vec<(Mask, T, T)> {
    let n = p.len();
    let all = p.all_mask();
    let mut fwd: HashMap<Mask, T> = HashMap::from([(0, T::one())]);
    let mut layer: Vec<Mask> = vec![0];
    let mut order: Vec<Mask> = vec![0];
    for _ in 0..n {
        let mut next: Vec<Mask> = Vec::new();
        for &m in &layer {
            let c = fwd[&m].clone();
            for v in bits(addable(p, m)) {
                let key = m | bit(v);
                match fwd.get_mut(&key) {
                    Some(slot) => *slot += &c,
                    None => {
                        fwd.insert(key, c.clone());
                        next.push(key);
                    }
                }
            }
        }
        next.sort_unstable();
        order.extend_from_slice(&next);
        layer = next;
    }
    let mut bwd: HashMap<Mask, T> = HashMap::with_capacity(order.len());
    bwd.insert(all, T::one());
    for &m in order.iter().rev().skip(1) {
        let mut total = T::zero();
        for v in bits(addable(p, m)) {
            total += &bwd[&(m | bit(v))];
        }
        bwd.insert(m, total);
    }
    order
        .into_iter()
        .map(|m| {
            let f = fwd.remove(&m).unwrap();
            let b = bwd.remove(&m).unwrap();
            (m, f, b)
        })
        .collect()
}

fn pair_counts_generic<T: Counter>(p: &Poset) -> (Vec<Vec<T>>, T) {
    let n = p.len();
    let table = ideal_table::<T>(p);
    let index: HashMap<Mask, usize> = table
        .iter()
        .enumerate()
        .map(|(i, (m, _, _))| (*m, i))
        .collect();
    let mut counts = vec![vec![T::zero(); n]; n];
    for (m, f, _) in &table {
        for x in bits(addable(p, *m)) {
            let after = &table[index[&(m | bit(x))]].2;
            let w = f.times(after);
            for y in bits(p.all_mask() & !m & !bit(x)) {
                counts[x][y] += &w;
            }
        }
    }
    let total = table[0].2.clone();
    (counts, total)
}

/// Exact pairwise order counts, in one forward/backward pass over the down-sets.
pub fn pair_counts(p: &Poset) -> PairCountMatrix {
    if p.len() <= U128_LIMIT {
        let (counts, total) = pair_counts_generic::<u128>(p);
        PairCountMatrix {
            counts: counts
                .into_iter()
                .map(|row| row.into_iter().map(BigUint::from).collect())
                .collect(),
            total: BigUint::from(total),
        }
    } else {
        let (counts, total) = pair_counts_generic::<BigUint>(p);
        PairCountMatrix { counts, total }
    }
}

/// Extensions with `x` before `y`, by recounting the poset with `x < y` forced.
pub fn count_with_relation(p: &Poset, x: usize, y: usize) -> Count {
    if x == y || p.lt(y, x) {
        Count::zero()
    } else if p.lt(x, y) {
        count_extensions(p)
    } else {
        count_extensions(&p.with_relation_unchecked(x, y))
    }
}

/// Visits every extension as a bottom-to-top sequence, choosing the next
/// element among the current minimal ones in ascending index order.
pub fn for_each_extension<F>(p: &Poset, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    fn go<F: FnMut(&[usize]) -> ControlFlow<()>>(
        p: &Poset,
        placed: Mask,
        seq: &mut Vec<usize>,
        visit: &mut F,
    ) -> ControlFlow<()> {
        if seq.len() == p.len() {
            return visit(seq);
        }
        for v in bits(addable(p, placed)) {
            seq.push(v);
            go(p, placed | bit(v), seq, visit)?;
            seq.pop();
        }
        ControlFlow::Continue(())
    }
    let mut seq = Vec::with_capacity(p.len());
    go(p, 0, &mut seq, &mut visit)
}

/// All of `L(P)` in deterministic order; fails if `e(P)` exceeds `cap`.
pub fn enumerate_extensions(p: &Poset, cap: u64) -> Result<Vec<LinearExtension>> {
    let e = count_extensions(p);
    if e > BigUint::from(cap) {
        return Err(PosetError::CapExceeded { cap });
    }
    let mut out = Vec::new();
    let _ = for_each_extension(p, |seq| {
        out.push(LinearExtension::from_sequence(seq));
        ControlFlow::Continue(())
    });
    Ok(out)
}

fn check_pair(p: &Poset, x: usize, y: usize) -> Result<()> {
    for index in [x, y] {
        if index >= p.len() {
            return Err(PosetError::Index { index, n: p.len() });
        }
    }
    Ok(())
}

/// `P(x < y)` over a uniformly random linear extension.
pub fn prob(p: &Poset, x: usize, y: usize) -> Result<Ratio> {
    check_pair(p, x, y)?;
    Ok(Ratio::new(
        count_with_relation(p, x, y),
        count_extensions(p),
    ))
}

/// `delta(P) = max over pairs of min{P(x<y), P(y<x)}`, with the smallest
/// achieving index pair.
pub fn delta(p: &Poset) -> Result<Delta> {
    delta_from_counts(p, &pair_counts(p))
}

pub fn delta_from_counts(p: &Poset, m: &PairCountMatrix) -> Result<Delta> {
    let mut best: Option<Delta> = None;
    for (x, y) in p.incomparable_pairs() {
        let forward = m.prob(x, y);
        let backward = m.prob(y, x);
        let value = forward.min(backward);
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(Delta {
                value,
                pair: (x, y),
            });
        }
    }
    best.ok_or(PosetError::Chain)
}

/// First pair (in index order) whose probability lies in `[1/3, 2/3]`;
/// `None` would be a counterexample to the 1/3-2/3 conjecture.
pub fn balanced_pair(p: &Poset) -> Result<Option<BalancedPair>> {
    balanced_pair_from_counts(p, &pair_counts(p))
}

pub fn balanced_pair_from_counts(p: &Poset, m: &PairCountMatrix) -> Result<Option<BalancedPair>> {
    if p.is_chain() {
        return Err(PosetError::Chain);
    }
    let lo = Ratio::new(1u32, 3u32);
    let hi = Ratio::new(2u32, 3u32);
    Ok(p.incomparable_pairs().into_iter().find_map(|(x, y)| {
        let prob = m.prob(x, y);
        prob.within(&lo, &hi)
            .then_some(BalancedPair { pair: (x, y), prob })
    }))
}
