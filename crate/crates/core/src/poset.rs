//! Finite strict partial orders on dense indices `0..n`.
//!
//! The relation is stored transitively closed as one bitmask row per element,
//! so every query about `<_P` is a mask test.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{PosetError, Result};

/// Largest supported element count. Rows are `u64` masks.
pub const MAX_ELEMENTS: usize = 64;

pub type Mask = u64;

#[inline]
pub(crate) fn bit(i: usize) -> Mask {
    1u64 << i
}

#[inline]
pub(crate) fn full_mask(n: usize) -> Mask {
    if n == 64 {
        u64::MAX
    } else {
        bit(n) - 1
    }
}

/// Iterates the set bits of a mask in ascending order.
pub(crate) fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poset {
    /// `below[b]` has bit `a` set iff `a <_P b`.
    below: Vec<Mask>,
    /// `above[a]` has bit `b` set iff `a <_P b`.
    above: Vec<Mask>,
}

/// Serialized as the element count and the cover relations.
impl Serialize for Poset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Poset", 2)?;
        st.serialize_field("n", &self.len())?;
        st.serialize_field("covers", &self.covers().pairs)?;
        st.end()
    }
}

/// The Hasse diagram edges: `(a, b)` with `b` an immediate successor of `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverRelation {
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ObstructionKind {
    /// Two disjoint 2-chains, mutually incomparable.
    TwoPlusTwo,
    /// A 3-chain and a point incomparable to all of it.
    ThreePlusOne,
}

/// An induced 2+2 or 3+1. For 2+2 the elements are `a < b`, `c < d`;
/// for 3+1 they are `a < b < c` and the isolated `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SemiorderObstruction {
    pub kind: ObstructionKind,
    pub elements: [usize; 4],
}

impl Poset {
    fn check_size(n: usize) -> Result<()> {
        if n == 0 {
            return Err(PosetError::ZeroSize);
        }
        if n > MAX_ELEMENTS {
            return Err(PosetError::SizeCap {
                n,
                cap: MAX_ELEMENTS,
            });
        }
        Ok(())
    }

    /// Builds from `below` rows that are already transitively closed and acyclic.
    pub(crate) fn from_closed_below(below: Vec<Mask>) -> Self {
        let n = below.len();
        let mut above = vec![0; n];
        for (b, &row) in below.iter().enumerate() {
            for a in bits(row) {
                above[a] |= bit(b);
            }
        }
        let p = Poset { below, above };
        debug_assert!(p.is_valid());
        p
    }

    /// Transitive closure of `pairs`, each `(a, b)` meaning `a < b`.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::check_size(n)?;
        let mut below = vec![0 as Mask; n];
        for &(a, b) in pairs {
            for index in [a, b] {
                if index >= n {
                    return Err(PosetError::Index { index, n });
                }
            }
            below[b] |= bit(a);
        }
        // Warshall on bit rows.
        for k in 0..n {
            let row_k = below[k];
            for row in below.iter_mut() {
                if *row & bit(k) != 0 {
                    *row |= row_k;
                }
            }
        }
        if let Some(a) = (0..n).find(|&a| below[a] & bit(a) != 0) {
            return Err(PosetError::Cycle(a));
        }
        Ok(Self::from_closed_below(below))
    }

    /// The 2-dimensional order of the points `(i, values[i])`: `i < j` iff `i`
    /// comes first and `values[i] < values[j]`. Only relative order matters.
    pub fn from_permutation(values: &[i64]) -> Result<Self> {
        let n = values.len();
        Self::check_size(n)?;
        let mut seen = std::collections::HashSet::with_capacity(n);
        for &v in values {
            if !seen.insert(v) {
                return Err(PosetError::DuplicateValue(v));
            }
        }
        let below = (0..n)
            .map(|j| {
                (0..j)
                    .filter(|&i| values[i] < values[j])
                    .fold(0, |m, i| m | bit(i))
            })
            .collect();
        Ok(Self::from_closed_below(below))
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Result<Self> {
        Self::check_size(n)?;
        Ok(Self::from_closed_below((0..n).map(full_mask).collect()))
    }

    pub fn antichain(n: usize) -> Result<Self> {
        Self::check_size(n)?;
        Ok(Self::from_closed_below(vec![0; n]))
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    /// Always false; posets have at least one point.
    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub(crate) fn all_mask(&self) -> Mask {
        full_mask(self.len())
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(PosetError::Index {
                index,
                n: self.len(),
            })
        }
    }

    /// `a <_P b`.
    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.below[b] & bit(a) != 0
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b) || self.lt(b, a)
    }

    /// Strict predecessors of `a` as a mask.
    #[inline]
    pub fn below_mask(&self, a: usize) -> Mask {
        self.below[a]
    }

    /// Strict successors of `a` as a mask.
    #[inline]
    pub fn above_mask(&self, a: usize) -> Mask {
        self.above[a]
    }

    /// Points incomparable to `a` (excluding `a`).
    #[inline]
    pub fn incomparable_mask(&self, a: usize) -> Mask {
        self.all_mask() & !(self.below[a] | self.above[a] | bit(a))
    }

    pub fn predecessors(&self, a: usize) -> Vec<usize> {
        bits(self.below[a]).collect()
    }

    pub fn successors(&self, a: usize) -> Vec<usize> {
        bits(self.above[a]).collect()
    }

    /// Number of comparable (ordered) pairs `a < b`.
    pub fn relation_count(&self) -> usize {
        self.below.iter().map(|m| m.count_ones() as usize).sum()
    }

    /// Checks irreflexivity, antisymmetry, transitivity and row consistency.
    pub fn is_valid(&self) -> bool {
        let n = self.len();
        if n == 0 || n > MAX_ELEMENTS || self.above.len() != n {
            return false;
        }
        let all = full_mask(n);
        for a in 0..n {
            if self.below[a] & !all != 0 || self.below[a] & bit(a) != 0 {
                return false;
            }
            if self.below[a] & self.above[a] != 0 {
                return false;
            }
            for b in 0..n {
                if self.lt(a, b) != (self.above[a] & bit(b) != 0) {
                    return false;
                }
            }
            // Everything below a predecessor is below a.
            for p in bits(self.below[a]) {
                if self.below[p] & !self.below[a] != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest extension of `self` with `a < b`.
    pub fn with_relation(&self, a: usize, b: usize) -> Result<Self> {
        self.check_index(a)?;
        self.check_index(b)?;
        if self.comparable(a, b) {
            return Err(PosetError::AlreadyComparable(a, b));
        }
        Ok(self.with_relation_unchecked(a, b))
    }

    /// `with_relation` for a pair already known to be incomparable.
    pub(crate) fn with_relation_unchecked(&self, a: usize, b: usize) -> Self {
        let mut below = self.below.clone();
        let lower = self.below[a] | bit(a);
        for y in bits(self.above[b] | bit(b)) {
            below[y] |= lower;
        }
        Self::from_closed_below(below)
    }

    pub fn is_chain(&self) -> bool {
        self.elements().all(|a| self.incomparable_mask(a) == 0)
    }

    /// Each unordered incomparable pair once, as `(a, b)` with `a < b` by index,
    /// in lexicographic order.
    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in bits(self.incomparable_mask(a) & !full_mask(a + 1)) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn covers(&self) -> CoverRelation {
        let mut pairs = Vec::new();
        for a in self.elements() {
            for b in bits(self.above[a]) {
                if self.above[a] & self.below[b] == 0 {
                    pairs.push((a, b));
                }
            }
        }
        CoverRelation { pairs }
    }

    /// Graphviz digraph with one edge per cover, drawn bottom to top.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph {\n  rankdir=BT;\n");
        for a in self.elements() {
            let _ = writeln!(out, "  {a};");
        }
        for (a, b) in self.covers().pairs {
            let _ = writeln!(out, "  {a} -> {b};");
        }
        out.push_str("}\n");
        out
    }

    /// The order with every relation reversed.
    pub fn dual(&self) -> Self {
        Poset {
            below: self.above.clone(),
            above: self.below.clone(),
        }
    }

    /// Subposet induced on the elements of `mask`, reindexed in ascending order.
    pub fn induced(&self, mask: Mask) -> Result<Self> {
        let members: Vec<usize> = bits(mask & self.all_mask()).collect();
        Self::check_size(members.len())?;
        let below = members
            .iter()
            .map(|&m| {
                members
                    .iter()
                    .enumerate()
                    .filter(|&(_, &o)| self.lt(o, m))
                    .fold(0, |acc, (j, _)| acc | bit(j))
            })
            .collect();
        Ok(Self::from_closed_below(below))
    }

    /// Relabels so that old element `a` becomes `perm[a]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.len();
        if perm.len() != n {
            return Err(PosetError::ArityMismatch {
                base: n,
                components: perm.len(),
            });
        }
        let mut seen = 0 as Mask;
        for &p in perm {
            self.check_index(p)?;
            seen |= bit(p);
        }
        if seen != self.all_mask() {
            return Err(PosetError::NotPermutation);
        }
        let mut below = vec![0; n];
        for b in 0..n {
            below[perm[b]] = bits(self.below[b]).fold(0, |m, a| m | bit(perm[a]));
        }
        Ok(Self::from_closed_below(below))
    }

    /// Size of a maximum antichain, by branch-and-bound clique search in the
    /// incomparability graph.
    pub fn width(&self) -> usize {
        let mut best = 0;
        let incomparable: Vec<Mask> = self.elements().map(|a| self.incomparable_mask(a)).collect();
        grow_antichain(&incomparable, self.all_mask(), 0, &mut best);
        best
    }

    /// Some maximum antichain, lexicographically smallest among those found first.
    pub fn max_antichain(&self) -> Vec<usize> {
        let incomparable: Vec<Mask> = self.elements().map(|a| self.incomparable_mask(a)).collect();
        let mut best = (0usize, 0 as Mask);
        grow_antichain_set(&incomparable, self.all_mask(), 0, &mut best);
        bits(best.1).collect()
    }

    /// First induced 2+2 or 3+1 in lexicographic order of 4-subsets.
    pub fn semiorder_obstruction(&self) -> Option<SemiorderObstruction> {
        let n = self.len();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        if let Some(o) = self.classify_four([a, b, c, d]) {
                            return Some(o);
                        }
                    }
                }
            }
        }
        None
    }

    /// Every induced 2+2 and 3+1, by increasing element quadruple.
    pub fn semiorder_obstructions(&self) -> Vec<SemiorderObstruction> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        out.extend(self.classify_four([a, b, c, d]));
                    }
                }
            }
        }
        out
    }

    pub fn is_semiorder(&self) -> bool {
        self.semiorder_obstruction().is_none()
    }

    fn classify_four(&self, quad: [usize; 4]) -> Option<SemiorderObstruction> {
        let mask = quad.iter().fold(0, |m, &x| m | bit(x));
        let rel =
            |x: usize| (self.below[x] & mask).count_ones() + (self.above[x] & mask).count_ones();
        let edges: u32 = quad
            .iter()
            .map(|&x| (self.below[x] & mask).count_ones())
            .sum();
        // 2+2 has two relations and every point in exactly one; 3+1 has three
        // relations forming a chain plus an isolated point.
        if edges == 2 && quad.iter().all(|&x| rel(x) == 1) {
            let mut chains = quad
                .iter()
                .filter(|&&x| self.below[x] & mask == 0)
                .map(|&lo| (lo, bits(self.above[lo] & mask).next().unwrap()));
            let (a, b) = chains.next()?;
            let (c, d) = chains.next()?;
            return Some(SemiorderObstruction {
                kind: ObstructionKind::TwoPlusTwo,
                elements: [a, b, c, d],
            });
        }
        if edges == 3 {
            let isolated = quad.iter().copied().find(|&x| rel(x) == 0)?;
            let mut rest: Vec<usize> = quad.iter().copied().filter(|&x| x != isolated).collect();
            rest.sort_by_key(|&x| (self.below[x] & mask).count_ones());
            if self.lt(rest[0], rest[1]) && self.lt(rest[1], rest[2]) {
                return Some(SemiorderObstruction {
                    kind: ObstructionKind::ThreePlusOne,
                    elements: [rest[0], rest[1], rest[2], isolated],
                });
            }
        }
        None
    }

    /// Per-element `(predecessor count, successor count)`, sorted. Invariant
    /// under isomorphism.
    pub fn degree_sequence(&self) -> Vec<(u32, u32)> {
        let mut seq: Vec<(u32, u32)> = self
            .elements()
            .map(|a| (self.below[a].count_ones(), self.above[a].count_ones()))
            .collect();
        seq.sort_unstable();
        seq
    }

    /// Height of each element: length of the longest chain ending at it, minus one.
    pub fn heights(&self) -> Vec<usize> {
        let mut memo: HashMap<usize, usize> = HashMap::new();
        fn h(p: &Poset, a: usize, memo: &mut HashMap<usize, usize>) -> usize {
            if let Some(&v) = memo.get(&a) {
                return v;
            }
            let v = bits(p.below[a])
                .map(|b| h(p, b, memo) + 1)
                .max()
                .unwrap_or(0);
            memo.insert(a, v);
            v
        }
        self.elements().map(|a| h(self, a, &mut memo)).collect()
    }
}

fn grow_antichain(incomparable: &[Mask], mut candidates: Mask, size: usize, best: &mut usize) {
    if candidates == 0 {
        *best = (*best).max(size);
        return;
    }
    while candidates != 0 {
        if size + candidates.count_ones() as usize <= *best {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        candidates &= !bit(v);
        grow_antichain(incomparable, candidates & incomparable[v], size + 1, best);
    }
    *best = (*best).max(size);
}

fn grow_antichain_set(
    incomparable: &[Mask],
    mut candidates: Mask,
    chosen: Mask,
    best: &mut (usize, Mask),
) {
    let size = chosen.count_ones() as usize;
    if size > best.0 {
        *best = (size, chosen);
    }
    while candidates != 0 {
        if size + candidates.count_ones() as usize <= best.0 {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        candidates &= !bit(v);
        grow_antichain_set(
            incomparable,
            candidates & incomparable[v],
            chosen | bit(v),
            best,
        );
    }
}
