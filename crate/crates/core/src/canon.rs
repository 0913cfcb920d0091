//! Exact canonical labeling for small posets.
//!
//! Vertices are colored by iterated (predecessor, successor) refinement; the
//! key is the lexicographically smallest relation bitstring over all orderings
//! that respect the color classes. Twins (same predecessors and successors)
//! are interchangeable and only tried in index order.

use std::collections::BTreeMap;

use crate::error::{PosetError, Result};
use crate::poset::{bit, bits, Mask, Poset};

pub const CANONICAL_CAP: usize = 10;

/// Equal iff the posets are isomorphic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    n: u8,
    bits: u128,
}

pub fn canonical_key(p: &Poset) -> Result<CanonicalKey> {
    let n = p.len();
    if n > CANONICAL_CAP {
        return Err(PosetError::SizeCap {
            n,
            cap: CANONICAL_CAP,
        });
    }
    let colors = refine_colors(p);
    // Positions are filled class by class in color order.
    let mut slots: Vec<usize> = (0..n).collect();
    slots.sort_by_key(|&v| colors[v]);
    let slot_colors: Vec<usize> = slots.iter().map(|&v| colors[v]).collect();

    let mut search = Search {
        p,
        colors: &colors,
        slot_colors: &slot_colors,
        order: Vec::with_capacity(n),
        used: 0,
        best: None,
    };
    search.run(0);
    let best = search.best.expect("at least one ordering exists");
    Ok(CanonicalKey {
        n: n as u8,
        bits: best,
    })
}

fn refine_colors(p: &Poset) -> Vec<usize> {
    let n = p.len();
    let mut colors: Vec<usize> = vec![0; n];
    let mut classes = 1;
    loop {
        let signatures: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut down: Vec<usize> = bits(p.below_mask(v)).map(|u| colors[u]).collect();
                let mut up: Vec<usize> = bits(p.above_mask(v)).map(|u| colors[u]).collect();
                down.sort_unstable();
                up.sort_unstable();
                (colors[v], down, up)
            })
            .collect();
        let ranks: BTreeMap<&(usize, Vec<usize>, Vec<usize>), usize> = signatures
            .iter()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let next: Vec<usize> = signatures.iter().map(|s| ranks[s]).collect();
        let count = ranks.len();
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

struct Search<'a> {
    p: &'a Poset,
    colors: &'a [usize],
    slot_colors: &'a [usize],
    order: Vec<usize>,
    used: Mask,
    best: Option<u128>,
}

impl Search<'_> {
    /// Bits contributed by placing the vertex at position `k`: for each earlier
    /// position `j`, `lt(order[j], order[k])` then `lt(order[k], order[j])`.
    fn prefix_code(&self) -> u128 {
        let mut code = 0u128;
        for k in 0..self.order.len() {
            for j in 0..k {
                code = (code << 1) | self.p.lt(self.order[j], self.order[k]) as u128;
                code = (code << 1) | self.p.lt(self.order[k], self.order[j]) as u128;
            }
        }
        code
    }

    fn run(&mut self, pos: usize) {
        let n = self.p.len();
        if let Some(best) = self.best {
            // Compare the current prefix against the best code's prefix.
            let width = pos * pos.saturating_sub(1);
            let total = n * (n - 1);
            let best_prefix = if width == 0 {
                0
            } else {
                best >> (total - width)
            };
            let cur = self.prefix_code();
            if cur > best_prefix {
                return;
            }
        }
        if pos == n {
            let code = self.prefix_code();
            if self.best.is_none_or(|b| code < b) {
                self.best = Some(code);
            }
            return;
        }
        let color = self.slot_colors[pos];
        let mut tried_twins: Vec<(Mask, Mask)> = Vec::new();
        for v in 0..n {
            if self.used & bit(v) != 0 || self.colors[v] != color {
                continue;
            }
            let twin_key = (self.p.below_mask(v), self.p.above_mask(v));
            if tried_twins.contains(&twin_key) {
                continue;
            }
            tried_twins.push(twin_key);
            self.order.push(v);
            self.used |= bit(v);
            self.run(pos + 1);
            self.used &= !bit(v);
            self.order.pop();
        }
    }
}
