//! Exhaustive generation of labeled posets.
//!
//! Every poset on `0..=k` restricts to a unique poset on `0..k`; it is recovered
//! by choosing the down-set `D` and up-set `U` of the new point `k`, where each
//! member of `D` already lies below each member of `U`.

use crate::poset::{bit, bits, full_mask, Mask, Poset};

/// Every labeled poset on exactly `n` points (`n >= 1`), in generation order.
pub fn labeled_posets(n: usize) -> Vec<Poset> {
    assert!(n >= 1, "posets have at least one point");
    let mut level = vec![Poset::antichain(1).expect("one point")];
    for k in 1..n {
        let mut next = Vec::new();
        for p in &level {
            extend_by_one(p, k, &mut next);
        }
        level = next;
    }
    level
}

/// Every labeled poset on `1..=max_n` points, grouped by size.
pub fn labeled_posets_up_to(max_n: usize) -> Vec<Vec<Poset>> {
    let mut out: Vec<Vec<Poset>> = Vec::with_capacity(max_n);
    for k in 1..=max_n {
        let level = match out.last() {
            None => vec![Poset::antichain(1).expect("one point")],
            Some(prev) => {
                let mut next = Vec::new();
                for p in prev {
                    extend_by_one(p, k - 1, &mut next);
                }
                next
            }
        };
        out.push(level);
    }
    out
}

fn extend_by_one(p: &Poset, k: usize, out: &mut Vec<Poset>) {
    let all = full_mask(k);
    let downs: Vec<Mask> = (0..=all)
        .filter(|&m| bits(m).all(|a| p.below_mask(a) & !m == 0))
        .collect();
    let ups: Vec<Mask> = (0..=all)
        .filter(|&m| bits(m).all(|a| p.above_mask(a) & !m == 0))
        .collect();
    for &d in &downs {
        for &u in &ups {
            if d & u != 0 || !bits(d).all(|a| p.above_mask(a) & u == u) {
                continue;
            }
            let mut below: Vec<Mask> = p.elements().map(|a| p.below_mask(a)).collect();
            for b in bits(u) {
                below[b] |= bit(k);
            }
            below.push(d);
            out.push(Poset::from_closed_below(below));
        }
    }
}
