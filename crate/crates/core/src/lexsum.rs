//! Lexicographic sums `P(Q_1, ..., Q_n)` and the single substitution `P o_i Q`.
//!
//! Sum elements are numbered component by component in base order, so the
//! members of `Q_i` occupy a contiguous block. Inside a component the order is
//! that of `Q_i`; across components it is inherited from the base.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::conjectures::{self, ChainBranch, GpcBranch, GpcOptions, GpcWitness};
use crate::error::{PosetError, Result};
use crate::linext::{self, count_extensions, enumerate_extensions, Count, LinearExtension};
use crate::poset::{bit, bits, Mask, Poset};
use crate::ratio::Ratio;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexSumSpec {
    base: Poset,
    components: Vec<Poset>,
    /// `embed[i][q]` is the sum element standing for `q` in `Q_i`.
    embed: Vec<Vec<usize>>,
    /// Inverse of `embed`: sum element to `(component, local index)`.
    owner: Vec<(usize, usize)>,
    sum: Poset,
}

impl LexSumSpec {
    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn components(&self) -> &[Poset] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poset {
        &self.components[i]
    }

    pub fn embed(&self, i: usize) -> &[usize] {
        &self.embed[i]
    }

    pub fn sum(&self) -> &Poset {
        &self.sum
    }

    pub fn into_sum(self) -> Poset {
        self.sum
    }

    /// `(component, local index)` of a sum element.
    pub fn owner(&self, x: usize) -> (usize, usize) {
        self.owner[x]
    }

    /// Sum element standing for base point `p` when its component is a single point.
    pub fn base_point(&self, p: usize) -> Option<usize> {
        (self.components[p].len() == 1).then(|| self.embed[p][0])
    }

    /// Trivial when the base is one point or every component is one point.
    pub fn is_trivial(&self) -> bool {
        self.base.len() == 1 || self.components.iter().all(|q| q.len() == 1)
    }
}

pub fn lex_sum(base: &Poset, components: &[Poset]) -> Result<LexSumSpec> {
    if components.len() != base.len() {
        return Err(PosetError::ArityMismatch {
            base: base.len(),
            components: components.len(),
        });
    }
    let total: usize = components.iter().map(Poset::len).sum();
    if total > crate::poset::MAX_ELEMENTS {
        return Err(PosetError::SizeCap {
            n: total,
            cap: crate::poset::MAX_ELEMENTS,
        });
    }
    let mut embed = Vec::with_capacity(components.len());
    let mut owner = Vec::with_capacity(total);
    let mut next = 0;
    for (i, q) in components.iter().enumerate() {
        embed.push((next..next + q.len()).collect::<Vec<_>>());
        owner.extend((0..q.len()).map(|local| (i, local)));
        next += q.len();
    }
    let block = |i: usize| -> Mask { embed[i].iter().fold(0, |m, &x| m | bit(x)) };
    let mut below = vec![0 as Mask; total];
    for (i, q) in components.iter().enumerate() {
        let outer = bits(base.below_mask(i)).fold(0, |m, j| m | block(j));
        for local in q.elements() {
            let inner = bits(q.below_mask(local)).fold(0, |m, l| m | bit(embed[i][l]));
            below[embed[i][local]] = outer | inner;
        }
    }
    Ok(LexSumSpec {
        base: base.clone(),
        components: components.to_vec(),
        embed,
        owner,
        sum: Poset::from_closed_below(below),
    })
}

/// `P o_i Q`: every point of `base` stays a single point except `i`, which becomes `q`.
pub fn compose_at(base: &Poset, i: usize, q: &Poset) -> Result<LexSumSpec> {
    if i >= base.len() {
        return Err(PosetError::Index {
            index: i,
            n: base.len(),
        });
    }
    let point = Poset::antichain(1)?;
    let components: Vec<Poset> = base
        .elements()
        .map(|j| if j == i { q.clone() } else { point.clone() })
        .collect();
    lex_sum(base, &components)
}

/// `P (+) Q`: everything in `p` below everything in `q`.
pub fn ordinal_sum(p: &Poset, q: &Poset) -> Result<Poset> {
    Ok(lex_sum(&Poset::chain(2)?, &[p.clone(), q.clone()])?.into_sum())
}

/// `P |_| Q`.
pub fn disjoint_union(p: &Poset, q: &Poset) -> Result<Poset> {
    Ok(lex_sum(&Poset::antichain(2)?, &[p.clone(), q.clone()])?.into_sum())
}

/// The order `f` induces on component `i`, as an extension of `Q_i`.
///
/// Also checks locality: the labels of `Q_i` lie above every component below
/// `i` in the base and below every component above it.
pub fn restrict_to_component(
    spec: &LexSumSpec,
    f: &LinearExtension,
    i: usize,
) -> Result<LinearExtension> {
    if i >= spec.components.len() {
        return Err(PosetError::Index {
            index: i,
            n: spec.components.len(),
        });
    }
    if f.len() != spec.sum.len() {
        return Err(PosetError::InvalidArgument(format!(
            "extension has {} labels, sum has {} elements",
            f.len(),
            spec.sum.len()
        )));
    }
    let labels = |j: usize| spec.embed[j].iter().map(|&x| f.label(x));
    let lo = labels(i).min().expect("components are non-empty");
    let hi = labels(i).max().expect("components are non-empty");
    for j in bits(spec.base.above_mask(i)) {
        if labels(j).min().unwrap() < hi {
            return Err(PosetError::RemarkViolation(format!(
                "component {j} lies above {i} in the base but not in the extension"
            )));
        }
    }
    for j in bits(spec.base.below_mask(i)) {
        if labels(j).max().unwrap() > lo {
            return Err(PosetError::RemarkViolation(format!(
                "component {j} lies below {i} in the base but not in the extension"
            )));
        }
    }
    let mut local: Vec<usize> = (0..spec.embed[i].len()).collect();
    local.sort_by_key(|&q| f.label(spec.embed[i][q]));
    Ok(LinearExtension::from_sequence(&local))
}

/// Replaces the order `f` puts on component `i` by `h`, reusing the same set
/// of labels for the component and leaving every other label alone.
pub fn substitute_component(
    spec: &LexSumSpec,
    f: &LinearExtension,
    i: usize,
    h: &LinearExtension,
) -> LinearExtension {
    let mut slots: Vec<usize> = spec.embed[i].iter().map(|&x| f.label(x)).collect();
    slots.sort_unstable();
    let mut labels = f.labels().to_vec();
    for (q, &x) in spec.embed[i].iter().enumerate() {
        labels[x] = slots[h.label(q) - 1];
    }
    LinearExtension::from_labels(labels)
}

/// Extensions of `P o_i Q` arranged with one column per extension `g` of `Q`
/// (the class of extensions restricting to `g`) and a common row count `k`.
#[derive(Clone, Debug, Serialize)]
pub struct LocalityTable {
    /// `L(Q)` in enumeration order.
    pub columns: Vec<LinearExtension>,
    /// The class of `columns[0]`, sorted.
    pub rows: Vec<LinearExtension>,
    pub class_sizes: Vec<usize>,
    pub k: usize,
    #[serde(serialize_with = "crate::linext::decimal::serialize")]
    pub extensions: Count,
    pub equal_classes: bool,
    /// Every extension is recovered from its (row, column) coordinates and the
    /// coordinates are distinct.
    pub reconstruction_ok: bool,
}

pub fn locality_table(base: &Poset, i: usize, q: &Poset, cap: u64) -> Result<LocalityTable> {
    let spec = compose_at(base, i, q)?;
    locality_table_for(&spec, i, cap)
}

pub fn locality_table_for(spec: &LexSumSpec, i: usize, cap: u64) -> Result<LocalityTable> {
    let all = enumerate_extensions(&spec.sum, cap)?;
    let columns = enumerate_extensions(&spec.components[i], cap)?;
    let column_index: HashMap<&LinearExtension, usize> =
        columns.iter().enumerate().map(|(c, g)| (g, c)).collect();
    let reference = &columns[0];

    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); columns.len()];
    let mut restrictions = Vec::with_capacity(all.len());
    for (idx, f) in all.iter().enumerate() {
        let g = restrict_to_component(spec, f, i)?;
        let c = *column_index.get(&g).ok_or_else(|| {
            PosetError::LemmaViolation("restriction is not an extension of the component".into())
        })?;
        classes[c].push(idx);
        restrictions.push(c);
    }
    let class_sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    let k = class_sizes[0];
    let equal_classes = class_sizes.iter().all(|&s| s == k);

    let mut rows: Vec<LinearExtension> = classes[0].iter().map(|&idx| all[idx].clone()).collect();
    rows.sort();
    let row_index: HashMap<&LinearExtension, usize> =
        rows.iter().enumerate().map(|(r, f)| (f, r)).collect();
    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(all.len());
    let mut reconstruction_ok = true;
    for (f, &c) in all.iter().zip(&restrictions) {
        let row = substitute_component(spec, f, i, reference);
        let Some(&r) = row_index.get(&row) else {
            reconstruction_ok = false;
            continue;
        };
        let back = substitute_component(spec, &row, i, &columns[c]);
        if &back != f || !seen.insert((r, c)) {
            reconstruction_ok = false;
        }
    }
    Ok(LocalityTable {
        columns,
        rows,
        class_sizes,
        k,
        extensions: Count::from(all.len()),
        equal_classes,
        reconstruction_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Divisibility {
    #[serde(serialize_with = "crate::linext::decimal::serialize")]
    pub extensions: Count,
    #[serde(serialize_with = "crate::linext::decimal::serialize")]
    pub product: Count,
    pub divides: bool,
    /// `e(sum) / prod e(Q_i)` when it divides.
    #[serde(serialize_with = "crate::linext::decimal::option")]
    pub cofactor: Option<Count>,
}

/// Whether `prod e(Q_i)` divides `e(P(Q_1, ..., Q_n))`.
pub fn verify_divisibility(base: &Poset, components: &[Poset]) -> Result<Divisibility> {
    let spec = lex_sum(base, components)?;
    let extensions = count_extensions(&spec.sum);
    let product: Count = components.iter().map(count_extensions).product();
    let (quotient, remainder) = extensions.div_rem(&product);
    let divides = remainder.is_zero();
    Ok(Divisibility {
        extensions,
        product,
        divides,
        cofactor: divides.then_some(quotient),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftedWitness {
    pub witness: GpcWitness,
    /// `e(P o_i Q) / e(Q)`.
    #[serde(serialize_with = "crate::linext::decimal::serialize")]
    pub k: Count,
    /// Branches whose forced second comparison failed the inequality and were
    /// completed with a fresh comparison in the sum instead.
    pub completed_branches: Vec<usize>,
}

/// Maps a witness for `q` through `P o_i Q` and re-verifies it there by
/// independent recounting, checking `t'_j = k t_j` for every lifted count.
pub fn lift_gpc_witness(
    base: &Poset,
    i: usize,
    q: &Poset,
    w: &GpcWitness,
    opts: GpcOptions,
) -> Result<LiftedWitness> {
    conjectures::verify_witness(q, w, opts)?;
    let spec = compose_at(base, i, q)?;
    let sum = &spec.sum;
    let map = |(a, b): (usize, usize)| (spec.embed[i][a], spec.embed[i][b]);

    let t0 = count_extensions(sum);
    let (k, rem) = t0.div_rem(&w.t0);
    if !rem.is_zero() {
        return Err(PosetError::LemmaViolation(format!(
            "e(Q) = {} does not divide {t0}",
            w.t0
        )));
    }
    let mismatch = |what: &str, got: &Count, base_value: &Count| {
        PosetError::LemmaViolation(format!(
            "{what}: lifted {got} != k * {base_value} with k = {k}"
        ))
    };
    if t0 != &k * &w.t0 {
        return Err(mismatch("t0", &t0, &w.t0));
    }

    let mut branches = Vec::with_capacity(2);
    let mut completed_branches = Vec::new();
    for (idx, br) in w.branches.iter().enumerate() {
        let result = map(br.result);
        let branch = sum.with_relation_unchecked(result.0, result.1);
        let t1 = count_extensions(&branch);
        if t1 != &k * &br.t1 {
            return Err(mismatch("t1", &t1, &br.t1));
        }
        let (second, t2) = match br.second {
            Some(pair) => {
                let (c, d) = map(pair);
                (Some((c, d)), lifted_t2(&branch, &t1, c, d))
            }
            None if branch.is_chain() => (None, chain_value(opts.chain_branch)),
            None => (None, t1.clone()),
        };
        let lifted = GpcBranch {
            result,
            t1,
            second,
            t2,
        };
        if lifted.remaining() != &k * br.remaining() {
            return Err(mismatch("t2", &lifted.remaining(), &br.remaining()));
        }
        if holds(opts, &t0, &lifted) {
            branches.push(lifted);
            continue;
        }
        // Only reachable for a chain branch of Q under the strict inequality.
        let fresh = lifted_chain_branch(&branch, &lifted.t1, opts, &t0).ok_or_else(|| {
            PosetError::LemmaViolation(format!("branch {idx} cannot be completed"))
        })?;
        completed_branches.push(idx);
        branches.push(GpcBranch { result, ..fresh });
    }
    let witness = GpcWitness {
        first: map(w.first),
        t0,
        branches,
    };
    conjectures::verify_witness(sum, &witness, opts)?;
    Ok(LiftedWitness {
        witness,
        k,
        completed_branches,
    })
}

fn lifted_t2(branch: &Poset, t1: &Count, c: usize, d: usize) -> Count {
    if branch.comparable(c, d) {
        return t1.clone();
    }
    let low = count_extensions(&branch.with_relation_unchecked(c, d));
    let high = t1 - &low;
    low.max(high)
}

fn chain_value(c: ChainBranch) -> Count {
    match c {
        ChainBranch::Zero => Count::zero(),
        ChainBranch::One => Count::from(1u32),
    }
}

fn holds(opts: GpcOptions, t0: &Count, br: &GpcBranch) -> bool {
    let rhs = &br.t1 + &br.t2;
    match opts.inequality {
        conjectures::Inequality::NonStrict => *t0 >= rhs,
        conjectures::Inequality::Strict => *t0 > rhs,
    }
}

fn lifted_chain_branch(
    branch: &Poset,
    t1: &Count,
    opts: GpcOptions,
    t0: &Count,
) -> Option<GpcBranch> {
    branch.incomparable_pairs().into_iter().find_map(|(c, d)| {
        let candidate = GpcBranch {
            result: (0, 0),
            t1: t1.clone(),
            second: Some((c, d)),
            t2: lifted_t2(branch, t1, c, d),
        };
        holds(opts, t0, &candidate).then_some(candidate)
    })
}

/// `(P(x < y) in Q_i, P(x < y) in the sum)` for sum elements `x`, `y` of
/// component `i`; the two must agree.
pub fn prob_preservation(
    spec: &LexSumSpec,
    i: usize,
    x: usize,
    y: usize,
) -> Result<(Ratio, Ratio)> {
    for e in [x, y] {
        if e >= spec.sum.len() {
            return Err(PosetError::Index {
                index: e,
                n: spec.sum.len(),
            });
        }
    }
    let (cx, qx) = spec.owner[x];
    let (cy, qy) = spec.owner[y];
    if cx != i || cy != i {
        return Err(PosetError::Component(x, y));
    }
    let inner = linext::prob(&spec.components[i], qx, qy)?;
    let outer = linext::prob(&spec.sum, x, y)?;
    if inner != outer {
        return Err(PosetError::LemmaViolation(format!(
            "P({x} < {y}) is {outer} in the sum but {inner} in component {i}"
        )));
    }
    Ok((inner, outer))
}

/// One class of extensions of `P` that agree off the distinguished point:
/// the point can sit in any of `gap + 1` positions between its nearest
/// strict predecessor and nearest strict successor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapClass {
    /// The remaining elements, bottom to top.
    pub order: Vec<usize>,
    pub gap: usize,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapProfile {
    pub point: usize,
    pub classes: Vec<GapClass>,
    #[serde(serialize_with = "crate::linext::decimal::serialize")]
    pub extensions: Count,
}

impl GapProfile {
    /// Class counts by gap, split by whether `x` precedes `y`:
    /// `(c, d)` with `c[k]` classes of gap `k` having `x` first.
    pub fn split(&self, x: usize, y: usize) -> (Vec<Count>, Vec<Count>) {
        let width = self.classes.iter().map(|c| c.gap + 1).max().unwrap_or(0);
        let mut before = vec![Count::zero(); width];
        let mut after = vec![Count::zero(); width];
        for class in &self.classes {
            let px = class.order.iter().position(|&e| e == x);
            let py = class.order.iter().position(|&e| e == y);
            if px < py {
                before[class.gap] += 1u32;
            } else {
                after[class.gap] += 1u32;
            }
        }
        (before, after)
    }

    /// `sum over classes of multiset(gap + 1, m)`: extensions of `P o_point <m>`.
    pub fn substituted_count(&self, m: usize) -> Count {
        self.classes.iter().map(|c| multiset(c.gap + 1, m)).sum()
    }
}

/// Multichoose: `binomial(n + k - 1, k)`.
pub fn multiset(n: usize, k: usize) -> Count {
    if n == 0 {
        return if k == 0 {
            Count::from(1u32)
        } else {
            Count::zero()
        };
    }
    num_integer::binomial(BigUint::from(n + k - 1), BigUint::from(k))
}

/// Groups `L(P)` by the order of `P` minus `point`, recording each class's gap.
pub fn gap_profile(p: &Poset, point: usize, cap: u64) -> Result<GapProfile> {
    if point >= p.len() {
        return Err(PosetError::Index {
            index: point,
            n: p.len(),
        });
    }
    let n = p.len();
    let all = enumerate_extensions(p, cap)?;
    let mut classes: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
    for f in &all {
        let lower = bits(p.below_mask(point))
            .map(|s| f.label(s))
            .max()
            .unwrap_or(0);
        let upper = bits(p.above_mask(point))
            .map(|r| f.label(r))
            .min()
            .unwrap_or(n + 1);
        let gap = bits(p.incomparable_mask(point))
            .filter(|&t| (lower + 1..upper).contains(&f.label(t)))
            .count();
        let order: Vec<usize> = f.sequence().into_iter().filter(|&e| e != point).collect();
        let entry = classes.entry(order).or_insert((gap, 0));
        if entry.0 != gap {
            return Err(PosetError::LemmaViolation(
                "gap differs within a class".into(),
            ));
        }
        entry.1 += 1;
    }
    let classes: Vec<GapClass> = classes
        .into_iter()
        .map(|(order, (gap, size))| GapClass { order, gap, size })
        .collect();
    if let Some(bad) = classes.iter().find(|c| c.size != c.gap + 1) {
        return Err(PosetError::LemmaViolation(format!(
            "class of gap {} has {} members",
            bad.gap, bad.size
        )));
    }
    Ok(GapProfile {
        point,
        classes,
        extensions: Count::from(all.len()),
    })
}

/// Exact `P(x < y)` in `P o_point <m>` from the gap profile of `P`:
/// `sum c_k multiset(k+1, m) / sum (c_k + d_k) multiset(k+1, m)`.
pub fn chain_substitution_probability(
    p: &Poset,
    point: usize,
    m: usize,
    x: usize,
    y: usize,
    cap: u64,
) -> Result<Ratio> {
    for e in [x, y] {
        if e >= p.len() {
            return Err(PosetError::Index {
                index: e,
                n: p.len(),
            });
        }
    }
    if x == point || y == point || x == y {
        return Err(PosetError::InvalidArgument(
            "x and y must be distinct and differ from the substituted point".into(),
        ));
    }
    if m == 0 {
        return Err(PosetError::ZeroSize);
    }
    let profile = gap_profile(p, point, cap)?;
    Ok(profile_probability(&profile, m, x, y))
}

pub fn profile_probability(profile: &GapProfile, m: usize, x: usize, y: usize) -> Ratio {
    let (before, after) = profile.split(x, y);
    let mut num = Count::zero();
    let mut den = Count::zero();
    for (k, (c, d)) in before.iter().zip(&after).enumerate() {
        let weight = multiset(k + 1, m);
        num += c * &weight;
        den += (c + d) * &weight;
    }
    Ratio::new(num, den)
}
