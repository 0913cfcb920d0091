//! Order-autonomous sets and lexicographic decompositions `P = B o_i Q`.

use serde::Serialize;

use crate::canon::{canonical_key, CANONICAL_CAP};
use crate::conjectures::{self, GpcOptions, GpcVerdict, GpcWitness};
use crate::error::{PosetError, Result};
use crate::lexsum::{self, compose_at};
use crate::linext::{count_extensions, Count};
use crate::poset::{bit, bits, Mask, Poset};

pub const AUTONOMOUS_CAP: usize = 20;

/// A subset `S`, `1 < |S| < n`, that every outside element sees uniformly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutonomousSet {
    pub members: Vec<usize>,
    #[serde(skip)]
    mask: Mask,
}

impl AutonomousSet {
    pub fn mask(&self) -> Mask {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn is_autonomous(p: &Poset, s: Mask) -> bool {
    bits(p.all_mask() & !s).all(|z| {
        let above = p.above_mask(z) & s;
        let below = p.below_mask(z) & s;
        (above == s && below == 0) || (below == s && above == 0) || (above | below) == 0
    })
}

/// All non-trivial autonomous sets, ascending by size then mask.
pub fn autonomous_sets(p: &Poset) -> Result<Vec<AutonomousSet>> {
    let n = p.len();
    if n > AUTONOMOUS_CAP {
        return Err(PosetError::SizeCap {
            n,
            cap: AUTONOMOUS_CAP,
        });
    }
    let mut found: Vec<Mask> = (1..p.all_mask())
        .filter(|s: &Mask| s.count_ones() >= 2 && is_autonomous(p, *s))
        .collect();
    found.sort_by_key(|s| (s.count_ones(), *s));
    Ok(found
        .into_iter()
        .map(|mask| AutonomousSet {
            members: bits(mask).collect(),
            mask,
        })
        .collect())
}

/// One split `P = base o_index factor`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Split {
    pub base: Poset,
    pub index: usize,
    pub factor: Poset,
    /// Elements of `P` making up the factor, in factor order.
    pub members: Vec<usize>,
    /// `to_original[x]` is the element of `P` that sum element `x` of
    /// `compose_at(base, index, factor)` stands for.
    pub to_original: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Decomposition {
    Indecomposable,
    Split(Split),
}

impl Decomposition {
    pub fn split(&self) -> Option<&Split> {
        match self {
            Decomposition::Split(s) => Some(s),
            Decomposition::Indecomposable => None,
        }
    }
}

/// Contracts the autonomous set `s` to a point and checks the round trip.
pub fn split_at(p: &Poset, s: Mask) -> Result<Split> {
    if !is_autonomous(p, s) || s.count_ones() < 2 || s == p.all_mask() {
        return Err(PosetError::InvalidArgument(
            "not a non-trivial autonomous set".into(),
        ));
    }
    let members: Vec<usize> = bits(s).collect();
    let rep = members[0];
    let kept = (p.all_mask() & !s) | bit(rep);
    let base = p.induced(kept)?;
    let index = bits(kept)
        .position(|e| e == rep)
        .expect("representative is kept");
    let factor = p.induced(s)?;

    let spec = compose_at(&base, index, &factor)?;
    let mut to_original = vec![0; p.len()];
    for (j, orig) in bits(kept).enumerate() {
        if j == index {
            for (q, &x) in spec.embed(index).iter().enumerate() {
                to_original[x] = members[q];
            }
        } else {
            to_original[spec.embed(j)[0]] = orig;
        }
    }
    let rebuilt = spec.sum().relabel(&to_original)?;
    if &rebuilt != p {
        return Err(PosetError::LemmaViolation(
            "decomposition does not rebuild the poset".into(),
        ));
    }
    if p.len() <= CANONICAL_CAP && canonical_key(spec.sum())? != canonical_key(p)? {
        return Err(PosetError::LemmaViolation(
            "canonical keys disagree after decomposition".into(),
        ));
    }
    Ok(Split {
        base,
        index,
        factor,
        members,
        to_original,
    })
}

/// Splits off the smallest non-trivial autonomous set inducing a non-chain,
/// or the smallest one overall when all of them are chains (ties by mask).
pub fn decompose(p: &Poset) -> Result<Decomposition> {
    let sets = autonomous_sets(p)?;
    let chosen = sets.iter().find(|s| !induces_chain(p, s)).or(sets.first());
    match chosen {
        None => Ok(Decomposition::Indecomposable),
        Some(s) => Ok(Decomposition::Split(split_at(p, s.mask)?)),
    }
}

fn induces_chain(p: &Poset, s: &AutonomousSet) -> bool {
    bits(s.mask).all(|a| p.incomparable_mask(a) & s.mask == 0)
}

/// One level of a decomposition-based witness: `P = base o_index factor` and
/// the factor's witness lifted with multiplier `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftStep {
    /// The factor's elements, numbered as in the top-level poset.
    pub members: Vec<usize>,
    pub index: usize,
    pub factor_size: usize,
    #[serde(serialize_with = "crate::linext::decimal::serialize")]
    pub k: Count,
    pub completed_branches: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ViaDecomposition {
    /// A witness for `P` built by lifting; `steps` run outermost first and
    /// `innermost` is the directly found witness of the last factor.
    Lifted {
        witness: GpcWitness,
        steps: Vec<LiftStep>,
        innermost: GpcWitness,
    },
    /// No usable non-chain factor; the direct search result on `P`.
    Fallback(GpcVerdict),
}

impl ViaDecomposition {
    pub fn witness(&self) -> Option<&GpcWitness> {
        match self {
            ViaDecomposition::Lifted { witness, .. } => Some(witness),
            ViaDecomposition::Fallback(v) => v.witness(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ViaDecomposition::Lifted { steps, .. } => steps.len(),
            ViaDecomposition::Fallback(_) => 0,
        }
    }
}

/// GPC for `P` by lifting a witness from its largest proper non-chain
/// autonomous factor (ties by mask), recursing into the factor; falls back to
/// the direct search.
pub fn gpc_via_decomposition(p: &Poset, opts: GpcOptions) -> Result<ViaDecomposition> {
    if p.len() <= AUTONOMOUS_CAP {
        let factor_set = autonomous_sets(p)?
            .into_iter()
            .filter(|s| !induces_chain(p, s))
            .min_by_key(|s| (std::cmp::Reverse(s.len()), s.mask));
        if let Some(s) = factor_set {
            let split = split_at(p, s.mask)?;
            let inner = gpc_via_decomposition(&split.factor, opts)?;
            if let Some(factor_witness) = inner.witness().cloned() {
                let lifted = lexsum::lift_gpc_witness(
                    &split.base,
                    split.index,
                    &split.factor,
                    &factor_witness,
                    opts,
                )?;
                let witness = map_witness(&lifted.witness, &split.to_original);
                conjectures::verify_witness(p, &witness, opts)?;
                let step = LiftStep {
                    members: split.members.clone(),
                    index: split.index,
                    factor_size: split.factor.len(),
                    k: lifted.k,
                    completed_branches: lifted.completed_branches,
                };
                let (mut steps, innermost) = match inner {
                    ViaDecomposition::Lifted {
                        mut steps,
                        innermost,
                        ..
                    } => {
                        for st in &mut steps {
                            st.members = st.members.iter().map(|&q| split.members[q]).collect();
                        }
                        (steps, innermost)
                    }
                    ViaDecomposition::Fallback(_) => (Vec::new(), factor_witness),
                };
                steps.insert(0, step);
                return Ok(ViaDecomposition::Lifted {
                    witness,
                    steps,
                    innermost,
                });
            }
        }
    }
    Ok(ViaDecomposition::Fallback(conjectures::check_gpc(p, opts)?))
}

fn map_witness(w: &GpcWitness, to: &[usize]) -> GpcWitness {
    let pair = |(a, b): (usize, usize)| (to[a], to[b]);
    let mut out = w.clone();
    out.first = pair(w.first);
    for br in &mut out.branches {
        br.result = pair(br.result);
        br.second = br.second.map(pair);
    }
    out
}

/// Invariants used to compare a rebuilt poset with the original when exact
/// canonical keys are out of reach.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub degrees: Vec<(u32, u32)>,
    #[serde(serialize_with = "crate::linext::decimal::serialize")]
    pub extensions: Count,
    pub width: usize,
}

pub fn fingerprint(p: &Poset) -> Fingerprint {
    Fingerprint {
        degrees: p.degree_sequence(),
        extensions: count_extensions(p),
        width: p.width(),
    }
}
