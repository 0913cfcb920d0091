//! Exhaustive GPC and 1/3-2/3 checks over all labeled posets of a given size.

use gpc_core::conjectures::{self, GpcOptions, OneThirdVerdict};
use gpc_core::generate::labeled_posets;
use gpc_core::{Poset, Ratio};
use rayon::prelude::*;
use serde::Serialize;

pub const SWEEP_CAP: usize = 6;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SizeSummary {
    pub n: usize,
    pub posets: usize,
    pub non_chains: usize,
    pub gpc_failures: usize,
    pub one_third_failures: usize,
    /// Witnesses whose first comparison is not a balanced pair.
    pub unbalanced_first_pairs: usize,
    /// Up to ten failing posets, as cover lists.
    pub examples: Vec<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub max_n: usize,
    pub sizes: Vec<SizeSummary>,
    pub gpc_failures: usize,
    pub one_third_failures: usize,
    pub unbalanced_first_pairs: usize,
}

impl SweepSummary {
    pub fn failed(&self) -> bool {
        self.gpc_failures + self.one_third_failures + self.unbalanced_first_pairs > 0
    }
}

#[derive(Clone, Copy, Default)]
struct Verdict {
    gpc_failed: bool,
    one_third_failed: bool,
    unbalanced_first: bool,
}

fn check(p: &Poset, opts: GpcOptions) -> gpc_core::Result<Verdict> {
    let gpc = conjectures::check_gpc(p, opts)?;
    let one_third = conjectures::check_one_third(p)?;
    let unbalanced_first = match gpc.witness() {
        Some(w) => {
            conjectures::verify_witness(p, w, opts)?;
            let prob = gpc_core::linext::prob(p, w.first.0, w.first.1)?;
            !prob.within(&Ratio::new(1u32, 3u32), &Ratio::new(2u32, 3u32))
        }
        None => false,
    };
    Ok(Verdict {
        gpc_failed: gpc.witness().is_none(),
        one_third_failed: matches!(one_third, OneThirdVerdict::Failure(_)),
        unbalanced_first,
    })
}

/// Runs both checks on every non-chain labeled poset with `1..=max_n`
/// elements. Results are aggregated in generation order.
pub fn sweep(max_n: usize, opts: GpcOptions) -> anyhow::Result<SweepSummary> {
    anyhow::ensure!(
        (1..=SWEEP_CAP).contains(&max_n),
        "sweep size must be between 1 and {SWEEP_CAP}"
    );
    let mut sizes = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let posets = labeled_posets(n);
        let verdicts: Vec<Option<Verdict>> = posets
            .par_iter()
            .map(|p| {
                if p.is_chain() {
                    Ok(None)
                } else {
                    check(p, opts).map(Some)
                }
            })
            .collect::<gpc_core::Result<_>>()?;
        let mut s = SizeSummary {
            n,
            posets: posets.len(),
            ..Default::default()
        };
        for (p, v) in posets.iter().zip(&verdicts) {
            let Some(v) = v else { continue };
            s.non_chains += 1;
            s.gpc_failures += v.gpc_failed as usize;
            s.one_third_failures += v.one_third_failed as usize;
            s.unbalanced_first_pairs += v.unbalanced_first as usize;
            if (v.gpc_failed || v.one_third_failed || v.unbalanced_first) && s.examples.len() < 10 {
                s.examples.push(p.covers().pairs);
            }
        }
        sizes.push(s);
    }
    Ok(SweepSummary {
        max_n,
        gpc_failures: sizes.iter().map(|s| s.gpc_failures).sum(),
        one_third_failures: sizes.iter().map(|s| s.one_third_failures).sum(),
        unbalanced_first_pairs: sizes.iter().map(|s| s.unbalanced_first_pairs).sum(),
        sizes,
    })
}

pub fn sweep_text(s: &SweepSummary) -> String {
    let mut out = format!(
        "{:>2}  {:>8}  {:>10}  {:>12}  {:>18}  {:>16}\n",
        "n", "posets", "non-chains", "gpc failures", "1/3-2/3 failures", "unbalanced first"
    );
    for r in &s.sizes {
        out.push_str(&format!(
            "{:>2}  {:>8}  {:>10}  {:>12}  {:>18}  {:>16}\n",
            r.n,
            r.posets,
            r.non_chains,
            r.gpc_failures,
            r.one_third_failures,
            r.unbalanced_first_pairs
        ));
    }
    out.push_str(&format!(
        "total failures: gpc {}, 1/3-2/3 {}, unbalanced first pair {}\n",
        s.gpc_failures, s.one_third_failures, s.unbalanced_first_pairs
    ));
    out
}
