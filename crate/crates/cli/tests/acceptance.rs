//! One line per acceptance criterion. Run with `cargo test --test acceptance`.

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gpc_cli::read_poset;
use gpc_cli::sweep::sweep;
use gpc_core::conjectures::{self, GpcOptions, Inequality, SortCostSolver};
use gpc_core::decompose::{self, ViaDecomposition};
use gpc_core::generate::labeled_posets;
use gpc_core::lexsum::{self, compose_at, lex_sum, ordinal_sum};
use gpc_core::linext::{
    self, count_extensions, enumerate_extensions, DEFAULT_ENUMERATION_CAP as CAP,
};
use gpc_core::poset::ObstructionKind;
use gpc_core::{canonical_key, CanonicalKey, Count, Poset, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_0f1a_71ce;
const RANDOM_INSTANCES: usize = 200;
const ORDINAL_PAIRS: usize = 100;
const TABLE_BUDGET: Duration = Duration::from_secs(1);
const DELTA_BUDGET: Duration = Duration::from_secs(1);
const DECOMPOSABLE_BUDGET: Duration = Duration::from_secs(30);

const EXTENSION_TABLE: [[[usize; 6]; 14]; 3] = [
    [
        [1, 2, 3, 4, 5, 6],
        [1, 2, 3, 4, 6, 5],
        [1, 2, 4, 3, 5, 6],
        [1, 2, 4, 3, 6, 5],
        [1, 3, 4, 2, 5, 6],
        [1, 3, 4, 2, 6, 5],
        [2, 3, 4, 1, 5, 6],
        [2, 3, 4, 1, 6, 5],
        [1, 2, 5, 3, 6, 4],
        [1, 3, 5, 2, 6, 4],
        [2, 3, 5, 1, 6, 4],
        [1, 4, 5, 2, 6, 3],
        [2, 4, 5, 1, 6, 3],
        [3, 4, 5, 1, 6, 2],
    ],
    [
        [2, 1, 3, 4, 5, 6],
        [2, 1, 3, 4, 6, 5],
        [2, 1, 4, 3, 5, 6],
        [2, 1, 4, 3, 6, 5],
        [3, 1, 4, 2, 5, 6],
        [3, 1, 4, 2, 6, 5],
        [3, 2, 4, 1, 5, 6],
        [3, 2, 4, 1, 6, 5],
        [2, 1, 5, 3, 6, 4],
        [3, 1, 5, 2, 6, 4],
        [3, 2, 5, 1, 6, 4],
        [4, 1, 5, 2, 6, 3],
        [4, 2, 5, 1, 6, 3],
        [4, 3, 5, 1, 6, 2],
    ],
    [
        [3, 1, 2, 4, 5, 6],
        [3, 1, 2, 4, 6, 5],
        [4, 1, 2, 3, 5, 6],
        [4, 1, 2, 3, 6, 5],
        [4, 1, 3, 2, 5, 6],
        [4, 1, 3, 2, 6, 5],
        [4, 2, 3, 1, 5, 6],
        [4, 2, 3, 1, 6, 5],
        [5, 1, 2, 3, 6, 4],
        [5, 1, 3, 2, 6, 4],
        [5, 2, 3, 1, 6, 4],
        [5, 1, 4, 2, 6, 3],
        [5, 2, 4, 1, 6, 3],
        [5, 3, 4, 1, 6, 2],
    ],
];

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn example(name: &str) -> Poset {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", name]
        .iter()
        .collect();
    read_poset(&path).unwrap_or_else(|e| panic!("{e:#}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(budget: Duration, start: Instant) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < budget, || {
        format!("took {spent:?}, budget {budget:?}")
    })
}

fn random_poset(rng: &mut ChaCha8Rng, max: usize) -> Poset {
    let n = rng.gen_range(1..=max);
    let mut rel = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.35) {
                rel.push((a, b));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        perm.swap(k, rng.gen_range(0..=k));
    }
    Poset::from_relations(n, &rel)
        .unwrap()
        .relabel(&perm)
        .unwrap()
}

fn delta_or_zero(p: &Poset) -> Ratio {
    if p.is_chain() {
        Ratio::zero()
    } else {
        linext::delta(p).unwrap().value
    }
}

/// One poset per isomorphism class, for every size up to `max_n`.
fn iso_classes(max_n: usize) -> Vec<Poset> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let mut seen: HashMap<CanonicalKey, Poset> = HashMap::new();
        for p in labeled_posets(n) {
            seen.entry(canonical_key(&p).unwrap()).or_insert(p);
        }
        let mut reps: Vec<(CanonicalKey, Poset)> = seen.into_iter().collect();
        reps.sort_by_key(|(k, _)| *k);
        out.extend(reps.into_iter().map(|(_, p)| p));
    }
    out
}

struct Instance {
    base: Poset,
    index: usize,
    q: Poset,
    components: Vec<Poset>,
}

fn instances() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..RANDOM_INSTANCES)
        .map(|_| {
            let base = random_poset(&mut rng, 5);
            let index = rng.gen_range(0..base.len());
            let q = random_poset(&mut rng, 4);
            let components = (0..base.len()).map(|_| random_poset(&mut rng, 3)).collect();
            Instance {
                base,
                index,
                q,
                components,
            }
        })
        .collect()
}

fn extension_table() -> Outcome {
    let start = Instant::now();
    let p = example("table1.poset");
    let e = count_extensions(&p);
    ensure(e == Count::from(42u32), || format!("e = {e}, expected 42"))?;
    let t = lexsum::locality_table(&example("n.poset"), 0, &example("r_tu.poset"), CAP)
        .map_err(|e| e.to_string())?;
    let cols: Vec<Vec<usize>> = t.columns.iter().map(|g| g.sequence()).collect();
    // r < t < u, t < r < u, t < u < r
    ensure(
        cols == vec![vec![0, 1, 2], vec![1, 0, 2], vec![1, 2, 0]],
        || format!("columns {cols:?}"),
    )?;
    ensure(t.class_sizes == vec![14, 14, 14], || {
        format!("class sizes {:?}", t.class_sizes)
    })?;
    ensure(t.equal_classes && t.reconstruction_ok, || {
        "table identities fail".into()
    })?;

    let spec =
        compose_at(&example("n.poset"), 0, &example("r_tu.poset")).map_err(|e| e.to_string())?;
    ensure(spec.sum() == &p, || {
        "table1.poset differs from N o_w ({r} + {t<u})".into()
    })?;
    let enumerated: BTreeSet<Vec<usize>> = enumerate_extensions(&p, CAP)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|f| f.labels().to_vec())
        .collect();
    let frozen: BTreeSet<Vec<usize>> = EXTENSION_TABLE
        .iter()
        .flatten()
        .map(|r| r.to_vec())
        .collect();
    ensure(frozen.len() == 42, || {
        format!("frozen table has {} distinct rows", frozen.len())
    })?;
    ensure(enumerated == frozen, || {
        "enumerated extensions differ from the table".into()
    })?;
    for (c, rows) in EXTENSION_TABLE.iter().enumerate() {
        for row in rows {
            let f = gpc_core::LinearExtension::from_labels(row.to_vec());
            let g = lexsum::restrict_to_component(&spec, &f, 0).map_err(|e| e.to_string())?;
            ensure(g.sequence() == cols[c], || {
                format!("row {row:?} is not in column {c}")
            })?;
        }
    }
    within(TABLE_BUDGET, start)?;
    Ok(format!(
        "e = 42, 3 columns x 14 rows, 42 rows match, {:?}",
        start.elapsed()
    ))
}

fn balanced_pair_r_t() -> Outcome {
    let p = example("table1.poset");
    let (r, t) = (0, 1);
    let forward = linext::prob(&p, r, t).map_err(|e| e.to_string())?;
    let backward = linext::prob(&p, t, r).map_err(|e| e.to_string())?;
    ensure(forward == Ratio::new(1u32, 3u32), || {
        format!("P(r < t) = {forward}")
    })?;
    ensure(backward == Ratio::new(2u32, 3u32), || {
        format!("P(t < r) = {backward}")
    })?;
    Ok(format!("P(r < t) = {forward}, P(t < r) = {backward}"))
}

fn delta_values() -> Outcome {
    let start = Instant::now();
    let a = linext::delta(&example("p163425.poset"))
        .map_err(|e| e.to_string())?
        .value;
    let b = linext::delta(&example("p15324.poset"))
        .map_err(|e| e.to_string())?
        .value;
    ensure(a == Ratio::new(7u32, 15u32), || {
        format!("delta(163425) = {a}")
    })?;
    ensure(b == Ratio::new(1u32, 2u32), || {
        format!("delta(15324) = {b}")
    })?;
    within(DELTA_BUDGET, start)?;
    Ok(format!(
        "delta(163425) = {a}, delta(15324) = {b}, {:?}",
        start.elapsed()
    ))
}

fn decomposable_example() -> Outcome {
    let start = Instant::now();
    let p = example("example3.poset");
    ensure(p.len() == 19, || format!("{} elements", p.len()))?;
    let w = p.width();
    ensure(w == 8, || format!("width {w}"))?;
    ensure(!p.is_semiorder(), || "reported as a semiorder".into())?;
    let three_plus_one = p
        .semiorder_obstructions()
        .into_iter()
        .find(|o| o.kind == ObstructionKind::ThreePlusOne)
        .ok_or("no induced 3+1")?;
    let mask = three_plus_one
        .elements
        .iter()
        .fold(0u64, |m, &x| m | 1 << x);
    let induced = p.induced(mask).map_err(|e| e.to_string())?;
    ensure(
        canonical_key(&induced).unwrap() == canonical_key(&example("p4123.poset")).unwrap(),
        || "exhibited quadruple is not a 3+1".into(),
    )?;

    let d = decompose::decompose(&p).map_err(|e| e.to_string())?;
    let split = d.split().ok_or("reported indecomposable")?;
    ensure(
        canonical_key(&split.factor).unwrap() == canonical_key(&example("p312.poset")).unwrap(),
        || format!("factor on {:?} is not 2-chain + point", split.members),
    )?;

    let opts = GpcOptions::default();
    let via = decompose::gpc_via_decomposition(&p, opts).map_err(|e| e.to_string())?;
    let ViaDecomposition::Lifted {
        witness,
        steps,
        innermost,
    } = &via
    else {
        return Err("fell back to direct search".into());
    };
    conjectures::verify_witness(&p, witness, opts).map_err(|e| e.to_string())?;
    let k: Count = steps.iter().map(|s| s.k.clone()).product();
    ensure(witness.t0 == &k * &innermost.t0, || {
        "t0' is not k t0".into()
    })?;
    for (b, ib) in witness.branches.iter().zip(&innermost.branches) {
        ensure(b.t1 == &k * &ib.t1, || "t1' is not k t1".into())?;
        ensure(b.remaining() == &k * ib.remaining(), || {
            "t2' is not k t2".into()
        })?;
    }
    within(DECOMPOSABLE_BUDGET, start)?;
    Ok(format!(
        "width 8, 3+1 at {:?}, factor {:?}, lifted through {} levels with k = {k}, {:?}",
        three_plus_one.elements,
        split.members,
        steps.len(),
        start.elapsed()
    ))
}

fn locality_suite(instances: &[Instance]) -> Outcome {
    let mut bad = Vec::new();
    for (n, inst) in instances.iter().enumerate() {
        let t = lexsum::locality_table(&inst.base, inst.index, &inst.q, CAP)
            .map_err(|e| e.to_string())?;
        if !t.equal_classes
            || !t.reconstruction_ok
            || Count::from(t.k) * count_extensions(&inst.q) != t.extensions
        {
            bad.push(format!("locality #{n}"));
        }
        let d =
            lexsum::verify_divisibility(&inst.base, &inst.components).map_err(|e| e.to_string())?;
        if !d.divides {
            bad.push(format!("divisibility #{n}"));
        }
    }
    ensure(bad.is_empty(), || format!("violations: {bad:?}"))?;
    Ok(format!("{} instances, 0 violations", instances.len()))
}

/// `(t0', [(t1', remaining')])` recounted from scratch on the sum.
fn recount(sum: &Poset, w: &gpc_core::conjectures::GpcWitness) -> (Count, Vec<(Count, Count)>) {
    let t0 = count_extensions(sum);
    let branches = w
        .branches
        .iter()
        .map(|b| {
            let branch = sum.with_relation(b.result.0, b.result.1).unwrap();
            let t1 = count_extensions(&branch);
            let rest = match b.second {
                Some((c, d)) if !branch.comparable(c, d) => {
                    linext::count_with_relation(&branch, c, d)
                        .max(linext::count_with_relation(&branch, d, c))
                }
                _ => t1.clone(),
            };
            (t1, rest)
        })
        .collect();
    (t0, branches)
}

fn lifting_suite(instances: &[Instance]) -> Outcome {
    let opts = GpcOptions::default();
    let mut lifted = 0;
    let mut bad = Vec::new();
    for (n, inst) in instances.iter().enumerate() {
        if inst.q.is_chain() {
            continue;
        }
        let v = conjectures::check_gpc(&inst.q, opts).map_err(|e| e.to_string())?;
        let Some(w) = v.witness() else { continue };
        let l = match lexsum::lift_gpc_witness(&inst.base, inst.index, &inst.q, w, opts) {
            Ok(l) => l,
            Err(e) => {
                bad.push(format!("#{n}: {e}"));
                continue;
            }
        };
        let sum = compose_at(&inst.base, inst.index, &inst.q)
            .unwrap()
            .into_sum();
        let (t0, branches) = recount(&sum, &l.witness);
        let mut ok = t0 == l.witness.t0 && t0 == &l.k * &w.t0;
        for ((t1, rest), b) in branches.iter().zip(&w.branches) {
            ok &= *t1 == &l.k * &b.t1 && *rest == &l.k * b.remaining();
        }
        if !ok {
            bad.push(format!("#{n}: recount mismatch"));
        }
        lifted += 1;
    }
    ensure(bad.is_empty(), || format!("violations: {bad:?}"))?;
    Ok(format!(
        "{lifted} witnesses lifted and recounted, 0 violations"
    ))
}

fn preservation_suite(instances: &[Instance]) -> Outcome {
    let mut bad = Vec::new();
    let mut pairs = 0;
    for (n, inst) in instances.iter().enumerate() {
        let spec = lex_sum(&inst.base, &inst.components).map_err(|e| e.to_string())?;
        for (ci, q) in inst.components.iter().enumerate() {
            for a in q.elements() {
                for b in q.elements().filter(|&b| b != a) {
                    pairs += 1;
                    let (x, y) = (spec.embed(ci)[a], spec.embed(ci)[b]);
                    if lexsum::prob_preservation(&spec, ci, x, y).is_err() {
                        bad.push(format!("preservation #{n}"));
                    }
                }
            }
        }
        let top = inst.components.iter().map(delta_or_zero).max().unwrap();
        if delta_or_zero(spec.sum()) < top {
            bad.push(format!("delta monotonicity #{n}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xa5);
    for n in 0..ORDINAL_PAIRS {
        let p = random_poset(&mut rng, 4);
        let q = random_poset(&mut rng, 4);
        let s = ordinal_sum(&p, &q).unwrap();
        if delta_or_zero(&s) != delta_or_zero(&p).max(delta_or_zero(&q)) {
            bad.push(format!("ordinal sum #{n}"));
        }
    }
    ensure(bad.is_empty(), || format!("violations: {bad:?}"))?;
    Ok(format!(
        "{pairs} component pairs, {} sums, {ORDINAL_PAIRS} ordinal sums, 0 violations",
        instances.len()
    ))
}

fn exhaustive_sweep() -> Outcome {
    let start = Instant::now();
    let s = sweep(6, GpcOptions::default()).map_err(|e| e.to_string())?;
    let checked: usize = s.sizes.iter().map(|r| r.non_chains).sum();
    ensure(!s.failed(), || {
        format!(
            "gpc {}, 1/3-2/3 {}, unbalanced first pairs {}",
            s.gpc_failures, s.one_third_failures, s.unbalanced_first_pairs
        )
    })?;
    Ok(format!(
        "{checked} non-chains on <= 6 labeled elements, 0 failures, {:?}",
        start.elapsed()
    ))
}

fn chain_substitution() -> Outcome {
    let mut checks = 0;
    let mut bad = Vec::new();
    for p in iso_classes(5) {
        for point in p.elements() {
            let profile = lexsum::gap_profile(&p, point, CAP).map_err(|e| e.to_string())?;
            for m in 1..=3 {
                let spec = compose_at(&p, point, &Poset::chain(m).unwrap()).unwrap();
                let all = enumerate_extensions(spec.sum(), CAP).map_err(|e| e.to_string())?;
                if profile.substituted_count(m) != Count::from(all.len()) {
                    bad.push(format!("count {:?} at {point}, m = {m}", p.covers().pairs));
                }
                for x in p.elements().filter(|&x| x != point) {
                    for y in p.elements().filter(|&y| y != point && y != x) {
                        let (sx, sy) = (spec.embed(x)[0], spec.embed(y)[0]);
                        let before = all.iter().filter(|f| f.precedes(sx, sy)).count();
                        let brute = Ratio::new(before as u64, all.len() as u64);
                        if lexsum::profile_probability(&profile, m, x, y) != brute {
                            bad.push(format!(
                                "prob {:?} at {point}, m = {m}, ({x}, {y})",
                                p.covers().pairs
                            ));
                        }
                        checks += 1;
                    }
                }
            }
        }
    }
    ensure(bad.is_empty(), || {
        format!("violations: {:?}", &bad[..bad.len().min(5)])
    })?;
    Ok(format!(
        "{checks} probabilities over all posets on <= 5 elements, m in 1..=3, 0 violations"
    ))
}

fn golden_bound() -> Outcome {
    let mut solver = SortCostSolver::new();
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in iso_classes(6).into_iter().filter(|p| !p.is_chain()) {
        let g = conjectures::gold_bound(&p, &mut solver).map_err(|e| e.to_string())?;
        if !g.holds || g.sort_cost < conjectures::information_bound(&g.extensions) {
            bad.push(p.covers().pairs);
        }
        checked += 1;
    }
    ensure(bad.is_empty(), || format!("violations: {bad:?}"))?;
    Ok(format!(
        "{checked} non-chain posets on <= 6 elements, 0 violations"
    ))
}

fn main() -> ExitCode {
    let data = instances();
    let criteria: Vec<Criterion> = vec![
        (
            "extension table of N with {r} + {t < u}",
            Box::new(extension_table),
        ),
        ("balanced pair (r, t)", Box::new(balanced_pair_r_t)),
        ("delta values", Box::new(delta_values)),
        ("19-element example", Box::new(decomposable_example)),
        (
            "locality and divisibility",
            Box::new(|| locality_suite(&data)),
        ),
        ("witness lifting", Box::new(|| lifting_suite(&data))),
        (
            "probability preservation and delta",
            Box::new(|| preservation_suite(&data)),
        ),
        ("exhaustive sweep to 6", Box::new(exhaustive_sweep)),
        ("chain substitution formula", Box::new(chain_substitution)),
        ("golden ratio bound", Box::new(golden_bound)),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL [{}] {name}: {detail}", k + 1);
            }
        }
    }
    let strict = GpcOptions {
        inequality: Inequality::Strict,
        ..GpcOptions::default()
    };
    if let Ok(s) = sweep(6, strict) {
        println!(
            "INFO strict t0 > t1 + t2 on <= 6 elements: {} of the non-chains have no witness",
            s.gpc_failures
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
