//! The `gpc` command line: file I/O, dispatch and reports.

pub mod report;
pub mod sumspec;
pub mod sweep;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use gpc_core::conjectures::{
    self, ChainBranch, GpcOptions, GpcVerdict, Inequality, Mode, OneThirdVerdict,
};
use gpc_core::decompose::{self, Decomposition, ViaDecomposition};
use gpc_core::format::{parse_poset, write_poset};
use gpc_core::lexsum::{self, compose_at, lex_sum};
use gpc_core::linext::{self, count_extensions, enumerate_extensions, DEFAULT_ENUMERATION_CAP};
use gpc_core::Poset;
use serde_json::json;

use report::{aligned, witness_text, Outcome};

#[derive(Parser, Debug)]
#[command(
    name = "gpc",
    version,
    about = "Exact linear-extension analytics on finite posets"
)]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest number of linear extensions any enumeration may produce.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy, Default)]
pub struct GpcFlags {
    /// Use one second comparison for both outcomes of the first.
    #[arg(long)]
    pub nonadaptive: bool,
    /// Require t0 > t1 + t2 instead of t0 >= t1 + t2.
    #[arg(long)]
    pub strict: bool,
    /// Count a chain branch as t2 = 1 instead of 0.
    #[arg(long = "chain-t2-one")]
    pub chain_t2_one: bool,
}

impl GpcFlags {
    pub fn options(self) -> GpcOptions {
        GpcOptions {
            mode: if self.nonadaptive {
                Mode::NonAdaptive
            } else {
                Mode::Adaptive
            },
            inequality: if self.strict {
                Inequality::Strict
            } else {
                Inequality::NonStrict
            },
            chain_branch: if self.chain_t2_one {
                ChainBranch::One
            } else {
                ChainBranch::Zero
            },
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number of linear extensions.
    Count { file: PathBuf },
    /// List every linear extension as labels, one per element.
    Enum { file: PathBuf },
    /// P(x < y) for every ordered incomparable pair.
    Probs { file: PathBuf },
    /// The balance constant delta(P) and a pair achieving it.
    Delta { file: PathBuf },
    /// Look for a pair with P(x < y) in [1/3, 2/3].
    #[command(name = "check-13-23")]
    CheckOneThird { file: PathBuf },
    /// Look for two comparisons satisfying the gold partition inequality.
    CheckGpc {
        file: PathBuf,
        #[command(flatten)]
        flags: GpcFlags,
        /// Lift a witness from a lexicographic factor when possible.
        #[arg(long)]
        via_decomposition: bool,
    },
    /// Fewest comparisons that always suffice to sort the poset.
    SortCost { file: PathBuf },
    /// Check C(P) <= log_phi e(P) exactly.
    GoldBound { file: PathBuf },
    /// Lexicographic sum BASE(Q1, ..., Qn).
    Lexsum {
        base: PathBuf,
        #[arg(required = true)]
        components: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Substitute Q for element INDEX of BASE.
    ComposeAt {
        base: PathBuf,
        index: usize,
        q: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the extension table of a substitution and check its identities.
    VerifyLocality { spec: PathBuf },
    /// Lift a GPC witness of Q to BASE with Q substituted at INDEX.
    LiftGpc {
        base: PathBuf,
        index: usize,
        q: PathBuf,
        #[command(flatten)]
        flags: GpcFlags,
    },
    /// Split off an autonomous set as a lexicographic factor.
    Decompose { file: PathBuf },
    /// Hasse diagram in Graphviz format.
    Dot { file: PathBuf },
    /// Check every labeled poset on up to N elements.
    Sweep {
        n: usize,
        #[command(flatten)]
        flags: GpcFlags,
    },
}

pub fn read_poset(path: &Path) -> anyhow::Result<Poset> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_poset(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_or_print(p: &Poset, output: &Option<PathBuf>) -> anyhow::Result<String> {
    let text = write_poset(p);
    match output {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            Ok(format!("wrote {} ({} elements)\n", path.display(), p.len()))
        }
        None => Ok(text),
    }
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let mut outcome = dispatch(cli)?;
    if cli.timing {
        outcome.report.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(outcome)
}

fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    let cap = cli.cap;
    match &cli.command {
        Command::Count { file } => {
            let p = read_poset(file)?;
            let e = count_extensions(&p);
            Ok(Outcome::new(
                "count",
                Some(&p),
                json!({ "extensions": e.to_string() }),
                format!("{e}\n"),
            ))
        }
        Command::Enum { file } => {
            let p = read_poset(file)?;
            let all = enumerate_extensions(&p, cap)?;
            let rows: Vec<Vec<usize>> = all.iter().map(|f| f.labels().to_vec()).collect();
            let text: String = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|l| l.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                        + "\n"
                })
                .collect();
            Ok(Outcome::new(
                "enum",
                Some(&p),
                json!({ "labels": rows }),
                text,
            ))
        }
        Command::Probs { file } => {
            let p = read_poset(file)?;
            let m = linext::pair_counts(&p);
            let mut rows = Vec::new();
            let mut text = String::from("x\ty\tprob\tdecimal\n");
            for x in p.elements() {
                for y in p.elements() {
                    if x != y && !p.comparable(x, y) {
                        let r = m.prob(x, y);
                        text.push_str(&format!("{x}\t{y}\t{r}\t{:.6}\n", r.to_f64()));
                        rows.push(json!({ "x": x, "y": y, "prob": r, "decimal": r.to_f64() }));
                    }
                }
            }
            Ok(Outcome::new(
                "probs",
                Some(&p),
                json!({ "pairs": rows }),
                text,
            ))
        }
        Command::Delta { file } => {
            let p = read_poset(file)?;
            let d = linext::delta(&p)?;
            let text = format!(
                "{}\tpair {} {}\t{:.6}\n",
                d.value,
                d.pair.0,
                d.pair.1,
                d.value.to_f64()
            );
            Ok(Outcome::new("delta", Some(&p), &d, text))
        }
        Command::CheckOneThird { file } => {
            let p = read_poset(file)?;
            if p.is_chain() {
                return Ok(Outcome::new(
                    "check-13-23",
                    Some(&p),
                    json!({ "chain": true }),
                    "chain: nothing to check\n".into(),
                ));
            }
            let v = conjectures::check_one_third(&p)?;
            let (text, failed) = match &v {
                OneThirdVerdict::Balanced(b) => (
                    format!("balanced pair {} {}: P = {}\n", b.pair.0, b.pair.1, b.prob),
                    false,
                ),
                OneThirdVerdict::Failure(d) => (
                    format!("FAILURE: no balanced pair, delta = {}\n", d.value),
                    true,
                ),
            };
            Ok(Outcome::new("check-13-23", Some(&p), &v, text).failing_if(failed))
        }
        Command::CheckGpc {
            file,
            flags,
            via_decomposition,
        } => {
            let p = read_poset(file)?;
            if p.is_chain() {
                bail!(
                    "{} is a chain; the gold partition conjecture concerns non-chains",
                    file.display()
                );
            }
            let opts = flags.options();
            if *via_decomposition {
                let via = decompose::gpc_via_decomposition(&p, opts)?;
                let text = match &via {
                    ViaDecomposition::Lifted { witness, steps, .. } => {
                        let mut t = witness_text(witness);
                        for s in steps {
                            t.push_str(&format!(
                                "lifted from factor {:?} with k = {}\n",
                                s.members, s.k
                            ));
                        }
                        t
                    }
                    ViaDecomposition::Fallback(v) => {
                        verdict_text(v, "direct search (no non-chain factor)\n")
                    }
                };
                let failed = via.witness().is_none();
                return Ok(Outcome::new("check-gpc", Some(&p), &via, text).failing_if(failed));
            }
            let v = conjectures::check_gpc(&p, opts)?;
            let failed = v.witness().is_none();
            Ok(Outcome::new("check-gpc", Some(&p), &v, verdict_text(&v, "")).failing_if(failed))
        }
        Command::SortCost { file } => {
            let p = read_poset(file)?;
            let c = conjectures::sort_cost(&p)?;
            let e = count_extensions(&p);
            let lower = conjectures::information_bound(&e);
            let text = aligned(&[
                ("sort cost", c.to_string()),
                ("extensions", e.to_string()),
                ("ceil log2 e", lower.to_string()),
            ]);
            let result =
                json!({ "sort_cost": c, "extensions": e.to_string(), "information_bound": lower });
            Ok(Outcome::new("sort-cost", Some(&p), result, text))
        }
        Command::GoldBound { file } => {
            let p = read_poset(file)?;
            let g = conjectures::gold_bound(&p, &mut conjectures::SortCostSolver::new())?;
            let text = aligned(&[
                ("sort cost", g.sort_cost.to_string()),
                ("extensions", g.extensions.to_string()),
                ("phi^C <= e", g.holds.to_string()),
            ]);
            let failed = !g.holds;
            Ok(Outcome::new("gold-bound", Some(&p), &g, text).failing_if(failed))
        }
        Command::Lexsum {
            base,
            components,
            output,
        } => {
            let b = read_poset(base)?;
            let qs = components
                .iter()
                .map(|c| read_poset(c))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let spec = lex_sum(&b, &qs)?;
            let text = write_or_print(spec.sum(), output)?;
            let result = json!({ "trivial": spec.is_trivial(), "sum": spec.sum() });
            Ok(Outcome::new("lexsum", Some(spec.sum()), result, text))
        }
        Command::ComposeAt {
            base,
            index,
            q,
            output,
        } => {
            let spec = compose_at(&read_poset(base)?, *index, &read_poset(q)?)?;
            let text = write_or_print(spec.sum(), output)?;
            let result = json!({ "trivial": spec.is_trivial(), "embed": spec.embed(*index), "sum": spec.sum() });
            Ok(Outcome::new("compose-at", Some(spec.sum()), result, text))
        }
        Command::VerifyLocality { spec } => {
            let s = sumspec::load(spec)?;
            let table = lexsum::locality_table(&s.base, s.index, &s.factor, cap)?;
            let e_q = count_extensions(&s.factor);
            let divisible = &table.extensions % &e_q == gpc_core::Count::default();
            let columns: Vec<Vec<usize>> = table.columns.iter().map(|g| g.sequence()).collect();
            let ok = table.equal_classes && table.reconstruction_ok && divisible;
            let result = json!({
                "columns": columns.len(),
                "column_orders": columns,
                "k": table.k,
                "e": table.extensions.to_string(),
                "class_sizes": table.class_sizes,
                "divisible": divisible,
                "equal_classes": table.equal_classes,
                "reconstruction_ok": table.reconstruction_ok,
            });
            let text = aligned(&[
                ("columns", columns.len().to_string()),
                ("rows (k)", table.k.to_string()),
                ("e", table.extensions.to_string()),
                ("class sizes", format!("{:?}", table.class_sizes)),
                ("divisible", divisible.to_string()),
                ("reconstruction", table.reconstruction_ok.to_string()),
            ]);
            let sum = compose_at(&s.base, s.index, &s.factor)?.into_sum();
            Ok(Outcome::new("verify-locality", Some(&sum), result, text).failing_if(!ok))
        }
        Command::LiftGpc {
            base,
            index,
            q,
            flags,
        } => {
            let b = read_poset(base)?;
            let q = read_poset(q)?;
            if q.is_chain() {
                bail!("the factor is a chain; only non-chain witnesses lift");
            }
            let opts = flags.options();
            let v = conjectures::check_gpc(&q, opts)?;
            let Some(w) = v.witness() else {
                let text = verdict_text(&v, "factor has no witness\n");
                return Ok(Outcome::new("lift-gpc", Some(&q), &v, text).failing_if(true));
            };
            let lifted = lexsum::lift_gpc_witness(&b, *index, &q, w, opts)?;
            let sum = compose_at(&b, *index, &q)?.into_sum();
            let mut text = format!("k = {}\n", lifted.k);
            text.push_str(&witness_text(&lifted.witness));
            let result = json!({ "factor_witness": w, "lifted": lifted });
            Ok(Outcome::new("lift-gpc", Some(&sum), result, text))
        }
        Command::Decompose { file } => {
            let p = read_poset(file)?;
            let d = decompose::decompose(&p)?;
            let (result, text) = match &d {
                Decomposition::Indecomposable => (
                    json!({ "indecomposable": true }),
                    "indecomposable\n".to_string(),
                ),
                Decomposition::Split(s) => (
                    json!({
                        "indecomposable": false,
                        "base": s.base,
                        "index": s.index,
                        "factor": s.factor,
                        "members": s.members,
                    }),
                    format!(
                        "factor members {:?} at base index {}\n# base\n{}# factor\n{}",
                        s.members,
                        s.index,
                        write_poset(&s.base),
                        write_poset(&s.factor)
                    ),
                ),
            };
            Ok(Outcome::new("decompose", Some(&p), result, text))
        }
        Command::Dot { file } => {
            let p = read_poset(file)?;
            let dot = p.to_dot();
            Ok(Outcome::new("dot", Some(&p), json!({ "dot": dot }), dot))
        }
        Command::Sweep { n, flags } => {
            let s = sweep::sweep(*n, flags.options())?;
            let text = sweep::sweep_text(&s);
            let failed = s.failed();
            Ok(Outcome::new("sweep", None, &s, text).failing_if(failed))
        }
    }
}

fn verdict_text(v: &GpcVerdict, prefix: &str) -> String {
    let mut t = prefix.to_string();
    match v {
        GpcVerdict::Witness(w) => t.push_str(&witness_text(w)),
        GpcVerdict::Failure(f) => t.push_str(&format!(
            "FAILURE: no witness among {} first pairs, t0 = {}, delta = {}\n",
            f.pairs_tried, f.t0, f.delta.value
        )),
    }
    t
}
